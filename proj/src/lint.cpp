#include "lint.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "builtins.hpp"
#include "expander.hpp"

namespace modlog {

namespace {

const char* severity_name(lint_severity s) {
  switch (s) {
    case lint_severity::info: return "info";
    case lint_severity::warning: return "warning";
    case lint_severity::error: return "error";
  }
  return "?";
}

bool contains_var(const term_ptr& t, long long id) {
  if (t->kind == term_kind::var) return t->ival == id;
  if (t->kind != term_kind::compound) return false;
  for (const auto& a : t->args)
    if (contains_var(a, id)) return true;
  return false;
}

// Walks the control skeleton of a body; yields each leaf goal with its
// qualifier stripped. Goal arguments of builtin templates ('\\+'/1, catch/3,
// findall/3) are walked through as well.
void walk_leaves(const term_ptr& body,
                 const std::function<void(const term_ptr&)>& fn) {
  if (body->kind == term_kind::var) {
    fn(body);
    return;
  }
  if (body->kind != term_kind::compound && body->kind != term_kind::atom) return;
  if (is_functor(body, ",", 2) || is_functor(body, ";", 2) ||
      is_functor(body, "->", 2)) {
    walk_leaves(body->args[0], fn);
    walk_leaves(body->args[1], fn);
    return;
  }
  peeled_goal p = peel_static(body);
  if (p.goal->kind == term_kind::var) {
    fn(p.goal);
    return;
  }
  if (!is_callable(p.goal)) return;
  fn(p.goal);
  indicator ind = functor_of(p.goal);
  const builtin_info* b = find_builtin(ind.name, ind.arity);
  if (b && b->tmpl && b->id != builtin_id::call_n) {
    for (std::size_t i = 0;
         i < b->tmpl->specs.size() && i < p.goal->args.size(); ++i) {
      if (b->tmpl->specs[i].k == meta_arg_spec::kind::closure)
        walk_leaves(p.goal->args[i], fn);
    }
  }
}

struct linter {
  const module_db& db;
  int ceiling;
  std::vector<lint_record> out;

  void add(const source_loc& loc, const char* rule, lint_severity sev,
           std::string msg) {
    out.push_back({loc, rule, sev, std::move(msg)});
  }

  void directive_rules(const module_def& m) {
    for (const raw_directive& d : m.directives) {
      switch (d.form) {
        case directive_form::meta_predicate:
        case directive_form::metapredicate_iso: {
          bool iso = d.form == directive_form::metapredicate_iso;
          for (const term_ptr& raw : flatten_conjunction(d.t->args[0])) {
            template_result r = build_template(raw, iso);
            if (!r.ok) {
              add(d.loc, "D2", lint_severity::error, r.error);
              continue;
            }
            for (const std::string& a : r.extended_atoms)
              add(d.loc, "D3", lint_severity::warning,
                  "mode atom '" + a + "' carries extra annotations; treated as '?'");
          }
          break;
        }
        case directive_form::module_transparent: {
          for (const term_ptr& raw : flatten_conjunction(d.t->args[0])) {
            auto ind = term_to_indicator(raw);
            if (!ind) continue;
            add(d.loc, "D1", lint_severity::warning,
                "transparent predicate " + to_string(*ind) +
                    " takes its context from the caller; prefer a meta template");
          }
          break;
        }
        case directive_form::tool: {
          auto ind = term_to_indicator(d.t->args[0]);
          add(d.loc, "D1", lint_severity::warning,
              "tool interface " + (ind ? to_string(*ind) : std::string("?")) +
                  " appends the caller context at run time; prefer a meta template");
          break;
        }
        default:
          break;
      }
    }
  }

  void template_rules(const module_def& m) {
    for (const indicator& ind : m.pred_order) {
      const predicate_def& p = m.preds.at(ind);
      if (!p.tmpl) continue;
      if (p.clauses.empty() && !m.tools.count(ind) && p.tmpl_loc)
        add(*p.tmpl_loc, "D4", lint_severity::warning,
            "meta template for " + to_string(ind) + " has no clauses");
    }
  }

  // SR1: meta positions of a templated predicate's clause head.
  void head_rules(const predicate_def& p, const clause& c) {
    const meta_template& t = *p.tmpl;
    if (c.head->kind != term_kind::compound) return;
    std::vector<long long> seen_ids;
    std::vector<std::size_t> seen_pos;
    for (std::size_t i = 0; i < t.specs.size() && i < c.head->args.size(); ++i) {
      if (!t.specs[i].is_meta()) continue;
      const term_ptr& a = c.head->args[i];
      if (a->kind != term_kind::var) {
        add(c.loc, "SR1", lint_severity::error,
            "meta argument " + std::to_string(i + 1) + " of " + to_string(p.ind) +
                " must be a variable in the clause head");
        continue;
      }
      auto it = std::find(seen_ids.begin(), seen_ids.end(), a->ival);
      if (it != seen_ids.end()) {
        std::size_t first = seen_pos[it - seen_ids.begin()];
        add(c.loc, "SR1", lint_severity::warning,
            "meta arguments " + std::to_string(first + 1) + " and " +
                std::to_string(i + 1) + " of " + to_string(p.ind) +
                " share a variable");
      } else {
        seen_ids.push_back(a->ival);
        seen_pos.push_back(i);
      }
    }
  }

  // SR2 subjects: call/N closure arguments and bare variable body goals.
  // `context_driven` marks transparent predicates and tool implementations:
  // they have no template to declare meta arguments against, which is what
  // their D1 diagnostic already reports, so the variable-goal warning would
  // only repeat it.
  void call_site_rules(const std::string& mname, const clause& c,
                       const std::set<long long>& head_meta_vars,
                       bool context_driven) {
    walk_leaves(c.body, [&](const term_ptr& leaf) {
      if (leaf->kind == term_kind::var) {
        if (!head_meta_vars.count(leaf->ival) && !context_driven)
          add(c.loc, "SR2", lint_severity::warning,
              "meta-call of a variable that is not a declared meta argument");
        return;
      }
      indicator ind = functor_of(leaf);
      const builtin_info* b = find_builtin(ind.name, ind.arity);
      if (!b || b->id != builtin_id::call_n) return;

      if (ind.arity > ceiling)
        add(c.loc, "P1", lint_severity::warning,
            "call/" + std::to_string(ind.arity) + " exceeds the arity ceiling " +
                std::to_string(ceiling));

      peeled_goal subj = peel_static(leaf->args[0]);
      if (subj.module) return;  // explicitly qualified: nothing to check
      const term_ptr& s = subj.goal;
      if (s->kind == term_kind::var) {
        if (!head_meta_vars.count(s->ival) && !context_driven)
          add(c.loc, "SR2", lint_severity::warning,
              "meta-call of a variable that is not a declared meta argument");
        return;
      }
      if (!is_callable(s)) return;
      indicator target{s->text,
                       (s->kind == term_kind::compound
                            ? static_cast<int>(s->args.size())
                            : 0) +
                           static_cast<int>(ind.arity) - 1};
      resolution r;
      try {
        r = db.lookup(mname, target);
      } catch (const load_error&) {
        r = resolution{};
      }
      if (r.k == resolution::kind::unresolved)
        add(c.loc, "SR2", lint_severity::warning,
            "meta-call of " + to_string(target) + " has no visible definition in module '" +
                mname + "'");
      else
        add(c.loc, "SR2", lint_severity::info,
            "meta-call of " + to_string(target) + " is compiled as a local call in module '" +
                mname + "'");
    });
  }

  // SR3: head variables in Closure(n>=1) positions must be called with
  // exactly n extra arguments or passed on to an equal closure position.
  void closure_rules(const std::string& mname, const predicate_def& p,
                     const clause& c) {
    const meta_template& t = *p.tmpl;
    if (c.head->kind != term_kind::compound) return;
    for (std::size_t i = 0; i < t.specs.size() && i < c.head->args.size(); ++i) {
      const meta_arg_spec& spec = t.specs[i];
      if (spec.k != meta_arg_spec::kind::closure || spec.closure_extra < 1)
        continue;
      const term_ptr& v = c.head->args[i];
      if (v->kind != term_kind::var) continue;  // SR1 already fired
      long long id = v->ival;
      int n = spec.closure_extra;
      bool misused = false;

      walk_leaves(c.body, [&](const term_ptr& leaf) {
        if (misused || leaf->kind == term_kind::var) return;
        indicator ind = functor_of(leaf);
        const builtin_info* b = find_builtin(ind.name, ind.arity);
        if (b && b->id == builtin_id::call_n) {
          const term_ptr& subj = leaf->args[0];
          for (std::size_t j = 1; j < leaf->args.size(); ++j)
            if (contains_var(leaf->args[j], id)) misused = true;
          if (subj->kind == term_kind::var && subj->ival == id) {
            if (static_cast<int>(leaf->args.size()) - 1 != n) misused = true;
          } else if (contains_var(subj, id)) {
            misused = true;
          }
          return;
        }
        const meta_template* lt = nullptr;
        if (b && b->tmpl) {
          lt = &*b->tmpl;
        } else if (!b) {
          resolution r;
          try {
            r = db.lookup(mname, ind);
          } catch (const load_error&) {
            r = resolution{};
          }
          if (r.k == resolution::kind::user && r.pred->tmpl) lt = &*r.pred->tmpl;
        }
        if (leaf->kind != term_kind::compound) return;
        for (std::size_t j = 0; j < leaf->args.size(); ++j) {
          const term_ptr& a = leaf->args[j];
          bool exact = a->kind == term_kind::var && a->ival == id;
          if (exact && lt && j < lt->specs.size() &&
              lt->specs[j].k == meta_arg_spec::kind::closure &&
              lt->specs[j].closure_extra == n)
            continue;  // forwarded to an equivalent closure position
          if (contains_var(a, id)) misused = true;
        }
      });

      if (misused)
        add(c.loc, "SR3", lint_severity::error,
            "closure argument " + std::to_string(i + 1) + " of " + to_string(p.ind) +
                " expects " + std::to_string(n) +
                " extra arguments and must be invoked as call/" +
                std::to_string(n + 1));
    }
  }

  // P2: a goal assembled with =.. that is then meta-called in the same body.
  void univ_call_rules(const clause& c) {
    std::set<long long> assembled;
    walk_leaves(c.body, [&](const term_ptr& leaf) {
      if (is_functor(leaf, "=..", 2) && leaf->args[0]->kind == term_kind::var)
        assembled.insert(leaf->args[0]->ival);
    });
    if (assembled.empty()) return;
    bool hit = false;
    walk_leaves(c.body, [&](const term_ptr& leaf) {
      if (hit || leaf->kind == term_kind::var) return;
      indicator ind = functor_of(leaf);
      const builtin_info* b = find_builtin(ind.name, ind.arity);
      if (!b || b->id != builtin_id::call_n) return;
      const term_ptr& subj = leaf->args[0];
      if (subj->kind == term_kind::var && assembled.count(subj->ival)) hit = true;
    });
    if (hit)
      add(c.loc, "P2", lint_severity::info,
          "goal assembled with =.. is meta-called in the same clause");
  }

  void run() {
    for (const std::string& mname : db.module_order()) {
      const module_def* m = db.find(mname);
      directive_rules(*m);
      template_rules(*m);
      for (const indicator& ind : m->pred_order) {
        const predicate_def& p = m->preds.at(ind);
        bool context_driven = p.transparent;
        for (const auto& t : m->tools)
          if (t.second == ind) context_driven = true;
        for (const clause_ptr& c : p.clauses) {
          std::set<long long> hmv;
          if (p.tmpl) {
            head_rules(p, *c);
            closure_rules(mname, p, *c);
            hmv = collect_head_meta_vars(*p.tmpl, c->head);
          }
          call_site_rules(mname, *c, hmv, context_driven);
          univ_call_rules(*c);
        }
      }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const lint_record& a, const lint_record& b) {
                       return std::tie(a.loc.file, a.loc.line, a.loc.col, a.rule,
                                       a.message) <
                              std::tie(b.loc.file, b.loc.line, b.loc.col, b.rule,
                                       b.message);
                     });
  }
};

}  // namespace

std::vector<lint_record> lint_modules(const module_db& db, int call_ceiling) {
  linter l{db, call_ceiling, {}};
  l.run();
  return l.out;
}

std::string format_records(const std::vector<lint_record>& rs) {
  std::ostringstream os;
  for (const auto& r : rs)
    os << r.loc.file << ":" << r.loc.line << ":" << r.loc.col << " " << r.rule
       << " " << severity_name(r.sev) << " " << r.message << "\n";
  return os.str();
}

std::string format_text(const std::vector<lint_record>& rs) {
  std::ostringstream os;
  for (const auto& r : rs)
    os << r.loc.file << ":" << r.loc.line << ":" << r.loc.col << ": "
       << severity_name(r.sev) << ": " << r.message << " [" << r.rule << "]\n";
  return os.str();
}

int lint_exit_code(const std::vector<lint_record>& rs) {
  for (const auto& r : rs)
    if (r.sev != lint_severity::info) return 1;
  return 0;
}

}  // namespace modlog
