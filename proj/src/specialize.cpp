#include "specialize.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "expander.hpp"
#include "writer.hpp"

namespace modlog {

namespace {

constexpr int kMaxDepth = 8;

void collect_vars(const term_ptr& t, std::vector<term_ptr>& out,
                  std::set<long long>& seen) {
  if (t->kind == term_kind::var) {
    if (seen.insert(t->ival).second) out.push_back(t);
    return;
  }
  if (t->kind != term_kind::compound) return;
  for (const auto& a : t->args) collect_vars(a, out, seen);
}

term_ptr substitute(const term_ptr& t,
                    const std::unordered_map<long long, term_ptr>& sigma) {
  if (t->kind == term_kind::var) {
    auto it = sigma.find(t->ival);
    return it == sigma.end() ? t : it->second;
  }
  if (t->kind != term_kind::compound) return t;
  bool changed = false;
  std::vector<term_ptr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) {
    term_ptr r = substitute(a, sigma);
    changed = changed || r != a;
    args.push_back(std::move(r));
  }
  return changed ? mk_compound(t->text, std::move(args), t->synthetic) : t;
}

bool is_seq(const term_ptr& t) {
  return is_functor(t, ",", 2) || is_functor(t, ";", 2) || is_functor(t, "->", 2);
}

// call(Q:g, E...) with a statically known callable becomes Q:g(E...).
term_ptr direct_calls(const term_ptr& body) {
  if (body->kind != term_kind::compound) return body;
  if (is_seq(body))
    return mk_compound(body->text,
                       {direct_calls(body->args[0]), direct_calls(body->args[1])});
  if (body->text == "call" && !body->args.empty()) {
    peeled_goal p = peel_static(body->args[0]);
    if (!p.var_qualifier && !p.bad_qualifier && is_callable(p.goal)) {
      std::vector<term_ptr> extras(body->args.begin() + 1, body->args.end());
      term_ptr extended;
      if (extras.empty()) {
        extended = p.goal;
      } else {
        std::vector<term_ptr> args;
        if (p.goal->kind == term_kind::compound) args = p.goal->args;
        args.insert(args.end(), extras.begin(), extras.end());
        extended = mk_compound(p.goal->text, std::move(args));
      }
      return p.module ? qualify(*p.module, extended, p.synthetic) : extended;
    }
  }
  return body;
}

struct specializer {
  module_db& db;
  var_pool& pool;
  const interp_options& opts;
  specialize_stats stats;
  std::map<std::string, int> counters;          // auxiliaries per module
  std::map<std::string, int> purity;            // 0 visiting, 1 pure, 2 impure

  std::string note(const source_loc& loc, const std::string& msg) {
    std::ostringstream os;
    os << loc.file << ":" << loc.line << ":" << loc.col << ": " << msg;
    return os.str();
  }

  // True when proving `body` can never enter a meta-call dispatch (call/N,
  // '\\+', catch, findall, variable goal), following static user predicates
  // transitively. Recursion is resolved coinductively: a cycle through
  // otherwise-pure predicates is pure.
  bool counter_pure_goal(const std::string& lookup_module, const term_ptr& body) {
    if (is_seq(body))
      return counter_pure_goal(lookup_module, body->args[0]) &&
             counter_pure_goal(lookup_module, body->args[1]);
    peeled_goal p = peel_static(body);
    if (p.var_qualifier || p.bad_qualifier) return false;
    if (!is_callable(p.goal)) return false;
    indicator ind = functor_of(p.goal);
    const builtin_info* b = find_builtin(ind.name, ind.arity);
    if (b) {
      switch (b->id) {
        case builtin_id::call_n:
        case builtin_id::catch_:
        case builtin_id::findall:
        case builtin_id::neg:
          return false;
        case builtin_id::conj:
        case builtin_id::disj:
        case builtin_id::if_then:
          // Reached only under an explicit qualifier, whose distribution
          // target depends on the semantics flag; don't guess.
          return false;
        default:
          return true;
      }
    }
    std::string lm = p.module.value_or(lookup_module);
    resolution r;
    try {
      r = db.lookup(lm, ind);
    } catch (const load_error&) {
      return false;
    }
    if (r.k == resolution::kind::tool)
      return counter_pure_pred(r.def_module, r.tool_impl);
    if (r.k != resolution::kind::user) return false;
    if (r.pred->dynamic_pred) return false;
    return counter_pure_pred(r.def_module, ind);
  }

  bool counter_pure_pred(const std::string& mod, const indicator& ind) {
    std::string key = mod + "|" + to_string(ind);
    auto it = purity.find(key);
    if (it != purity.end()) return it->second != 2;
    purity[key] = 0;
    const module_def* m = db.find(mod);
    const predicate_def* p = m ? m->find_pred(ind) : nullptr;
    bool ok = p != nullptr;
    if (p)
      for (const clause_ptr& c : p->clauses) {
        if (c->erased) continue;
        ok = ok && counter_pure_goal(mod, c->body);
      }
    purity[key] = ok ? 1 : 2;
    return ok;
  }

  // Copied template-clause bodies run inside an auxiliary predicate that lives
  // in the call site's module, so any goal that reads the execution context or
  // dispatches a meta-call would behave differently there. Accept only goals
  // provably free of both.
  bool residue_free(const std::string& tmod, const term_ptr& body) {
    if (is_seq(body))
      return residue_free(tmod, body->args[0]) &&
             residue_free(tmod, body->args[1]);
    peeled_goal p = peel_static(body);
    if (p.var_qualifier || p.bad_qualifier) return false;
    if (!is_callable(p.goal)) return false;
    indicator ind = functor_of(p.goal);
    const builtin_info* b = find_builtin(ind.name, ind.arity);
    if (b) {
      switch (b->id) {
        case builtin_id::true_:
        case builtin_id::fail:
        case builtin_id::cut:
        case builtin_id::unify:
        case builtin_id::not_unify:
        case builtin_id::univ:
        case builtin_id::write:
        case builtin_id::writeq:
        case builtin_id::nl:
        case builtin_id::throw_:
          return true;
        default:
          return false;
      }
    }
    std::string lm = p.module.value_or(tmod);
    resolution r;
    try {
      r = db.lookup(lm, ind);
    } catch (const load_error&) {
      return false;
    }
    if (r.k != resolution::kind::user) return false;
    if (r.pred->transparent || r.pred->dynamic_pred || r.pred->tmpl)
      return false;
    return counter_pure_pred(r.def_module, ind);
  }

  // `home` is the module receiving auxiliaries (the original call site's
  // module); `enclosing` is the module whose clause the body text came from,
  // which decides static contexts.
  term_ptr walk_body(const std::string& home, const std::string& enclosing,
                     const term_ptr& body, const source_loc& loc, int depth) {
    if (body->kind != term_kind::compound) return body;
    if (is_seq(body))
      return mk_compound(body->text,
                         {walk_body(home, enclosing, body->args[0], loc, depth),
                          walk_body(home, enclosing, body->args[1], loc, depth)});
    // Goal arguments of '\\+'/1, catch/3, findall/3 hold call sites too.
    indicator ind = functor_of(body);
    const builtin_info* b = find_builtin(ind.name, ind.arity);
    if (b) {
      if (b->tmpl && b->id != builtin_id::call_n && b->ctrl != ctrl_class::seq) {
        bool changed = false;
        std::vector<term_ptr> args = body->args;
        for (std::size_t i = 0; i < b->tmpl->specs.size() && i < args.size();
             ++i) {
          if (b->tmpl->specs[i].k != meta_arg_spec::kind::closure) continue;
          term_ptr r = walk_body(home, enclosing, args[i], loc, depth);
          changed = changed || r != args[i];
          args[i] = r;
        }
        if (changed) return mk_compound(body->text, std::move(args));
      }
      return body;
    }
    if (term_ptr r = try_site(home, enclosing, body, loc, depth)) return r;
    return body;
  }

  // Returns the replacement goal when `leaf` is a rewritable call site.
  term_ptr try_site(const std::string& home, const std::string& enclosing,
                    const term_ptr& leaf, const source_loc& loc, int depth) {
    peeled_goal p = peel_static(leaf);
    if (p.var_qualifier || p.bad_qualifier) return nullptr;
    const term_ptr& g = p.goal;
    if (g->kind != term_kind::compound) return nullptr;
    indicator ind = functor_of(g);
    if (find_builtin(ind.name, ind.arity)) return nullptr;

    std::string lm = p.module.value_or(enclosing);
    resolution r;
    try {
      r = db.lookup(lm, ind);
    } catch (const load_error&) {
      return nullptr;
    }
    if (r.k == resolution::kind::tool) {
      stats.diagnostics.push_back(
          note(loc, "info: " + to_string(ind) +
                        " is a tool interface without a meta template; not "
                        "specializable"));
      return nullptr;
    }
    if (r.k != resolution::kind::user) return nullptr;
    if (r.pred->transparent) {
      stats.diagnostics.push_back(
          note(loc, "info: " + to_string(ind) +
                        " is module-transparent without a meta template; not "
                        "specializable"));
      return nullptr;
    }
    if (!r.pred->tmpl) return nullptr;
    if (r.pred->dynamic_pred) {
      stats.diagnostics.push_back(note(
          loc, "info: " + to_string(ind) + " is dynamic; not specializable"));
      return nullptr;
    }
    const meta_template& tmpl = *r.pred->tmpl;
    bool any_meta = false;
    for (const auto& s : tmpl.specs) any_meta = any_meta || s.is_meta();
    if (!any_meta) return nullptr;

    // Every meta argument must be a statically known callable.
    for (std::size_t i = 0; i < tmpl.specs.size() && i < g->args.size(); ++i) {
      if (!tmpl.specs[i].is_meta()) continue;
      peeled_goal a = peel_static(g->args[i]);
      if (a.var_qualifier || a.bad_qualifier || !is_callable(a.goal))
        return nullptr;
    }

    if (depth >= kMaxDepth) {
      stats.diagnostics.push_back(
          note(loc, "specialization depth limit reached at " + to_string(ind)));
      return nullptr;
    }

    std::string ctx = p.module
                          ? (opts.colon_sets_calling_context ? *p.module : enclosing)
                          : enclosing;
    std::vector<term_ptr> concrete(g->args.size());
    for (std::size_t i = 0; i < g->args.size(); ++i) {
      if (i < tmpl.specs.size() && tmpl.specs[i].is_meta() &&
          !is_qualified(g->args[i]))
        concrete[i] = qualify(ctx, g->args[i]);
      else
        concrete[i] = g->args[i];
    }

    std::vector<term_ptr> site_vars;
    std::set<long long> seen_vars;
    for (std::size_t i = 0; i < concrete.size(); ++i)
      if (i < tmpl.specs.size() && tmpl.specs[i].is_meta())
        collect_vars(concrete[i], site_vars, seen_vars);

    const std::string& tmod = r.def_module;
    struct aux_clause {
      term_ptr head;  // renamed template clause head (meta positions intact)
      term_ptr body;
    };
    std::vector<aux_clause> built;
    for (const clause_ptr& c : r.pred->clauses) {
      if (c->erased) continue;
      if (c->head->kind != term_kind::compound) {
        stats.diagnostics.push_back(
            note(loc, "skipping site " + to_string(ind) + ": clause head shape"));
        return nullptr;
      }
      std::unordered_map<long long, long long> ren;
      term_ptr h = rename_term(c->head, pool, ren);
      term_ptr b = rename_term(c->body, pool, ren);
      // Meta positions must hold distinct variables to substitute into.
      std::set<long long> metas;
      std::unordered_map<long long, term_ptr> sigma;
      for (std::size_t i = 0; i < tmpl.specs.size() && i < h->args.size(); ++i) {
        if (!tmpl.specs[i].is_meta()) continue;
        const term_ptr& hv = h->args[i];
        if (hv->kind != term_kind::var || !metas.insert(hv->ival).second) {
          stats.diagnostics.push_back(note(
              c->loc, "skipping site " + to_string(ind) +
                          ": clause binds meta arguments in the head"));
          return nullptr;
        }
        sigma.emplace(hv->ival, concrete[i]);
      }
      term_ptr nb = substitute(b, sigma);
      nb = direct_calls(nb);
      nb = static_qualify_body(tmod, nb);
      nb = walk_body(home, tmod, nb, c->loc, depth + 1);
      if (!residue_free(tmod, nb)) {
        stats.diagnostics.push_back(note(
            loc, "skipping site " + to_string(ind) +
                     ": clause bodies keep context- or meta-sensitive goals"));
        return nullptr;
      }
      built.push_back({h, nb});
    }

    int id = ++counters[home];
    std::string aux_name = ind.name + "__spec" + std::to_string(id);
    std::size_t normal_count = 0;
    for (std::size_t i = 0; i < g->args.size(); ++i)
      if (i >= tmpl.specs.size() || !tmpl.specs[i].is_meta()) ++normal_count;
    indicator aux_ind{aux_name,
                      static_cast<int>(normal_count + site_vars.size())};
    module_def& hm = db.get_or_create(home);
    if (hm.find_pred(aux_ind) || find_builtin(aux_ind.name, aux_ind.arity))
      throw load_error("specialization name collision: " + home + ":" +
                       to_string(aux_ind));

    predicate_def& aux = hm.pred(aux_ind);
    for (const aux_clause& ac : built) {
      std::vector<term_ptr> head_args;
      for (std::size_t i = 0; i < ac.head->args.size(); ++i)
        if (i >= tmpl.specs.size() || !tmpl.specs[i].is_meta())
          head_args.push_back(ac.head->args[i]);
      head_args.insert(head_args.end(), site_vars.begin(), site_vars.end());
      auto nc = std::make_shared<clause>();
      nc->head = head_args.empty() ? mk_atom(aux_name)
                                   : mk_compound(aux_name, std::move(head_args));
      nc->body = ac.body;
      nc->loc = {"<specialized>", 0, 0};
      aux.clauses.push_back(std::move(nc));
    }
    ++stats.aux_preds;
    ++stats.sites;

    std::vector<term_ptr> call_args;
    for (std::size_t i = 0; i < g->args.size(); ++i)
      if (i >= tmpl.specs.size() || !tmpl.specs[i].is_meta())
        call_args.push_back(g->args[i]);
    call_args.insert(call_args.end(), site_vars.begin(), site_vars.end());
    term_ptr call = call_args.empty()
                        ? mk_atom(aux_name)
                        : mk_compound(aux_name, std::move(call_args));
    return qualify(home, call);
  }

  void run() {
    std::vector<std::string> mods = db.module_order();
    for (const std::string& mname : mods) {
      module_def* m = db.find(mname);
      std::vector<indicator> preds = m->pred_order;
      for (const indicator& ind : preds) {
        predicate_def& p = m->preds.at(ind);
        if (p.transparent || p.dynamic_pred) continue;
        for (clause_ptr& c : p.clauses) {
          if (c->erased) continue;
          c->body = walk_body(mname, mname, c->body, c->loc, 0);
        }
      }
    }
  }
};

}  // namespace

specialize_stats specialize_all(module_db& db, var_pool& pool,
                                const interp_options& opts) {
  specializer s{db, pool, opts, {}, {}, {}};
  s.run();
  return s.stats;
}

std::string render_program(const module_db& db) {
  std::ostringstream out;
  auto emit_clause = [&](const std::string& qual, const clause_ptr& c) {
    term_ptr head = qual.empty()
                        ? c->head
                        : mk_compound(":", {mk_atom(qual), c->head});
    term_ptr t = is_atom(c->body, "true") ? head
                                          : mk_compound(":-", {head, c->body});
    out << write_canonical_term(t, true) << ".\n";
  };

  // user and never-declared modules: plain or head-qualified clauses.
  for (const std::string& mname : db.module_order()) {
    const module_def* m = db.find(mname);
    if (m->declared) continue;
    for (const indicator& ind : m->pred_order) {
      const predicate_def& p = m->preds.at(ind);
      for (const clause_ptr& c : p.clauses) {
        if (c->erased) continue;
        emit_clause(mname == "user" ? "" : mname, c);
      }
    }
  }

  for (const std::string& mname : db.module_order()) {
    const module_def* m = db.find(mname);
    if (!m->declared) continue;
    out << ":- module(" << mname << ", [";
    for (std::size_t i = 0; i < m->export_order.size(); ++i) {
      if (i) out << ", ";
      out << to_string(m->export_order[i]);
    }
    out << "]).\n";
    std::map<std::string, std::vector<indicator>> grouped;
    for (const auto& e : m->imports) grouped[e.second].push_back(e.first);
    for (const std::string& src : m->import_all)
      out << ":- use_module(" << src << ").\n";
    for (const auto& gi : grouped) {
      out << ":- use_module(" << gi.first << ", [";
      for (std::size_t i = 0; i < gi.second.size(); ++i) {
        if (i) out << ", ";
        out << to_string(gi.second[i]);
      }
      out << "]).\n";
    }
    for (const auto& t : m->tools)
      out << ":- tool(" << to_string(t.first) << ", " << to_string(t.second)
          << ").\n";
    for (const indicator& ind : m->pred_order) {
      const predicate_def& p = m->preds.at(ind);
      // Parenthesized directive forms: the reader has no prefix operators
      // for these, so the operator-free shape is what reloads.
      if (p.tmpl)
        out << ":- meta_predicate("
            << write_canonical_term(template_to_term(*p.tmpl), true) << ").\n";
      if (p.transparent)
        out << ":- module_transparent(" << to_string(ind) << ").\n";
    }
    for (const indicator& ind : m->pred_order) {
      const predicate_def& p = m->preds.at(ind);
      for (const clause_ptr& c : p.clauses) {
        if (c->erased) continue;
        emit_clause("", c);
      }
    }
  }
  return out.str();
}

}  // namespace modlog
