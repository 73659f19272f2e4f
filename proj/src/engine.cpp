#include "engine.hpp"

#include <algorithm>

#include "expander.hpp"
#include "writer.hpp"

namespace modlog {

term_ptr binding_store::deref(term_ptr t) const {
  while (t->kind == term_kind::var) {
    auto it = map_.find(t->ival);
    if (it == map_.end()) break;
    t = it->second;
  }
  return t;
}

void binding_store::bind(long long id, term_ptr t) {
  map_.emplace(id, std::move(t));
  trail_.push_back(id);
}

void binding_store::undo_to(std::size_t m) {
  while (trail_.size() > m) {
    map_.erase(trail_.back());
    trail_.pop_back();
  }
}

void binding_store::clear() {
  map_.clear();
  trail_.clear();
}

term_ptr mk_indicator_term(const indicator& ind) {
  return mk_compound("/", {mk_atom(ind.name), mk_int(ind.arity)});
}

term_ptr mk_qualified_indicator(const std::string& mod, const indicator& ind) {
  // (M:Name)/Arity — how `M:Name/Arity` reads under the operator table.
  return mk_compound(
      "/", {mk_compound(":", {mk_atom(mod), mk_atom(ind.name)}), mk_int(ind.arity)});
}

engine::engine(module_db& db, var_pool& pool, const interp_options& opts)
    : db_(db), pool_(pool), opts_(opts) {
  out_ = [](const std::string&) {};
  err_ = [](const std::string&) {};
}

void engine::raise(term_ptr formal, term_ptr ctx) {
  term_ptr ball = mk_compound("error", {std::move(formal), std::move(ctx)});
  throw prolog_error{detach(ball)};
}

void engine::type_err(const std::string& type, const term_ptr& culprit,
                      const indicator& op) {
  raise(mk_compound("type_error", {mk_atom(type), resolve(culprit)}),
        mk_indicator_term(op));
}

void engine::inst_err(const indicator& op) {
  raise(mk_atom("instantiation_error"), mk_indicator_term(op));
}

void engine::existence_err(const std::string& mod, const indicator& ind) {
  raise(mk_compound("existence_error",
                    {mk_atom("procedure"), mk_qualified_indicator(mod, ind)}),
        mk_indicator_term(ind));
}

void engine::permission_err(const std::string& op, const std::string& type,
                            term_ptr culprit) {
  raise(mk_compound("permission_error",
                    {mk_atom(op), mk_atom(type), std::move(culprit)}),
        mk_atom("modlog"));
}

bool engine::occurs(long long id, const term_ptr& t0) const {
  term_ptr t = store_.deref(t0);
  if (t->kind == term_kind::var) return t->ival == id;
  if (t->kind != term_kind::compound) return false;
  for (const auto& a : t->args)
    if (occurs(id, a)) return true;
  return false;
}

bool engine::unify(const term_ptr& a0, const term_ptr& b0) {
  term_ptr a = store_.deref(a0);
  term_ptr b = store_.deref(b0);
  if (a->kind == term_kind::var) {
    if (b->kind == term_kind::var && a->ival == b->ival) return true;
    if (opts_.occurs_check && occurs(a->ival, b)) return false;
    store_.bind(a->ival, b);
    return true;
  }
  if (b->kind == term_kind::var) {
    if (opts_.occurs_check && occurs(b->ival, a)) return false;
    store_.bind(b->ival, a);
    return true;
  }
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case term_kind::atom:
      return a->text == b->text;
    case term_kind::int_:
      return a->ival == b->ival;
    case term_kind::compound: {
      if (a->text != b->text || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!unify(a->args[i], b->args[i])) return false;
      return true;
    }
    default:
      return false;
  }
}

term_ptr engine::resolve(const term_ptr& t0) const {
  term_ptr t = store_.deref(t0);
  if (t->kind != term_kind::compound) return t;
  bool changed = false;
  std::vector<term_ptr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) {
    term_ptr r = resolve(a);
    changed = changed || r != a;
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  return mk_compound(t->text, std::move(args), t->synthetic);
}

term_ptr engine::detach(const term_ptr& t) {
  std::unordered_map<long long, long long> seen;
  return rename_term(resolve(t), pool_, seen);
}

bool engine::run(const term_ptr& goal, const std::function<bool()>& on_solution) {
  store_.clear();
  meta_calls_ = 0;  // the counter reports the query that just ran
  long long b = ++barrier_counter_;
  bool found = false;
  frame fr{"user", "user"};
  try {
    solve(goal, fr, b, 0, [&] {
      found = true;
      return !on_solution();
    });
  } catch (cut_signal& cs) {
    if (cs.barrier != b) throw;
  }
  return found;
}

bool engine::solve(const term_ptr& goal0, const frame& fr, long long barrier,
                   long long depth, const cont& k) {
  if (opts_.depth_limit > 0 && depth > opts_.depth_limit)
    raise(mk_compound("resource_error", {mk_atom("depth_limit_exceeded")}),
          mk_atom("modlog"));

  bool entered_as_var = goal0->kind == term_kind::var;
  term_ptr g = store_.deref(goal0);
  if (g->kind == term_kind::var) inst_err({"call", 1});
  if (g->kind == term_kind::int_) type_err("callable", g, {"call", 1});
  if (entered_as_var) ++meta_calls_;

  if (is_qualified(g)) {
    // Peel nested qualifiers; the innermost one wins.
    term_ptr cur = g;
    std::string q;
    bool synthetic = false;
    while (is_qualified(cur)) {
      term_ptr qm = store_.deref(cur->args[0]);
      if (qm->kind == term_kind::var) inst_err({":", 2});
      if (qm->kind != term_kind::atom) type_err("module", qm, {":", 2});
      q = qm->text;
      synthetic = cur->synthetic;
      cur = store_.deref(cur->args[1]);
    }
    if (cur->kind == term_kind::var) inst_err({":", 2});
    if (cur->kind == term_kind::int_) type_err("callable", cur, {":", 2});

    indicator ind = functor_of(cur);
    const builtin_info* b = find_builtin(ind.name, ind.arity);
    if (b && b->ctrl != ctrl_class::none) {
      // A qualified control construct distributes its qualifier over the
      // argument goals: the calling context under one semantics, the
      // caller's own context under the other. Either way the construct
      // itself runs in the current frame with the current cut barrier.
      const std::string& ctx = opts_.colon_sets_calling_context ? q : fr.calling;
      return solve(propagate_control(ctx, cur), fr, barrier, depth, k);
    }
    const std::string& qctx = opts_.colon_sets_calling_context ? q : fr.calling;
    return invoke(cur, q, qctx, !synthetic, fr, barrier, depth, k);
  }

  const builtin_info* b = find_builtin(g->text, g->kind == term_kind::compound
                                                    ? static_cast<int>(g->args.size())
                                                    : 0);
  if (b && b->ctrl == ctrl_class::seq)
    return exec_seq(*b, g, fr, barrier, depth, k);
  return invoke(g, fr.definition, fr.calling, false, fr, barrier, depth, k);
}

bool engine::invoke(const term_ptr& plain, const std::string& lookup_mod,
                    const std::string& qctx, bool user_qualifier, const frame& fr,
                    long long barrier, long long depth, const cont& k) {
  indicator ind = functor_of(plain);
  resolution r;
  try {
    r = db_.lookup(lookup_mod, ind);
  } catch (const load_error&) {
    raise(mk_compound("existence_error",
                      {mk_atom("procedure"), mk_qualified_indicator(lookup_mod, ind)}),
          mk_atom("import_cycle"));
  }

  switch (r.k) {
    case resolution::kind::unresolved:
      existence_err(lookup_mod, ind);
    case resolution::kind::builtin: {
      term_ptr g = plain;
      if (r.b->id == builtin_id::call_n)
        g = runtime_wrap(call_template(ind.arity), plain, qctx);
      else if (r.b->tmpl)
        g = runtime_wrap(*r.b->tmpl, plain, qctx);
      return exec_builtin(*r.b, g, qctx, fr, barrier, depth, k);
    }
    case resolution::kind::tool: {
      if (user_qualifier) scope_check(fr, lookup_mod, ind);
      // The interface forwards to the implementation with the true caller
      // appended; the semantics flag plays no part here.
      std::vector<term_ptr> args;
      if (plain->kind == term_kind::compound) args = plain->args;
      args.push_back(mk_atom(fr.calling));
      term_ptr impl = mk_compound(r.tool_impl.name, std::move(args));
      return solve(qualify(r.def_module, impl), fr, barrier, depth + 1, k);
    }
    case resolution::kind::user: {
      if (user_qualifier) scope_check(fr, lookup_mod, ind);
      predicate_def& p = *r.pred;
      term_ptr g = p.tmpl ? runtime_wrap(*p.tmpl, plain, qctx) : plain;
      frame nf{p.transparent ? qctx : r.def_module, r.def_module};
      return call_clauses(p, g, nf, depth, k);
    }
  }
  return false;
}

term_ptr engine::runtime_wrap(const meta_template& tmpl, const term_ptr& g,
                              const std::string& ctx) {
  if (g->kind != term_kind::compound) return g;
  bool changed = false;
  std::vector<term_ptr> args = g->args;
  for (std::size_t i = 0; i < tmpl.specs.size() && i < args.size(); ++i) {
    if (!tmpl.specs[i].is_meta()) continue;
    if (is_qualified(store_.deref(args[i]))) continue;
    args[i] = qualify(ctx, args[i]);
    changed = true;
  }
  return changed ? mk_compound(g->text, std::move(args)) : g;
}

void engine::scope_check(const frame& fr, const std::string& qmod,
                         const indicator& ind) {
  if (fr.calling == qmod) return;
  const module_def* m = db_.find(qmod);
  if (m && m->exports_ind(ind)) return;
  if (opts_.strict_scope)
    raise(mk_compound("permission_error",
                      {mk_atom("access"), mk_atom("private_procedure"),
                       mk_qualified_indicator(qmod, ind)}),
          mk_indicator_term(ind));
  std::string key = fr.calling + "|" + qmod + ":" + to_string(ind);
  if (warned_.insert(key).second)
    err_("warning: " + fr.calling + " calls private predicate " + qmod + ":" +
         to_string(ind) + "\n");
}

bool engine::call_clauses(predicate_def& p, const term_ptr& goal, const frame& fr,
                          long long depth, const cont& k) {
  long long b = ++barrier_counter_;
  std::size_t m0 = store_.mark();
  std::vector<clause_ptr> snapshot = p.clauses;
  try {
    for (const clause_ptr& c : snapshot) {
      if (c->erased) continue;
      std::size_t m = store_.mark();
      std::unordered_map<long long, long long> seen;
      term_ptr h = rename_term(c->head, pool_, seen);
      term_ptr body = rename_term(c->body, pool_, seen);
      if (unify(goal, h)) {
        if (solve(body, fr, b, depth + 1, k)) return true;
      }
      store_.undo_to(m);
    }
    return false;
  } catch (cut_signal& cs) {
    if (cs.barrier == b) {
      store_.undo_to(m0);
      return false;
    }
    throw;
  }
}

bool engine::exec_seq(const builtin_info& b, const term_ptr& g, const frame& fr,
                      long long barrier, long long depth, const cont& k) {
  switch (b.id) {
    case builtin_id::conj:
      return solve(g->args[0], fr, barrier, depth + 1, [&] {
        return solve(g->args[1], fr, barrier, depth + 1, k);
      });
    case builtin_id::disj: {
      term_ptr l = store_.deref(g->args[0]);
      if (is_functor(l, "->", 2)) {
        std::size_t m = store_.mark();
        long long cb = ++barrier_counter_;
        bool cond = false;
        try {
          solve(l->args[0], fr, cb, depth + 1, [&] {
            cond = true;
            return true;
          });
        } catch (cut_signal& cs) {
          if (cs.barrier != cb) throw;
        }
        if (cond) return solve(l->args[1], fr, barrier, depth + 1, k);
        store_.undo_to(m);
        return solve(g->args[1], fr, barrier, depth + 1, k);
      }
      std::size_t m = store_.mark();
      if (solve(g->args[0], fr, barrier, depth + 1, k)) return true;
      store_.undo_to(m);
      return solve(g->args[1], fr, barrier, depth + 1, k);
    }
    case builtin_id::if_then: {
      std::size_t m = store_.mark();
      long long cb = ++barrier_counter_;
      bool cond = false;
      try {
        solve(g->args[0], fr, cb, depth + 1, [&] {
          cond = true;
          return true;
        });
      } catch (cut_signal& cs) {
        if (cs.barrier != cb) throw;
      }
      if (cond) return solve(g->args[1], fr, barrier, depth + 1, k);
      store_.undo_to(m);
      return false;
    }
    default:
      return false;
  }
}

bool engine::exec_builtin(const builtin_info& b, const term_ptr& g,
                          const std::string& qctx, const frame& fr,
                          long long barrier, long long depth, const cont& k) {
  switch (b.id) {
    case builtin_id::true_:
      return k();
    case builtin_id::fail:
      return false;
    case builtin_id::cut:
      if (k()) return true;
      throw cut_signal{barrier};
    case builtin_id::conj:
    case builtin_id::disj:
    case builtin_id::if_then:
      return exec_seq(b, g, fr, barrier, depth, k);
    case builtin_id::neg: {
      ++meta_calls_;
      std::size_t m = store_.mark();
      long long nb = ++barrier_counter_;
      bool found = false;
      try {
        solve(g->args[0], fr, nb, depth + 1, [&] {
          found = true;
          return true;
        });
      } catch (cut_signal& cs) {
        if (cs.barrier != nb) throw;
      }
      store_.undo_to(m);
      return found ? false : k();
    }
    case builtin_id::unify: {
      std::size_t m = store_.mark();
      if (unify(g->args[0], g->args[1])) {
        if (k()) return true;
      }
      store_.undo_to(m);
      return false;
    }
    case builtin_id::not_unify: {
      std::size_t m = store_.mark();
      bool u = unify(g->args[0], g->args[1]);
      store_.undo_to(m);
      return u ? false : k();
    }
    case builtin_id::call_n:
      return exec_call(g, fr, depth, k);
    case builtin_id::catch_:
      return exec_catch(g, fr, depth, k);
    case builtin_id::throw_: {
      term_ptr ball = store_.deref(g->args[0]);
      if (ball->kind == term_kind::var) inst_err({"throw", 1});
      throw prolog_error{detach(ball)};
    }
    case builtin_id::findall:
      return exec_findall(g, fr, depth, k);
    case builtin_id::univ:
      return exec_univ(g, k);
    case builtin_id::assertz:
      return exec_assertz(g, k);
    case builtin_id::retract:
      return exec_retract(g, k);
    case builtin_id::write:
      out_(write_canonical_term(resolve(g->args[0]), false));
      return k();
    case builtin_id::writeq:
      out_(write_canonical_term(resolve(g->args[0]), true));
      return k();
    case builtin_id::nl:
      out_("\n");
      return k();
    case builtin_id::strip_module:
      return exec_strip_module(g, k);
    case builtin_id::context_module: {
      std::size_t m = store_.mark();
      if (unify(g->args[0], mk_atom(qctx))) {
        if (k()) return true;
      }
      store_.undo_to(m);
      return false;
    }
    case builtin_id::predicate_property:
      return exec_predicate_property(g, k);
  }
  return false;
}

term_ptr engine::extend_goal(const term_ptr& plain,
                             const std::vector<term_ptr>& extras) {
  if (extras.empty()) return plain;
  std::vector<term_ptr> args;
  if (plain->kind == term_kind::compound) args = plain->args;
  args.insert(args.end(), extras.begin(), extras.end());
  return mk_compound(plain->text, std::move(args));
}

term_ptr engine::extend_goal_univ(const term_ptr& plain,
                                  const std::vector<term_ptr>& extras) {
  // Same job as extend_goal, but materializes the =.. decomposition lists.
  std::vector<term_ptr> parts;
  parts.push_back(mk_atom(plain->text));
  if (plain->kind == term_kind::compound)
    parts.insert(parts.end(), plain->args.begin(), plain->args.end());
  term_ptr lst = mk_list(parts, mk_list(extras));
  auto elems = proper_list_elements(lst);
  if (!elems || elems->empty()) return plain;
  if (elems->size() == 1) return (*elems)[0];
  std::vector<term_ptr> args(elems->begin() + 1, elems->end());
  return mk_compound((*elems)[0]->text, std::move(args));
}

bool engine::exec_call(const term_ptr& g, const frame& fr, long long depth,
                       const cont& k) {
  ++meta_calls_;
  // The bound is on call/N itself: N counts the closure plus the extras.
  if (static_cast<int>(g->args.size()) > opts_.max_call_n)
    raise(mk_compound("representation_error", {mk_atom("max_call_n_exceeded")}),
          mk_indicator_term({"call", static_cast<int>(g->args.size())}));
  std::vector<term_ptr> extras(g->args.begin() + 1, g->args.end());

  term_ptr cur = store_.deref(g->args[0]);
  bool qualified = false;
  bool synthetic = false;
  std::string qm;
  while (is_qualified(cur)) {
    term_ptr q = store_.deref(cur->args[0]);
    if (q->kind == term_kind::var) inst_err({"call", static_cast<int>(g->args.size())});
    if (q->kind != term_kind::atom) type_err("module", q, {":", 2});
    qualified = true;
    qm = q->text;
    synthetic = cur->synthetic;
    cur = store_.deref(cur->args[1]);
  }
  if (cur->kind == term_kind::var)
    inst_err({"call", static_cast<int>(g->args.size())});
  if (cur->kind == term_kind::int_)
    type_err("callable", cur, {"call", static_cast<int>(g->args.size())});

  term_ptr extended = opts_.call_n_via_univ ? extend_goal_univ(cur, extras)
                                            : extend_goal(cur, extras);
  int final_arity = extended->kind == term_kind::compound
                        ? static_cast<int>(extended->args.size())
                        : 0;
  if (final_arity > opts_.max_call_n)
    raise(mk_compound("representation_error", {mk_atom("max_call_n_exceeded")}),
          mk_indicator_term({"call", static_cast<int>(g->args.size())}));

  term_ptr goal = qualified
                      ? mk_compound(":", {mk_atom(qm), extended}, synthetic)
                      : extended;
  long long nb = ++barrier_counter_;
  std::size_t m = store_.mark();
  try {
    if (solve(goal, fr, nb, depth + 1, k)) return true;
    store_.undo_to(m);
    return false;
  } catch (cut_signal& cs) {
    if (cs.barrier == nb) {
      store_.undo_to(m);
      return false;
    }
    throw;
  }
}

bool engine::exec_catch(const term_ptr& g, const frame& fr, long long depth,
                        const cont& k) {
  ++meta_calls_;
  std::size_t m = store_.mark();
  long long gb = ++barrier_counter_;
  bool in_k = false;  // true while the continuation past this catch runs
  try {
    return solve(g->args[0], fr, gb, depth + 1, [&] {
      in_k = true;
      bool r = k();
      in_k = false;
      return r;
    });
  } catch (cut_signal& cs) {
    if (cs.barrier == gb) {
      store_.undo_to(m);
      return false;
    }
    throw;
  } catch (prolog_error& e) {
    if (in_k) throw;  // raised after this catch succeeded; not ours
    store_.undo_to(m);
    std::size_t m2 = store_.mark();
    if (unify(g->args[1], e.ball)) {
      ++meta_calls_;
      long long rb = ++barrier_counter_;
      try {
        if (solve(g->args[2], fr, rb, depth + 1, k)) return true;
        store_.undo_to(m2);
        return false;
      } catch (cut_signal& cs) {
        if (cs.barrier == rb) {
          store_.undo_to(m2);
          return false;
        }
        throw;
      }
    }
    store_.undo_to(m2);
    throw;
  }
}

bool engine::exec_findall(const term_ptr& g, const frame& fr, long long depth,
                          const cont& k) {
  ++meta_calls_;
  std::size_t m = store_.mark();
  long long fb = ++barrier_counter_;
  std::vector<term_ptr> results;
  try {
    solve(g->args[1], fr, fb, depth + 1, [&] {
      results.push_back(detach(g->args[0]));
      return false;
    });
  } catch (cut_signal& cs) {
    if (cs.barrier != fb) throw;
  }
  store_.undo_to(m);
  term_ptr lst = mk_list(results);
  std::size_t m2 = store_.mark();
  if (unify(g->args[2], lst)) {
    if (k()) return true;
  }
  store_.undo_to(m2);
  return false;
}

bool engine::exec_univ(const term_ptr& g, const cont& k) {
  term_ptr x = store_.deref(g->args[0]);
  term_ptr l = store_.deref(g->args[1]);
  std::size_t m = store_.mark();
  if (x->kind != term_kind::var) {
    std::vector<term_ptr> parts;
    if (x->kind == term_kind::compound) {
      parts.push_back(mk_atom(x->text));
      parts.insert(parts.end(), x->args.begin(), x->args.end());
    } else {
      parts.push_back(x);
    }
    if (unify(g->args[1], mk_list(parts))) {
      if (k()) return true;
    }
    store_.undo_to(m);
    return false;
  }
  // X unbound: build a term from the list.
  std::vector<term_ptr> elems;
  term_ptr cur = l;
  while (true) {
    cur = store_.deref(cur);
    if (is_atom(cur, "[]")) break;
    if (cur->kind == term_kind::var) inst_err({"=..", 2});
    if (!is_functor(cur, ".", 2)) type_err("list", l, {"=..", 2});
    elems.push_back(cur->args[0]);
    cur = cur->args[1];
  }
  if (elems.empty())
    raise(mk_compound("domain_error", {mk_atom("non_empty_list"), mk_atom("[]")}),
          mk_indicator_term({"=..", 2}));
  term_ptr h = store_.deref(elems[0]);
  if (h->kind == term_kind::var) inst_err({"=..", 2});
  term_ptr built;
  if (elems.size() == 1) {
    if (h->kind == term_kind::compound) type_err("atomic", h, {"=..", 2});
    built = h;
  } else {
    if (h->kind != term_kind::atom) type_err("atom", h, {"=..", 2});
    std::vector<term_ptr> args(elems.begin() + 1, elems.end());
    built = mk_compound(h->text, std::move(args));
  }
  if (unify(g->args[0], built)) {
    if (k()) return true;
  }
  store_.undo_to(m);
  return false;
}

bool engine::exec_assertz(const term_ptr& g, const cont& k) {
  term_ptr a = resolve(g->args[0]);
  peeled_goal p = peel_static(a);
  if (p.var_qualifier) inst_err({"assertz", 1});
  if (p.bad_qualifier) type_err("module", p.goal->args[0], {"assertz", 1});
  std::string mod = p.module.value_or("user");

  term_ptr cl = p.goal;
  term_ptr head;
  term_ptr body;
  if (is_functor(cl, ":-", 2)) {
    head = cl->args[0];
    body = cl->args[1];
  } else {
    head = cl;
    body = mk_atom("true");
  }
  peeled_goal hp = peel_static(head);
  if (hp.var_qualifier) inst_err({"assertz", 1});
  if (hp.bad_qualifier) type_err("module", head->args[0], {"assertz", 1});
  if (hp.module) mod = *hp.module;
  head = hp.goal;

  if (head->kind == term_kind::var) inst_err({"assertz", 1});
  if (!is_callable(head)) type_err("callable", head, {"assertz", 1});
  if (body->kind == term_kind::int_) type_err("callable", body, {"assertz", 1});

  indicator ind = functor_of(head);
  if (find_builtin(ind.name, ind.arity))
    permission_err("modify", "static_procedure", mk_indicator_term(ind));

  module_def& md = db_.get_or_create(mod);
  if (md.imports.count(ind))
    permission_err("modify", "imported_procedure",
                   mk_qualified_indicator(mod, ind));
  if (md.tools.count(ind))
    permission_err("modify", "static_procedure",
                   mk_qualified_indicator(mod, ind));
  const predicate_def* existing = md.find_pred(ind);
  if (existing && !existing->clauses.empty() && !existing->dynamic_pred)
    permission_err("modify", "static_procedure",
                   mk_qualified_indicator(mod, ind));

  predicate_def& pd = md.pred(ind);
  pd.dynamic_pred = true;
  std::unordered_map<long long, long long> seen;
  auto c = std::make_shared<clause>();
  c->head = rename_term(head, pool_, seen);
  c->body = rename_term(body, pool_, seen);
  c->loc = {"<asserted>", 0, 0};
  pd.clauses.push_back(std::move(c));
  return k();
}

bool engine::exec_retract(const term_ptr& g, const cont& k) {
  term_ptr cur = store_.deref(g->args[0]);
  std::string mod = "user";
  while (is_qualified(cur)) {
    term_ptr q = store_.deref(cur->args[0]);
    if (q->kind == term_kind::var) inst_err({"retract", 1});
    if (q->kind != term_kind::atom) type_err("module", q, {"retract", 1});
    mod = q->text;
    cur = store_.deref(cur->args[1]);
  }
  if (cur->kind == term_kind::var) inst_err({"retract", 1});

  term_ptr head;
  term_ptr body;
  if (is_functor(cur, ":-", 2)) {
    head = cur->args[0];
    body = cur->args[1];
  } else {
    head = cur;
    body = mk_atom("true");
  }
  term_ptr h = store_.deref(head);
  while (is_qualified(h)) {
    term_ptr q = store_.deref(h->args[0]);
    if (q->kind == term_kind::var) inst_err({"retract", 1});
    if (q->kind != term_kind::atom) type_err("module", q, {"retract", 1});
    mod = q->text;
    h = store_.deref(h->args[1]);
  }
  if (h->kind == term_kind::var) inst_err({"retract", 1});
  if (!is_callable(h)) type_err("callable", h, {"retract", 1});

  indicator ind = functor_of(h);
  if (find_builtin(ind.name, ind.arity))
    permission_err("modify", "static_procedure", mk_indicator_term(ind));

  module_def* md = db_.find(mod);
  if (!md) return false;
  if (md->imports.count(ind))
    permission_err("modify", "imported_procedure",
                   mk_qualified_indicator(mod, ind));
  predicate_def* pd = nullptr;
  {
    auto it = md->preds.find(ind);
    if (it == md->preds.end()) return false;
    pd = &it->second;
  }
  if (!pd->dynamic_pred)
    permission_err("modify", "static_procedure",
                   mk_qualified_indicator(mod, ind));

  std::vector<clause_ptr> snapshot = pd->clauses;
  for (const clause_ptr& c : snapshot) {
    if (c->erased) continue;
    std::size_t m = store_.mark();
    std::unordered_map<long long, long long> seen;
    term_ptr rh = rename_term(c->head, pool_, seen);
    term_ptr rb = rename_term(c->body, pool_, seen);
    if (unify(h, rh) && unify(body, rb)) {
      c->erased = true;  // removal survives backtracking
      auto& v = pd->clauses;
      v.erase(std::remove(v.begin(), v.end(), c), v.end());
      if (k()) return true;
    }
    store_.undo_to(m);
  }
  return false;
}

bool engine::exec_strip_module(const term_ptr& g, const cont& k) {
  term_ptr cur = store_.deref(g->args[0]);
  term_ptr mod;  // stays null only if the context wrap was missing
  while (is_qualified(cur)) {
    term_ptr q = store_.deref(cur->args[0]);
    mod = q;  // lenient: variables and non-atoms are reported, not rejected
    cur = store_.deref(cur->args[1]);
    if (q->kind == term_kind::var) break;  // unbound qualifier ends the chain
  }
  if (!mod) mod = mk_atom("user");
  std::size_t m = store_.mark();
  if (unify(g->args[1], mod) && unify(g->args[2], cur)) {
    if (k()) return true;
  }
  store_.undo_to(m);
  return false;
}

bool engine::exec_predicate_property(const term_ptr& g, const cont& k) {
  term_ptr cur = store_.deref(g->args[0]);
  std::string vm = "user";
  while (is_qualified(cur)) {
    term_ptr q = store_.deref(cur->args[0]);
    if (q->kind == term_kind::var) inst_err({"predicate_property", 2});
    if (q->kind != term_kind::atom) type_err("module", q, {"predicate_property", 2});
    vm = q->text;
    cur = store_.deref(cur->args[1]);
  }
  if (cur->kind == term_kind::int_)
    type_err("callable", cur, {"predicate_property", 2});

  bool head_open = cur->kind == term_kind::var;
  indicator want = head_open ? indicator{} : functor_of(cur);

  struct candidate {
    indicator ind;
    std::vector<term_ptr> props;
  };
  std::vector<candidate> cands;
  std::set<indicator> seen;

  auto add_user = [&](const indicator& ind, const predicate_def& p,
                      const std::string& def_mod,
                      const std::optional<std::string>& imported_from) {
    if (!head_open && ind != want) return;
    if (!seen.insert(ind).second) return;
    candidate c;
    c.ind = ind;
    c.props.push_back(mk_atom("defined"));
    if (p.dynamic_pred) c.props.push_back(mk_atom("dynamic"));
    if (p.transparent) c.props.push_back(mk_atom("transparent"));
    const module_def* dm = db_.find(def_mod);
    if (dm && dm->exports_ind(ind)) c.props.push_back(mk_atom("exported"));
    if (imported_from)
      c.props.push_back(mk_compound("imported_from", {mk_atom(*imported_from)}));
    if (p.tmpl)
      c.props.push_back(mk_compound("meta_predicate", {template_to_term(*p.tmpl)}));
    cands.push_back(std::move(c));
  };
  auto add_tool = [&](const indicator& ind, const std::string& def_mod,
                      const std::optional<std::string>& imported_from) {
    if (!head_open && ind != want) return;
    if (!seen.insert(ind).second) return;
    candidate c;
    c.ind = ind;
    c.props.push_back(mk_atom("defined"));
    c.props.push_back(mk_atom("transparent"));
    const module_def* dm = db_.find(def_mod);
    if (dm && dm->exports_ind(ind)) c.props.push_back(mk_atom("exported"));
    if (imported_from)
      c.props.push_back(mk_compound("imported_from", {mk_atom(*imported_from)}));
    cands.push_back(std::move(c));
  };
  auto add_resolved = [&](const indicator& ind, const std::string& source,
                          const std::optional<std::string>& imported_from) {
    resolution r;
    try {
      r = db_.lookup(source, ind);
    } catch (const load_error&) {
      return;
    }
    if (r.k == resolution::kind::user)
      add_user(ind, *r.pred, r.def_module, imported_from);
    else if (r.k == resolution::kind::tool)
      add_tool(ind, r.def_module, imported_from);
  };

  if (const module_def* m = db_.find(vm)) {
    for (const indicator& ind : m->pred_order)
      add_user(ind, m->preds.at(ind), vm, std::nullopt);
    for (const auto& t : m->tools) add_tool(t.first, vm, std::nullopt);
    for (const auto& e : m->imports) add_resolved(e.first, e.second, e.second);
    for (const std::string& src : m->import_all) {
      const module_def* s = db_.find(src);
      if (!s) continue;
      for (const indicator& e : s->export_order) add_resolved(e, src, src);
    }
  }
  for (const builtin_info& b : builtin_table()) {
    indicator ind = b.ind;
    if (ind.arity == -1) {
      if (head_open) continue;  // call/N has no single most-general head
      if (want.name != "call" || want.arity < 1) continue;
      ind = want;
    }
    if (!head_open && ind != want) continue;
    if (!seen.insert(ind).second) continue;
    candidate c;
    c.ind = ind;
    c.props.push_back(mk_atom("defined"));
    c.props.push_back(mk_atom("built_in"));
    if (b.ind.arity == -1)
      c.props.push_back(
          mk_compound("meta_predicate", {template_to_term(call_template(ind.arity))}));
    else if (b.tmpl)
      c.props.push_back(mk_compound("meta_predicate", {template_to_term(*b.tmpl)}));
    cands.push_back(std::move(c));
  }

  for (const candidate& c : cands) {
    term_ptr mg;
    if (c.ind.arity == 0) {
      mg = mk_atom(c.ind.name);
    } else {
      std::vector<term_ptr> vs;
      for (int i = 0; i < c.ind.arity; ++i) vs.push_back(mk_var("_", pool_.fresh()));
      mg = mk_compound(c.ind.name, std::move(vs));
    }
    for (const term_ptr& prop : c.props) {
      std::size_t m = store_.mark();
      if (unify(cur, mg) && unify(g->args[1], prop)) {
        if (k()) return true;
      }
      store_.undo_to(m);
    }
  }
  return false;
}

}  // namespace modlog
