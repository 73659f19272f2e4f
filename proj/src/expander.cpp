#include "expander.hpp"

namespace modlog {

namespace {

bool is_seq(const term_ptr& t) {
  return is_functor(t, ",", 2) || is_functor(t, ";", 2) || is_functor(t, "->", 2);
}

}  // namespace

peeled_goal peel_static(const term_ptr& t) {
  peeled_goal out;
  term_ptr cur = t;
  while (is_qualified(cur)) {
    const term_ptr& q = cur->args[0];
    if (q->kind == term_kind::var) {
      out.var_qualifier = true;
      break;
    }
    if (q->kind != term_kind::atom) {
      out.bad_qualifier = true;
      break;
    }
    out.module = q->text;
    out.synthetic = cur->synthetic;
    cur = cur->args[1];
  }
  out.goal = cur;
  return out;
}

term_ptr qualify(const std::string& m, const term_ptr& goal, bool synthetic) {
  return mk_compound(":", {mk_atom(m), goal}, synthetic);
}

meta_call_class classify_meta_call(const term_ptr& arg,
                                   const std::set<long long>& head_meta_vars) {
  if (is_qualified(arg)) return meta_call_class::already_qualified;
  if (arg->kind == term_kind::var && head_meta_vars.count(arg->ival))
    return meta_call_class::head_meta_var;
  return meta_call_class::caller_qualified;
}

std::set<long long> collect_head_meta_vars(const meta_template& tmpl,
                                           const term_ptr& head) {
  std::set<long long> out;
  if (!head || head->kind != term_kind::compound) return out;
  for (size_t i = 0; i < tmpl.specs.size() && i < head->args.size(); ++i) {
    if (!tmpl.specs[i].is_meta()) continue;
    const term_ptr& a = head->args[i];
    if (a->kind == term_kind::var) out.insert(a->ival);
  }
  return out;
}

term_ptr qualify_meta_args(const meta_template& tmpl, const term_ptr& goal,
                           const std::string& ctx,
                           const std::set<long long>& skip) {
  if (!goal || goal->kind != term_kind::compound) return goal;
  bool changed = false;
  std::vector<term_ptr> args = goal->args;
  for (size_t i = 0; i < tmpl.specs.size() && i < args.size(); ++i) {
    if (!tmpl.specs[i].is_meta()) continue;
    if (classify_meta_call(args[i], skip) != meta_call_class::caller_qualified)
      continue;
    args[i] = qualify(ctx, args[i]);
    changed = true;
  }
  if (!changed) return goal;
  return mk_compound(goal->text, args);
}

namespace {

term_ptr distribute(const std::string& q, const term_ptr& arg) {
  if (is_qualified(arg)) return arg;
  if (is_seq(arg))
    return mk_compound(arg->text,
                       {distribute(q, arg->args[0]), distribute(q, arg->args[1])});
  return qualify(q, arg);
}

}  // namespace

term_ptr propagate_control(const std::string& q, const term_ptr& goal) {
  if (is_seq(goal)) return distribute(q, goal);
  if (is_functor(goal, "\\+", 1))
    return mk_compound("\\+", {is_qualified(goal->args[0])
                                   ? goal->args[0]
                                   : qualify(q, goal->args[0])});
  if (goal->kind == term_kind::compound && goal->text == "call" &&
      goal->args.size() >= 1) {
    std::vector<term_ptr> args = goal->args;
    if (!is_qualified(args[0])) args[0] = qualify(q, args[0]);
    return mk_compound("call", args);
  }
  if (is_functor(goal, "catch", 3)) {
    std::vector<term_ptr> args = goal->args;
    if (!is_qualified(args[0])) args[0] = qualify(q, args[0]);
    if (!is_qualified(args[2])) args[2] = qualify(q, args[2]);
    return mk_compound("catch", args);
  }
  return qualify(q, goal);
}

namespace {

const meta_template* leaf_template(const module_db& db, const std::string& module,
                                   const term_ptr& goal, meta_template& storage) {
  indicator ind{goal->text,
                goal->kind == term_kind::compound
                    ? static_cast<int>(goal->args.size())
                    : 0};
  resolution r = db.lookup(module, ind);
  switch (r.k) {
    case resolution::kind::builtin:
      if (r.b->ind.arity == -1) {
        storage = call_template(ind.arity);
        return &storage;
      }
      return r.b->tmpl ? &*r.b->tmpl : nullptr;
    case resolution::kind::user:
      return r.pred->tmpl ? &*r.pred->tmpl : nullptr;
    default:
      return nullptr;
  }
}

}  // namespace

term_ptr expand_body(const module_db& db, const std::string& module,
                     const term_ptr& body,
                     const std::set<long long>& head_meta_vars) {
  if (!body || body->kind == term_kind::var || body->kind == term_kind::int_)
    return nullptr;
  if (is_qualified(body)) return nullptr;  // runtime decides, per semantics flag
  if (is_seq(body)) {
    term_ptr l = expand_body(db, module, body->args[0], head_meta_vars);
    term_ptr r = expand_body(db, module, body->args[1], head_meta_vars);
    if (!l && !r) return nullptr;
    return mk_compound(body->text,
                       {l ? l : body->args[0], r ? r : body->args[1]});
  }
  if (body->kind != term_kind::compound) return nullptr;
  meta_template storage;
  const meta_template* tmpl = leaf_template(db, module, body, storage);
  if (!tmpl) return nullptr;
  term_ptr wrapped = qualify_meta_args(*tmpl, body, module, head_meta_vars);
  return wrapped == body ? nullptr : wrapped;
}

void expand_all(module_db& db) {
  for (const std::string& mname : db.module_order()) {
    module_def* m = db.find(mname);
    if (!m) continue;
    for (const indicator& ind : m->pred_order) {
      predicate_def& p = m->preds.at(ind);
      if (p.transparent) continue;  // calling context only known at run time
      for (clause_ptr& c : p.clauses) {
        std::set<long long> hmv;
        if (p.tmpl) hmv = collect_head_meta_vars(*p.tmpl, c->head);
        if (term_ptr nb = expand_body(db, mname, c->body, hmv)) c->body = nb;
      }
    }
  }
}

term_ptr static_qualify_body(const std::string& module, const term_ptr& body) {
  if (!body) return body;
  if (is_qualified(body)) return body;
  if (is_seq(body))
    return mk_compound(body->text, {static_qualify_body(module, body->args[0]),
                                    static_qualify_body(module, body->args[1])});
  return qualify(module, body);
}

}  // namespace modlog
