#include "term.hpp"

#include <functional>

namespace modlog {

term_ptr mk_var(std::string name, long long id) {
  auto t = std::make_shared<term>();
  t->kind = term_kind::var;
  t->text = std::move(name);
  t->ival = id;
  return t;
}

term_ptr mk_atom(std::string name) {
  auto t = std::make_shared<term>();
  t->kind = term_kind::atom;
  t->text = std::move(name);
  return t;
}

term_ptr mk_int(long long value) {
  auto t = std::make_shared<term>();
  t->kind = term_kind::int_;
  t->ival = value;
  return t;
}

term_ptr mk_compound(std::string functor, std::vector<term_ptr> args, bool synthetic) {
  auto t = std::make_shared<term>();
  t->kind = term_kind::compound;
  t->text = std::move(functor);
  t->args = std::move(args);
  t->synthetic = synthetic;
  return t;
}

bool is_atom(const term_ptr& t, std::string_view name) {
  return t->kind == term_kind::atom && t->text == name;
}

bool is_functor(const term_ptr& t, std::string_view name, std::size_t arity) {
  return t->kind == term_kind::compound && t->args.size() == arity && t->text == name;
}

std::string to_string(const indicator& i) {
  return i.name + "/" + std::to_string(i.arity);
}

indicator functor_of(const term_ptr& t) {
  if (t->kind == term_kind::atom) return {t->text, 0};
  return {t->text, static_cast<int>(t->args.size())};
}

term_ptr rename_term(const term_ptr& t, var_pool& pool,
                     std::unordered_map<long long, long long>& seen) {
  switch (t->kind) {
    case term_kind::var: {
      auto it = seen.find(t->ival);
      long long id;
      if (it == seen.end()) {
        id = pool.fresh();
        seen.emplace(t->ival, id);
      } else {
        id = it->second;
      }
      return mk_var(t->text, id);
    }
    case term_kind::atom:
    case term_kind::int_:
      return t;
    case term_kind::compound: {
      std::vector<term_ptr> args;
      args.reserve(t->args.size());
      for (auto& a : t->args) args.push_back(rename_term(a, pool, seen));
      return mk_compound(t->text, std::move(args), t->synthetic);
    }
  }
  return t;
}

namespace {

bool alpha_rec(const term_ptr& a, const term_ptr& b,
               std::unordered_map<long long, long long>& ab,
               std::unordered_map<long long, long long>& ba) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case term_kind::var: {
      auto ia = ab.find(a->ival);
      auto ib = ba.find(b->ival);
      if (ia == ab.end() && ib == ba.end()) {
        ab.emplace(a->ival, b->ival);
        ba.emplace(b->ival, a->ival);
        return true;
      }
      return ia != ab.end() && ib != ba.end() && ia->second == b->ival &&
             ib->second == a->ival;
    }
    case term_kind::atom:
      return a->text == b->text;
    case term_kind::int_:
      return a->ival == b->ival;
    case term_kind::compound: {
      if (a->text != b->text || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_rec(a->args[i], b->args[i], ab, ba)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

bool alpha_equal(const term_ptr& a, const term_ptr& b) {
  std::unordered_map<long long, long long> ab, ba;
  return alpha_rec(a, b, ab, ba);
}

bool term_equal(const term_ptr& a, const term_ptr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case term_kind::var:
      return a->ival == b->ival;
    case term_kind::atom:
      return a->text == b->text;
    case term_kind::int_:
      return a->ival == b->ival;
    case term_kind::compound: {
      if (a->text != b->text || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!term_equal(a->args[i], b->args[i])) return false;
      return true;
    }
  }
  return false;
}

term_ptr mk_list(const std::vector<term_ptr>& elems, term_ptr tail) {
  term_ptr acc = tail ? tail : mk_atom("[]");
  for (auto it = elems.rbegin(); it != elems.rend(); ++it)
    acc = mk_compound(".", {*it, acc});
  return acc;
}

std::optional<std::vector<term_ptr>> proper_list_elements(const term_ptr& t) {
  std::vector<term_ptr> out;
  term_ptr cur = t;
  while (true) {
    if (is_atom(cur, "[]")) return out;
    if (!is_functor(cur, ".", 2)) return std::nullopt;
    out.push_back(cur->args[0]);
    cur = cur->args[1];
  }
}

std::vector<term_ptr> flatten_conjunction(const term_ptr& t) {
  std::vector<term_ptr> out;
  std::function<void(const term_ptr&)> walk = [&](const term_ptr& x) {
    if (is_functor(x, ",", 2)) {
      walk(x->args[0]);
      walk(x->args[1]);
    } else {
      out.push_back(x);
    }
  };
  walk(t);
  return out;
}

std::optional<indicator> term_to_indicator(const term_ptr& t) {
  if (!is_functor(t, "/", 2)) return std::nullopt;
  const auto& n = t->args[0];
  const auto& a = t->args[1];
  if (n->kind != term_kind::atom || a->kind != term_kind::int_ || a->ival < 0)
    return std::nullopt;
  return indicator{n->text, static_cast<int>(a->ival)};
}

}  // namespace modlog
