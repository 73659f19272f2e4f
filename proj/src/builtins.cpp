#include "builtins.hpp"

namespace modlog {

namespace {

meta_template tmpl(std::string name, std::vector<meta_arg_spec> specs) {
  return {{std::move(name), static_cast<int>(specs.size())}, std::move(specs)};
}

std::vector<builtin_info> make_table() {
  using s = meta_arg_spec;
  std::vector<builtin_info> t;
  auto add = [&](builtin_id id, const char* name, int arity, ctrl_class c,
                 std::optional<meta_template> mt = std::nullopt) {
    t.push_back({id, {name, arity}, c, std::move(mt)});
  };
  add(builtin_id::true_, "true", 0, ctrl_class::none);
  add(builtin_id::fail, "fail", 0, ctrl_class::none);
  add(builtin_id::cut, "!", 0, ctrl_class::none);
  add(builtin_id::conj, ",", 2, ctrl_class::seq,
      tmpl(",", {s::closure(0), s::closure(0)}));
  add(builtin_id::disj, ";", 2, ctrl_class::seq,
      tmpl(";", {s::closure(0), s::closure(0)}));
  add(builtin_id::if_then, "->", 2, ctrl_class::seq,
      tmpl("->", {s::closure(0), s::closure(0)}));
  add(builtin_id::neg, "\\+", 1, ctrl_class::goal, tmpl("\\+", {s::closure(0)}));
  add(builtin_id::unify, "=", 2, ctrl_class::none);
  add(builtin_id::not_unify, "\\=", 2, ctrl_class::none);
  add(builtin_id::call_n, "call", -1, ctrl_class::goal);
  add(builtin_id::catch_, "catch", 3, ctrl_class::goal,
      tmpl("catch", {s::closure(0), s::normal(arg_mode::question), s::closure(0)}));
  add(builtin_id::throw_, "throw", 1, ctrl_class::none);
  add(builtin_id::findall, "findall", 3, ctrl_class::none,
      tmpl("findall", {s::normal(arg_mode::question), s::closure(0), s::normal(arg_mode::minus)}));
  add(builtin_id::univ, "=..", 2, ctrl_class::none);
  add(builtin_id::assertz, "assertz", 1, ctrl_class::none,
      tmpl("assertz", {s::context_aware()}));
  add(builtin_id::retract, "retract", 1, ctrl_class::none,
      tmpl("retract", {s::context_aware()}));
  add(builtin_id::write, "write", 1, ctrl_class::none);
  add(builtin_id::writeq, "writeq", 1, ctrl_class::none);
  add(builtin_id::nl, "nl", 0, ctrl_class::none);
  add(builtin_id::strip_module, "strip_module", 3, ctrl_class::none,
      tmpl("strip_module", {s::context_aware(), s::normal(arg_mode::minus),
                            s::normal(arg_mode::minus)}));
  add(builtin_id::context_module, "context_module", 1, ctrl_class::none);
  add(builtin_id::predicate_property, "predicate_property", 2, ctrl_class::none,
      tmpl("predicate_property", {s::context_aware(), s::normal(arg_mode::question)}));
  return t;
}

}  // namespace

const std::vector<builtin_info>& builtin_table() {
  static const std::vector<builtin_info> table = make_table();
  return table;
}

const builtin_info* find_builtin(const std::string& name, int arity) {
  for (const auto& b : builtin_table()) {
    if (b.ind.arity == -1) {
      if (b.ind.name == name && arity >= 1) return &b;
    } else if (b.ind.name == name && b.ind.arity == arity) {
      return &b;
    }
  }
  return nullptr;
}

meta_template call_template(int arity) {
  std::vector<meta_arg_spec> specs;
  specs.push_back(meta_arg_spec::closure(arity - 1));
  for (int i = 1; i < arity; ++i) specs.push_back(meta_arg_spec::normal(arg_mode::question));
  return {{"call", arity}, std::move(specs)};
}

}  // namespace modlog
