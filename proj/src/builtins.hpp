#pragma once

#include <optional>
#include <string>
#include <vector>

#include "term.hpp"

namespace modlog {

enum class arg_mode { plus, question, at, minus, star };

struct meta_arg_spec {
  enum class kind { closure, context_aware, normal } k = kind::normal;
  int closure_extra = 0;            // Closure(n): goal expecting n extra arguments
  arg_mode mode = arg_mode::question;

  static meta_arg_spec closure(int n) { return {kind::closure, n, arg_mode::question}; }
  static meta_arg_spec context_aware() { return {kind::context_aware, 0, arg_mode::question}; }
  static meta_arg_spec normal(arg_mode m) { return {kind::normal, 0, m}; }
  bool is_meta() const { return k != kind::normal; }
};

struct meta_template {
  indicator ind;
  std::vector<meta_arg_spec> specs;
};

enum class builtin_id {
  true_, fail, cut, conj, disj, if_then, neg, unify, not_unify, call_n, catch_, throw_,
  findall, univ, assertz, retract, write, writeq, nl,
  strip_module, context_module, predicate_property,
};

// seq: ',' ';' '->' run their arguments in the current frame.
// goal: '\\+', call/N, catch/3 take goals but open an opaque cut barrier.
enum class ctrl_class { none, seq, goal };

struct builtin_info {
  builtin_id id;
  indicator ind;                    // arity -1: any arity >= 1 (call/N)
  ctrl_class ctrl;
  std::optional<meta_template> tmpl;  // for call/N built per arity on demand
};

// nullptr when (name, arity) is not a builtin.
const builtin_info* find_builtin(const std::string& name, int arity);

const std::vector<builtin_info>& builtin_table();

// Meta-template for call/arity: Closure(arity-1) then '?' extras.
meta_template call_template(int arity);

}  // namespace modlog
