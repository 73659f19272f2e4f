#pragma once

#include <optional>
#include <set>
#include <string>

#include "moduledb.hpp"
#include "term.hpp"

namespace modlog {

// Result of stripping ':'/2 wrappers from a goal term (no bindings involved;
// the engine has its own dereferencing variant). The innermost qualifier wins.
struct peeled_goal {
  term_ptr goal;                      // term under all qualifiers
  std::optional<std::string> module;  // innermost qualifier, if any
  bool var_qualifier = false;         // a qualifier position held a variable
  bool bad_qualifier = false;         // a qualifier position held a non-atom
  bool synthetic = false;             // innermost ':' cell was machine-made
};

peeled_goal peel_static(const term_ptr& t);

// Builds `m : goal`. Qualifiers introduced by the machinery are marked
// synthetic so they never trigger cross-module access warnings.
term_ptr qualify(const std::string& m, const term_ptr& goal, bool synthetic = true);

enum class meta_call_class { already_qualified, head_meta_var, caller_qualified };

meta_call_class classify_meta_call(const term_ptr& arg,
                                   const std::set<long long>& head_meta_vars);

// Head argument variables sitting in closure/context positions of `tmpl`.
std::set<long long> collect_head_meta_vars(const meta_template& tmpl,
                                           const term_ptr& head);

// Wraps unqualified closure/context arguments of `goal` with `ctx`.
// `skip` lists variable ids to leave alone (head meta variables).
term_ptr qualify_meta_args(const meta_template& tmpl, const term_ptr& goal,
                           const std::string& ctx,
                           const std::set<long long>& skip = {});

// Distributes a qualifier over a control construct: the arguments of ','/2,
// ';'/2 and '->'/2 (recursively), the goal of '\\+'/1, the closure of call/N
// and the goal/recovery of catch/3. Already qualified arguments are kept.
term_ptr propagate_control(const std::string& q, const term_ptr& goal);

// Load-time body rewrite for one clause of a non-transparent predicate:
// walks the control skeleton, leaves qualified goals alone, and wraps meta
// arguments of known templates with the enclosing module. Returns nullptr
// when nothing changed.
term_ptr expand_body(const module_db& db, const std::string& module,
                     const term_ptr& body,
                     const std::set<long long>& head_meta_vars);

// Applies expand_body to every clause of every non-transparent predicate.
void expand_all(module_db& db);

// Wraps every unqualified leaf goal of `body` with `module`. Used when a
// clause body is copied into another module and must keep its meaning.
term_ptr static_qualify_body(const std::string& module, const term_ptr& body);

}  // namespace modlog
