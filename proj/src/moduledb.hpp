#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "builtins.hpp"
#include "reader.hpp"
#include "term.hpp"

namespace modlog {

class load_error : public std::runtime_error {
 public:
  explicit load_error(const std::string& msg) : std::runtime_error(msg) {}
  load_error(const source_loc& loc, const std::string& msg)
      : std::runtime_error(loc.file + ":" + std::to_string(loc.line) + ":" +
                           std::to_string(loc.col) + ": " + msg) {}
};

struct clause {
  term_ptr head;
  term_ptr body;  // 'true' atom for facts
  source_loc loc;
  bool erased = false;  // retracted while an older activation still iterates
};
using clause_ptr = std::shared_ptr<clause>;

struct predicate_def {
  indicator ind;
  std::vector<clause_ptr> clauses;
  std::optional<meta_template> tmpl;
  std::optional<source_loc> tmpl_loc;
  bool transparent = false;
  bool dynamic_pred = false;
};

struct raw_directive {
  term_ptr t;
  directive_form form;
  source_loc loc;
};

struct module_def {
  std::string name;
  bool declared = false;  // explicit module/1-2 directive seen
  std::vector<indicator> export_order;
  std::set<indicator> exports;
  std::map<indicator, std::string> imports;  // indicator -> source module
  std::vector<std::string> import_all;       // use_module/1 sources, in order
  std::map<indicator, indicator> tools;      // interface -> implementation
  std::map<indicator, predicate_def> preds;
  std::vector<indicator> pred_order;
  std::vector<raw_directive> directives;  // preserved verbatim for later checks

  bool exports_ind(const indicator& i) const { return exports.count(i) != 0; }
  predicate_def& pred(const indicator& i);
  const predicate_def* find_pred(const indicator& i) const;
};

struct resolution {
  enum class kind { builtin, user, tool, unresolved } k = kind::unresolved;
  const builtin_info* b = nullptr;
  std::string def_module;             // user/tool: module holding the definition
  predicate_def* pred = nullptr;      // user
  indicator tool_impl;                // tool
};

class module_db {
 public:
  module_db();

  // Explicit module/1-2 declaration; redeclaration is an error.
  module_def& declare_module(const std::string& name, const std::vector<indicator>& exports,
                             const source_loc& loc);
  // Lazily created target, e.g. for assertz into a module never declared.
  module_def& get_or_create(const std::string& name);
  module_def* find(const std::string& name);
  const module_def* find(const std::string& name) const;

  // Import edges for `into`; empty `which` means all exports of `from`.
  // When `from` is already loaded its export list is checked; otherwise the
  // edges stay provisional and resolve (or not) at first call.
  void register_import(const std::string& into, const std::string& from,
                       const std::vector<indicator>& which, bool import_everything,
                       const source_loc& loc, bool skip_conflicts = false);

  // Search order: local predicate, tool link, explicit import edge (followed
  // transitively, cycle-checked), use_module/1 sources, builtin table.
  resolution lookup(const std::string& start, const indicator& ind) const;

  const std::vector<std::string>& module_order() const { return order_; }

 private:
  resolution lookup_rec(const std::string& start, const indicator& ind,
                        std::vector<std::string>& path) const;

  std::map<std::string, module_def> mods_;
  std::vector<std::string> order_;
};

// Template analysis shared by the loader and the lint pass.
struct template_spec_result {
  enum class status { ok, extended_mode, malformed } st;
  meta_arg_spec spec;      // valid when st != malformed
  std::string atom_text;   // offending atom text
};

// One positional spec of a meta-predicate template, interpreted per dialect.
// `iso` selects the metapredicate/1 reading where ':' declares a goal arg.
// Extended mode atoms such as '++' carry no meaning here and degrade to '?'.
template_spec_result analyze_template_spec(const term_ptr& spec, bool iso);

struct template_result {
  bool ok = false;
  meta_template tmpl;
  std::vector<std::string> extended_atoms;  // degraded positions
  std::string error;                        // set when !ok
};

// Normalizes one template term (e.g. the argument of meta_predicate/1).
template_result build_template(const term_ptr& raw, bool iso);

// Renders a template back to meta_predicate surface syntax: Closure(n) as n,
// context positions as ':', plain modes as '+ ? @ - *'.
term_ptr template_to_term(const meta_template& t);

}  // namespace modlog
