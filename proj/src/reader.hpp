#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "term.hpp"

namespace modlog {

struct source_loc {
  std::string file;
  int line = 1;
  int col = 1;
};

class syntax_error : public std::runtime_error {
 public:
  syntax_error(source_loc loc, const std::string& msg)
      : std::runtime_error(loc.file + ":" + std::to_string(loc.line) + ":" +
                           std::to_string(loc.col) + ": " + msg),
        loc_(std::move(loc)) {}
  const source_loc& where() const { return loc_; }

 private:
  source_loc loc_;
};

enum class token_kind { atom, variable, integer, punct, end, eof };

struct token {
  token_kind kind;
  std::string text;
  long long ival = 0;
  bool quoted = false;         // quoted atoms never act as operators
  bool layout_before = false;  // a '(' with no preceding layout opens an argument list
  source_loc loc;
};

std::vector<token> tokenize(const std::string& text, const std::string& file);

enum class op_type { xfx, xfy, yfx, fy, fx };

struct op_def {
  int priority;
  op_type type;
};

// Fixed operator table; user op/3 directives are not honoured.
class operator_table {
 public:
  operator_table();
  std::optional<op_def> infix(const std::string& name) const;
  std::optional<op_def> prefix(const std::string& name) const;

 private:
  std::map<std::string, op_def> infix_, prefix_;
};

const operator_table& default_operators();

// One term read from source plus the variable names it introduced.
struct read_result {
  term_ptr t;
  std::vector<std::pair<std::string, long long>> var_names;  // first-occurrence order
};

// Parse a single term (priority <= 1200) from `text`; the terminating '.' is
// optional here, which suits goals passed on a command line.
read_result parse_term(const std::string& text, const std::string& file, var_pool& pool);

enum class item_kind { directive, clause };

struct source_item {
  item_kind kind;
  term_ptr t;  // directive body for directives, whole clause term otherwise
  std::vector<std::pair<std::string, long long>> var_names;
  source_loc loc;
};

std::vector<source_item> parse_program(const std::string& text, const std::string& file,
                                       var_pool& pool);

enum class directive_form {
  module_decl,
  export_decl,
  use_module,
  meta_predicate,
  metapredicate_iso,
  module_transparent,
  tool,
  unknown,
};

// Total: anything unrecognised classifies as `unknown`.
directive_form classify_directive(const term_ptr& t);

}  // namespace modlog
