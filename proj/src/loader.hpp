#pragma once

#include <string>
#include <vector>

#include "engine.hpp"
#include "moduledb.hpp"
#include "reader.hpp"

namespace modlog {

// Reads source files into the module database: directives route clauses,
// declare modules, exports, imports, meta templates, transparency, and tool
// links. Throws syntax_error for unreadable text and load_error for
// inconsistent programs.
class loader {
 public:
  loader(module_db& db, var_pool& pool);

  void set_error_output(text_sink s) { err_ = std::move(s); }

  // Lint front end: skip malformed meta templates instead of failing the
  // load; the lint rules report them with position information.
  void set_tolerant(bool t) { tolerant_ = t; }

  void load_file(const std::string& path);
  void load_string(const std::string& text, const std::string& name);

  // Validates import edges and export lists, then makes every declared
  // module's exports callable from `user` (first declaration wins on
  // conflicts, mirroring what loading such files into a session would do).
  void finalize();

  const std::vector<std::string>& declared_modules() const {
    return declared_order_;
  }

 private:
  void process(const source_item& item, std::string& current);
  void process_directive(const source_item& item, std::string& current);
  void add_clause(const source_item& item, const std::string& current);

  module_db& db_;
  var_pool& pool_;
  text_sink err_;
  bool tolerant_ = false;
  std::vector<std::string> declared_order_;
};

}  // namespace modlog
