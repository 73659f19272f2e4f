#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "loader.hpp"
#include "moduledb.hpp"

namespace modlog {

// Variable bindings of one solution, rendered ready for printing.
struct solution {
  std::vector<std::pair<std::string, std::string>> bindings;
};

// Owns the module database, the engine, and the loader; everything above
// (CLI, C API, tests) talks to this.
class session {
 public:
  explicit session(interp_options opts = {});

  void set_output(text_sink s);
  void set_error_output(text_sink s);

  void load_file(const std::string& path);
  void load_string(const std::string& text, const std::string& name);

  // Validates the loaded program and applies the load-time qualification
  // pass. Throws load_error on inconsistencies.
  void commit();

  // Parses and proves a goal. on_solution returns true to ask for more
  // solutions. Returns true when at least one solution was found. Throws
  // syntax_error for unreadable goals and prolog_error for uncaught balls.
  bool solve(const std::string& goal_text,
             const std::function<bool(const solution&)>& on_solution);

  long long meta_call_count() const { return eng_.meta_call_count(); }

  // Program listing, one clause per line, heads module-qualified.
  std::string list_program() const;

  module_db& db() { return db_; }
  const module_db& db() const { return db_; }
  var_pool& pool() { return pool_; }
  engine& eng() { return eng_; }
  const interp_options& options() const { return opts_; }

 private:
  interp_options opts_;
  module_db db_;
  var_pool pool_;
  engine eng_;
  loader loader_;
};

}  // namespace modlog
