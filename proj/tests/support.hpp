#pragma once

// Shared helpers for the test suites: fixture loading, goal running with
// captured output, and binding-multiset comparison.

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lint.hpp"
#include "session.hpp"
#include "writer.hpp"

#ifndef MODLOG_FIXTURE_DIR
#error "MODLOG_FIXTURE_DIR must be defined by the build"
#endif

namespace testsup {

using namespace modlog;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(MODLOG_FIXTURE_DIR) + "/" + name;
}

inline std::string fixture_text(const std::string& name) {
  return read_file(fixture_path(name));
}

// Output captured from one session.
struct sink_pair {
  std::string out;
  std::string err;
};

inline void attach(session& s, sink_pair& sk) {
  s.set_output([&sk](const std::string& t) { sk.out += t; });
  s.set_error_output([&sk](const std::string& t) { sk.err += t; });
}

// Loads the named fixtures into `s` (in order) and commits.
inline void load_fixtures(session& s, std::initializer_list<const char*> names) {
  for (const char* n : names) s.load_string(fixture_text(n), n);
  s.commit();
}

inline void load_text(session& s, const std::string& text,
                      const std::string& name = "<test>") {
  s.load_string(text, name);
  s.commit();
}

// Unbound variables print as "_<id>"; ids differ between runs, so collapse
// them before comparing rendered bindings across sessions.
inline std::string normalize_vars(const std::string& s) {
  static const std::regex var_re("_[0-9]+");
  return std::regex_replace(s, var_re, "_");
}

struct run_result {
  bool found = false;
  std::vector<std::string> solutions;  // "Name = Value, ..." per solution
  std::string ball;                    // rendered uncaught ball, empty if none
  long long meta_calls = 0;
};

// Enumerates solutions of `goal` (all of them when limit == 0). Bindings of
// each solution are joined into one line; uncaught balls are captured, not
// rethrown.
inline run_result solve_all(session& s, const std::string& goal,
                            std::size_t limit = 0) {
  run_result r;
  try {
    r.found = s.solve(goal, [&](const solution& sol) {
      std::string line;
      for (const auto& b : sol.bindings) {
        if (!line.empty()) line += ", ";
        line += b.first + " = " + b.second;
      }
      r.solutions.push_back(line);
      return limit == 0 || r.solutions.size() < limit;
    });
  } catch (const prolog_error& e) {
    r.ball = write_canonical_term(e.ball, true);
  }
  r.meta_calls = s.meta_call_count();
  return r;
}

// Solution lines as a multiset (sorted, variable ids collapsed).
inline std::vector<std::string> solution_multiset(const run_result& r) {
  std::vector<std::string> v;
  v.reserve(r.solutions.size());
  for (const auto& s : r.solutions) v.push_back(normalize_vars(s));
  std::sort(v.begin(), v.end());
  return v;
}

// Lint records for a program text, mirroring the CLI lint setup (no
// expansion, tolerant templates).
inline std::vector<lint_record> lint_text(const std::string& text,
                                          const std::string& name,
                                          int ceiling = 8) {
  interp_options o;
  o.expand = false;
  o.tolerant_templates = true;
  session s(o);
  sink_pair sk;
  attach(s, sk);
  s.load_string(text, name);
  s.commit();
  return lint_modules(s.db(), ceiling);
}

}  // namespace testsup
