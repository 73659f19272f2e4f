// Command-line front end: load programs, prove goals, inspect the expanded
// or specialized database, run the style checks, time the engine variants.
// Talks to the interpreter exclusively through the public C interface.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modlog.h"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitLoad = 2;
constexpr int kExitNoSolution = 1;

void write_stdout(const char* text, size_t len, void*) {
  std::fwrite(text, 1, len, stdout);
}

void write_stderr(const char* text, size_t len, void*) {
  std::fwrite(text, 1, len, stderr);
}

struct cli_config {
  std::vector<std::string> files;
  std::string goal;
  std::string semantics = "calling";
  int max_call_n = 255;
  bool strict = false;
  bool strict_scope = false;
  bool occurs_check = false;
  bool all = false;
  bool no_expand = false;
  long depth_limit = 0;
  std::string lint_format = "records";
  int call_ceiling = 8;
  int reps = 1000;
  std::vector<std::string> variants;
};

modlog_options make_options(const cli_config& c) {
  modlog_options o;
  modlog_options_init(&o);
  o.colon_sets_calling_context = c.semantics == "calling" ? 1 : 0;
  o.max_call_n = c.max_call_n;
  o.occurs_check = c.occurs_check ? 1 : 0;
  o.strict = c.strict ? 1 : 0;
  o.strict_scope = c.strict_scope ? 1 : 0;
  o.expand = c.no_expand ? 0 : 1;
  o.depth_limit = c.depth_limit;
  o.call_ceiling = c.call_ceiling;
  return o;
}

class interp_guard {
 public:
  explicit interp_guard(const modlog_options& o) : ip_(modlog_create(&o)) {
    if (ip_) {
      modlog_set_output(ip_, write_stdout, nullptr);
      modlog_set_error_output(ip_, write_stderr, nullptr);
    }
  }
  ~interp_guard() { modlog_destroy(ip_); }
  interp_guard(const interp_guard&) = delete;
  interp_guard& operator=(const interp_guard&) = delete;
  modlog_interp* get() const { return ip_; }

 private:
  modlog_interp* ip_;
};

int fail_with(modlog_interp* ip, int code) {
  std::fprintf(stderr, "%s\n", modlog_last_error(ip));
  return code;
}

// Loads every file and validates the database; 0 on success.
int load_all(modlog_interp* ip, const std::vector<std::string>& files) {
  for (const std::string& f : files)
    if (modlog_load_file(ip, f.c_str()) != MODLOG_OK)
      return fail_with(ip, kExitLoad);
  if (modlog_commit(ip) != MODLOG_OK) return fail_with(ip, kExitLoad);
  return 0;
}

struct solve_printer {
  bool all = false;
  bool first = true;
};

int print_solution(const char* bindings, void* user) {
  auto* sp = static_cast<solve_printer*>(user);
  if (!sp->first) std::fputs(";\n", stdout);
  sp->first = false;
  std::fputs(bindings, stdout);
  return sp->all ? 1 : 0;
}

int report_goal_outcome(modlog_interp* ip, modlog_status st) {
  switch (st) {
    case MODLOG_OK:
      std::fputs("yes\n", stdout);
      return 0;
    case MODLOG_FAIL:
      std::fputs("no\n", stdout);
      return kExitNoSolution;
    case MODLOG_ERR_SYNTAX:
      return fail_with(ip, kExitLoad);
    default:
      return fail_with(ip, kExitNoSolution);
  }
}

int cmd_run(const cli_config& c) {
  interp_guard ig(make_options(c));
  if (int rc = load_all(ig.get(), c.files)) return rc;
  solve_printer sp{c.all, true};
  modlog_status st = modlog_solve(ig.get(), c.goal.c_str(), print_solution, &sp);
  return report_goal_outcome(ig.get(), st);
}

int cmd_repl(const cli_config& c) {
  interp_guard ig(make_options(c));
  if (int rc = load_all(ig.get(), c.files)) return rc;
  std::string line;
  while (true) {
    std::cout << "?- " << std::flush;
    if (!std::getline(std::cin, line)) {
      std::cout << "\n";
      return 0;
    }
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t'))
      trimmed.pop_back();
    if (trimmed.empty()) continue;
    if (trimmed == "halt." || trimmed == "halt") return 0;
    auto more = [](const char* bindings, void*) -> int {
      std::fputs(bindings, stdout);
      std::string answer;
      if (!std::getline(std::cin, answer)) return 0;
      return answer == ";" ? 1 : 0;
    };
    modlog_status st = modlog_solve(ig.get(), trimmed.c_str(), more, nullptr);
    if (st == MODLOG_OK)
      std::fputs("yes\n", stdout);
    else if (st == MODLOG_FAIL)
      std::fputs("no\n", stdout);
    else
      std::fprintf(stderr, "%s\n", modlog_last_error(ig.get()));
  }
}

int cmd_expand(const cli_config& c) {
  cli_config cc = c;
  cc.no_expand = false;  // showing the qualification pass is the point
  interp_guard ig(make_options(cc));
  if (int rc = load_all(ig.get(), cc.files)) return rc;
  char* text = nullptr;
  if (modlog_program_listing(ig.get(), &text) != MODLOG_OK)
    return fail_with(ig.get(), kExitLoad);
  std::fputs(text, stdout);
  modlog_free(text);
  return 0;
}

int cmd_lint(const cli_config& c) {
  modlog_options o = make_options(c);
  o.expand = 0;             // report the program as written
  o.strict = 0;             // the exit code carries the verdict
  o.tolerant_templates = 1; // malformed templates become diagnostics
  interp_guard ig(o);
  if (int rc = load_all(ig.get(), c.files)) return rc;
  char* text = nullptr;
  int exit_code = 0;
  if (modlog_lint(ig.get(), c.lint_format.c_str(), &text, &exit_code) !=
      MODLOG_OK)
    return fail_with(ig.get(), kExitUsage);
  std::fputs(text, stdout);
  modlog_free(text);
  return exit_code;
}

int cmd_specialize(const cli_config& c) {
  cli_config cc = c;
  cc.no_expand = false;  // the rewrite assumes qualified meta arguments
  interp_guard ig(make_options(cc));
  if (int rc = load_all(ig.get(), cc.files)) return rc;
  char* diags = nullptr;
  if (modlog_specialize(ig.get(), &diags) != MODLOG_OK)
    return fail_with(ig.get(), kExitLoad);
  if (diags) {
    std::fputs(diags, stderr);
    modlog_free(diags);
  }
  char* text = nullptr;
  if (modlog_program_source(ig.get(), &text) != MODLOG_OK)
    return fail_with(ig.get(), kExitLoad);
  std::fputs(text, stdout);
  modlog_free(text);
  return 0;
}

int cmd_bench(const cli_config& c) {
  modlog_options o = make_options(c);
  std::vector<const char*> paths;
  paths.reserve(c.files.size());
  for (const std::string& f : c.files) paths.push_back(f.c_str());
  std::vector<const char*> vars;
  vars.reserve(c.variants.size());
  for (const std::string& v : c.variants) vars.push_back(v.c_str());
  char* text = nullptr;
  modlog_status st = modlog_bench(
      &o, paths.data(), static_cast<int>(paths.size()), c.goal.c_str(),
      vars.data(), static_cast<int>(vars.size()), c.reps, &text);
  if (st == MODLOG_ERR_USAGE) {
    std::fprintf(stderr, "%s\n", modlog_last_error(nullptr));
    return kExitUsage;
  }
  if (st != MODLOG_OK) {
    std::fprintf(stderr, "%s\n", modlog_last_error(nullptr));
    return st == MODLOG_ERR_GOAL ? kExitNoSolution : kExitLoad;
  }
  std::fputs(text, stdout);
  modlog_free(text);
  return 0;
}

void add_common_flags(CLI::App* sub, cli_config& c) {
  sub->add_option("--semantics", c.semantics,
                  "What an explicit M:Goal qualifier sets")
      ->check(CLI::IsMember({"calling", "lookup"}))
      ->capture_default_str();
  sub->add_option("--max-call-n", c.max_call_n,
                  "Largest goal arity call/N may build")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_flag("--strict", c.strict, "Fail the load when lint reports errors");
  sub->add_flag("--strict-scope", c.strict_scope,
                "Raise on calls to unexported predicates");
  sub->add_flag("--occurs-check", c.occurs_check,
                "Occurs check during unification");
  sub->add_flag("--no-expand", c.no_expand,
                "Skip the load-time qualification pass");
  sub->add_option("--depth-limit", c.depth_limit,
                  "Resolution depth bound (0 = unlimited)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modlog: a mini Prolog with a predicate-based module system"};
  app.require_subcommand(1);
  cli_config c;

  CLI::App* run = app.add_subcommand("run", "Load programs and prove a goal");
  run->add_option("files", c.files, "Program files");
  run->add_option("-g,--goal", c.goal, "Goal to prove")->required();
  run->add_flag("--all", c.all, "Enumerate every solution");
  add_common_flags(run, c);

  CLI::App* repl = app.add_subcommand("repl", "Interactive goal loop");
  repl->add_option("files", c.files, "Program files");
  add_common_flags(repl, c);

  CLI::App* expand =
      app.add_subcommand("expand", "Print the database after qualification");
  expand->add_option("files", c.files, "Program files");
  add_common_flags(expand, c);

  CLI::App* lint = app.add_subcommand("lint", "Style and cross-reference checks");
  lint->add_option("files", c.files, "Program files");
  lint->add_option("--format", c.lint_format, "Diagnostic format")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();
  lint->add_option("--call-ceiling", c.call_ceiling,
                   "call/N arity to warn above")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common_flags(lint, c);

  CLI::App* spec =
      app.add_subcommand("specialize", "Rewrite static meta-calls and print");
  spec->add_option("files", c.files, "Program files");
  add_common_flags(spec, c);

  CLI::App* bench = app.add_subcommand("bench", "Time the engine variants");
  bench->add_option("files", c.files, "Program files");
  bench->add_option("-g,--goal", c.goal, "Goal to time")->required();
  bench->add_option("-n,--reps", c.reps, "Repetitions per variant")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench->add_option("--variants", c.variants,
                    "Variants to time (default: all four)");
  add_common_flags(bench, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (run->parsed()) return cmd_run(c);
  if (repl->parsed()) return cmd_repl(c);
  if (expand->parsed()) return cmd_expand(c);
  if (lint->parsed()) return cmd_lint(c);
  if (spec->parsed()) return cmd_specialize(c);
  if (bench->parsed()) return cmd_bench(c);
  return kExitUsage;
}
