#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "lint.hpp"
#include "support.hpp"

using namespace modlog;
using testsup::attach;
using testsup::load_fixtures;
using testsup::read_file;
using testsup::sink_pair;
using testsup::solve_all;

namespace {

const char* kCorpus[] = {
    "sr1_nonvar", "sr1_alias",   "sr2_local",        "sr2_missing",
    "sr2_var",    "sr3_bare",    "sr3_wrong_arity",  "sr3_normal_pos",
    "sr3_forward", "d1_transparent", "d2_malformed", "d3_extended",
    "d4_unimplemented", "p1_ceiling", "p2_univ",     "clean_library",
    "clean_reflect", "tool_d1",
};

std::string corpus_path(const std::string& base) {
  return std::string(MODLOG_FIXTURE_DIR) + "/lint/" + base;
}

// A golden file encodes the expected exit status too: any line whose
// severity field is not "info" makes the run fail.
int exit_from_golden(const std::string& golden) {
  size_t pos = 0;
  while (pos < golden.size()) {
    size_t eol = golden.find('\n', pos);
    std::string line = golden.substr(pos, eol - pos);
    pos = (eol == std::string::npos) ? golden.size() : eol + 1;
    size_t a = line.find(' ');           // after file:line:col
    size_t b = line.find(' ', a + 1);    // after RULE
    size_t c = line.find(' ', b + 1);    // after severity
    if (a == std::string::npos || b == std::string::npos) continue;
    std::string sev = line.substr(b + 1, c - b - 1);
    if (sev != "info") return 1;
  }
  return 0;
}

std::vector<lint_record> lint_bundle(std::initializer_list<const char*> files,
                                     int ceiling = 8) {
  interp_options o;
  o.expand = false;
  o.tolerant_templates = true;
  session s(o);
  sink_pair sk;
  attach(s, sk);
  load_fixtures(s, files);
  return lint_modules(s.db(), ceiling);
}

}  // namespace

TEST_CASE("lint corpus matches the goldens byte for byte") {
  for (const char* base : kCorpus) {
    CAPTURE(base);
    std::string name = std::string(base) + ".pl";
    std::string text = read_file(corpus_path(name));
    std::string golden = read_file(corpus_path(std::string(base) + ".golden"));
    std::vector<lint_record> rs = testsup::lint_text(text, name);
    CHECK(format_records(rs) == golden);
    CHECK(lint_exit_code(rs) == exit_from_golden(golden));
  }
}

TEST_CASE("well-declared module interfaces lint clean") {
  CHECK(format_records(lint_bundle({"library.pl", "client_v1.pl"})).empty());
  CHECK(format_records(lint_bundle({"library.pl", "client_v2.pl"})).empty());
  CHECK(format_records(lint_bundle({"library.pl", "client_nested.pl"})).empty());
  CHECK(format_records(lint_bundle({"applier.pl", "kmod.pl", "worker.pl"}))
            .empty());
}

TEST_CASE("context-driven declarations report exactly one D1") {
  std::string tool = read_file(corpus_path("tool_d1.pl"));
  std::vector<lint_record> rs = testsup::lint_text(tool, "tool_d1.pl");
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].rule == "D1");
  CHECK(rs[0].sev == lint_severity::warning);

  std::string tr = read_file(corpus_path("d1_transparent.pl"));
  rs = testsup::lint_text(tr, "d1_transparent.pl");
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].rule == "D1");
}

TEST_CASE("text format carries the same facts as the record format") {
  std::string text = read_file(corpus_path("sr1_nonvar.pl"));
  std::vector<lint_record> rs = testsup::lint_text(text, "sr1_nonvar.pl");
  CHECK(format_text(rs) ==
        "sr1_nonvar.pl:5:1: error: meta argument 1 of my_call/1 must be a "
        "variable in the clause head [SR1]\n");
}

TEST_CASE("lint output is deterministic") {
  std::string text = read_file(corpus_path("p2_univ.pl"));
  std::string first = format_records(testsup::lint_text(text, "p2_univ.pl"));
  std::string second = format_records(testsup::lint_text(text, "p2_univ.pl"));
  CHECK(first == second);
  CHECK_FALSE(first.empty());
}

TEST_CASE("the arity ceiling is configurable") {
  std::string text = read_file(corpus_path("p1_ceiling.pl"));
  std::vector<lint_record> rs = testsup::lint_text(text, "p1_ceiling.pl", 10);
  // With a wider ceiling the P1 record disappears; the SR2 info remains.
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].rule == "SR2");
  CHECK(lint_exit_code(rs) == 0);
}

TEST_CASE("SR1: a bound meta position in the head fails calls silently") {
  session s;  // normal session, expansion on
  s.load_string(read_file(corpus_path("sr1_nonvar.pl")), "sr1_nonvar.pl");
  s.commit();
  // The call-site wrap can never unify with the constant head, so even the
  // literally matching argument finds no solution and raises no ball.
  testsup::run_result r = solve_all(s, "sr1a:my_call(foo)");
  CHECK_FALSE(r.found);
  CHECK(r.ball.empty());
}

TEST_CASE("SR3: a closure invoked with the wrong extras shifts the arity") {
  session s;
  s.load_string(read_file(corpus_path("sr3_wrong_arity.pl")),
                "sr3_wrong_arity.pl");
  s.commit();
  load_fixtures(s, {"kmod.pl"});
  // k2 expects two extras; the body supplies one, so the runtime looks for
  // k2/1 and reports the arity-shifted target.
  testsup::run_result r = solve_all(s, "sr3b:apply_two(k2, x1)");
  CHECK(r.ball == "error(existence_error(procedure,sr3b:k2/1),k2/1)");
}
