#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace modlog;
using testsup::load_fixtures;
using testsup::normalize_vars;
using testsup::run_result;
using testsup::solve_all;

namespace {

interp_options lookup_opts() {
  interp_options o;
  o.colon_sets_calling_context = false;
  return o;
}

std::string one(session& s, const std::string& goal) {
  run_result r = solve_all(s, goal, 1);
  if (!r.ball.empty()) return "ball: " + r.ball;
  if (!r.found) return "no";
  return normalize_vars(r.solutions.empty() ? "" : r.solutions[0]);
}

}  // namespace

TEST_CASE("strip_module peels nested qualifiers") {
  session s;
  load_fixtures(s, {"gmod.pl"});
  CHECK(one(s, "strip_module(m1:m2:g, M, G)") == "M = m2, G = g");
  CHECK(one(s, "strip_module(g(1), M, G)") == "M = user, G = g(1)");
  CHECK(one(s, "strip_module(m:true, M, G)") == "M = m, G = true");
  // Lenient on odd qualifiers: they are reported, not rejected.
  CHECK(one(s, "strip_module(V:g, M, G)") == "V = _, M = _, G = g");
  CHECK(one(s, "strip_module(42:g, M, G)") == "M = 42, G = g");
}

TEST_CASE("strip_module sees the caller through a meta argument") {
  {
    session s;
    load_fixtures(s, {"reflect_strip.pl"});
    CHECK(one(s, "mp(true, C)") == "C = user");
    CHECK(one(s, "m:mp(true, C)") == "C = m");
  }
  {
    session s(lookup_opts());
    load_fixtures(s, {"reflect_strip.pl"});
    CHECK(one(s, "mp(true, C)") == "C = user");
    CHECK(one(s, "m:mp(true, C)") == "C = user");
  }
}

TEST_CASE("unification against Module:Goal sees the same wrap") {
  {
    session s;
    load_fixtures(s, {"reflect_qpattern.pl"});
    CHECK(one(s, "mp(true, C)") == "C = user");
    CHECK(one(s, "m:mp(true, C)") == "C = m");
  }
  {
    session s(lookup_opts());
    load_fixtures(s, {"reflect_qpattern.pl"});
    CHECK(one(s, "mp(true, C)") == "C = user");
    CHECK(one(s, "m:mp(true, C)") == "C = user");
  }
}

TEST_CASE("tool interfaces receive the true caller under both flags") {
  for (bool calling : {true, false}) {
    CAPTURE(calling);
    interp_options o;
    o.colon_sets_calling_context = calling;
    session s(o);
    load_fixtures(s, {"reflect_tool.pl"});
    CHECK(one(s, "mp(true, C)") == "C = user");
    CHECK(one(s, "m:mp(true, C)") == "C = user");
  }
}

TEST_CASE("context_module reports the context of a transparent predicate") {
  {
    session s;
    load_fixtures(s, {"reflect_transparent.pl"});
    CHECK(one(s, "context_module(C)") == "C = user");
    CHECK(one(s, "cm(C)") == "C = user");
    CHECK(one(s, "t:cm(C)") == "C = t");
    CHECK(one(s, "m:context_module(C)") == "C = m");
  }
  {
    session s(lookup_opts());
    load_fixtures(s, {"reflect_transparent.pl"});
    CHECK(one(s, "cm(C)") == "C = user");
    CHECK(one(s, "t:cm(C)") == "C = user");
    CHECK(one(s, "m:context_module(C)") == "C = user");
  }
}

TEST_CASE("predicate_property reports definition facts") {
  session s;
  load_fixtures(s, {"gmod.pl", "library.pl"});

  CHECK(solve_all(s, "predicate_property(m:g(_), defined)").found);
  CHECK(solve_all(s, "predicate_property(m:g(_), exported)").found);
  CHECK(solve_all(s, "predicate_property(g(_), imported_from(m))").found);
  CHECK_FALSE(solve_all(s, "predicate_property(m:g(_), dynamic)").found);
  CHECK_FALSE(solve_all(s, "predicate_property(m:g(_), built_in)").found);

  CHECK(one(s, "findall(_P, predicate_property(m:g(_), _P), L)") ==
        "L = [defined,exported]");
  CHECK(one(s, "findall(_P, predicate_property(g(_), _P), L)") ==
        "L = [defined,exported,imported_from(m)]");
  CHECK(one(s, "findall(_P, predicate_property(library:my_call(_), _P), L)") ==
        "L = [defined,exported,meta_predicate(my_call(0))]");

  // Dynamic predicates gain the property when they appear.
  CHECK(solve_all(s, "assertz(d(1))").found);
  CHECK(one(s, "findall(_P, predicate_property(d(_), _P), L)") ==
        "L = [defined,dynamic]");
}

TEST_CASE("predicate_property marks context-driven predicates transparent") {
  session s;
  load_fixtures(s, {"reflect_tool.pl", "reflect_transparent.pl"});
  CHECK(one(s, "findall(_P, predicate_property(m:mp(_, _), _P), L)") ==
        "L = [defined,transparent,exported]");
  CHECK(solve_all(s, "predicate_property(t:cm(_), transparent)").found);
}

TEST_CASE("predicate_property covers builtins including call/N") {
  session s;
  load_fixtures(s, {"gmod.pl"});
  CHECK(solve_all(s, "predicate_property(write(_), built_in)").found);
  CHECK(solve_all(s, "predicate_property(call(_, _, _), built_in)").found);
  CHECK(one(s, "findall(_T, predicate_property(call(_), meta_predicate(_T)), L)") ==
        "L = [call(0)]");
  CHECK(one(s, "findall(_T, predicate_property(call(_, _), meta_predicate(_T)), L)") ==
        "L = [call(1,?)]");

  // Enumeration with an open head covers the view module's exports.
  CHECK(one(s, "findall(_H, predicate_property(m:_H, exported), L)") ==
        "L = [g(_),f(_)]");

  CHECK(solve_all(s, "predicate_property(V:g, P)").ball ==
        "error(instantiation_error,predicate_property/2)");
  CHECK(solve_all(s, "predicate_property(42, P)").ball ==
        "error(type_error(callable,42),predicate_property/2)");
}
