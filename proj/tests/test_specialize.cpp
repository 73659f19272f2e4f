#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "specialize.hpp"
#include "support.hpp"

using namespace modlog;
using testsup::attach;
using testsup::load_fixtures;
using testsup::load_text;
using testsup::normalize_vars;
using testsup::run_result;
using testsup::sink_pair;
using testsup::solve_all;

namespace {

interp_options lookup_opts() {
  interp_options o;
  o.colon_sets_calling_context = false;
  return o;
}

specialize_stats run_spec(session& s) {
  return specialize_all(s.db(), s.pool(), s.options());
}

bool any_diag_contains(const specialize_stats& st, const std::string& needle) {
  for (const std::string& d : st.diagnostics)
    if (d.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("a static meta call site becomes a direct auxiliary predicate") {
  session s;
  load_fixtures(s, {"library.pl", "client_v1.pl"});
  specialize_stats st = run_spec(s);
  CHECK(st.sites == 1);
  CHECK(st.aux_preds == 1);
  CHECK(st.diagnostics.empty());

  CHECK(normalize_vars(render_program(s.db())) ==
        ":- module(library, [my_call/1]).\n"
        ":- meta_predicate(my_call(0)).\n"
        "my_call(_):-write('Calling: '),writeq(_),nl,call(_).\n"
        "me(library).\n"
        ":- module(client, [test/1]).\n"
        ":- use_module(library, [my_call/1]).\n"
        "test(_):-client:my_call__spec1(_).\n"
        "me(client).\n"
        "my_call__spec1(_):-library:write('Calling: '),"
        "library:writeq(client:me(_)),library:nl,client:me(_).\n");
}

TEST_CASE("specialization preserves behavior and removes meta dispatches") {
  for (bool calling : {true, false}) {
    CAPTURE(calling);
    interp_options o;
    o.colon_sets_calling_context = calling;

    session a(o);
    sink_pair ska;
    attach(a, ska);
    load_fixtures(a, {"library.pl", "client_v1.pl"});
    run_result ra = solve_all(a, "test(Me)");

    session b(o);
    sink_pair skb;
    attach(b, skb);
    load_fixtures(b, {"library.pl", "client_v1.pl"});
    run_spec(b);
    run_result rb = solve_all(b, "test(Me)");

    CHECK(ra.solutions == rb.solutions);
    CHECK(normalize_vars(ska.out) == normalize_vars(skb.out));
    CHECK(ra.meta_calls == 1);
    CHECK(rb.meta_calls == 0);
  }
}

TEST_CASE("nested sites specialize innermost first and stay faithful") {
  for (bool calling : {true, false}) {
    CAPTURE(calling);
    interp_options o;
    o.colon_sets_calling_context = calling;

    session a(o);
    sink_pair ska;
    attach(a, ska);
    load_fixtures(a, {"library.pl", "client_nested.pl"});
    run_result ra = solve_all(a, "test2(Me)");

    session b(o);
    sink_pair skb;
    attach(b, skb);
    load_fixtures(b, {"library.pl", "client_nested.pl"});
    specialize_stats st = run_spec(b);
    CHECK(st.aux_preds == 2);
    std::string listing = render_program(b.db());
    CHECK(listing.find("test2(") != std::string::npos);
    CHECK(listing.find("my_call__spec2") != std::string::npos);
    run_result rb = solve_all(b, "test2(Me)");

    CHECK(ra.solutions == rb.solutions);
    CHECK(normalize_vars(ska.out) == normalize_vars(skb.out));
    CHECK(rb.meta_calls == 0);
    // The two flag settings genuinely disagree on the inner context.
    if (calling)
      CHECK(ra.solutions == std::vector<std::string>{"Me = nestcli"});
    else
      CHECK(ra.solutions == std::vector<std::string>{"Me = library"});
  }
}

TEST_CASE("sites whose target bodies keep meta-sensitive goals are skipped") {
  session s;
  load_fixtures(s, {"applier.pl", "kmod.pl", "worker.pl"});
  specialize_stats st = run_spec(s);
  CHECK(st.sites == 1);
  CHECK(st.aux_preds == 1);
  REQUIRE(st.diagnostics.size() == 1);
  CHECK(st.diagnostics[0].find("skipping site run_none/1: clause bodies keep "
                               "context- or meta-sensitive goals") !=
        std::string::npos);

  std::string listing = render_program(s.db());
  CHECK(normalize_vars(listing).find("work(_):-worker:apply_to__spec1(_).") !=
        std::string::npos);
  CHECK(normalize_vars(listing).find("apply_to__spec1(_):-worker:k1(_).") !=
        std::string::npos);

  CHECK(testsup::solution_multiset(solve_all(s, "work(X)")) ==
        std::vector<std::string>{"X = x1", "X = x2"});
  CHECK(solve_all(s, "none").found);
}

TEST_CASE("specialization is idempotent") {
  session s;
  load_fixtures(s, {"library.pl", "client_v1.pl"});
  run_spec(s);
  std::string first = render_program(s.db());
  specialize_stats again = run_spec(s);
  CHECK(again.sites == 0);
  CHECK(again.aux_preds == 0);
  CHECK(render_program(s.db()) == first);
}

TEST_CASE("auxiliary name collisions are refused loudly") {
  session s;
  load_fixtures(s, {"library.pl"});
  load_text(s,
            ":- module(client, [test/1]).\n"
            ":- use_module(library, [my_call/1]).\n"
            "test(Me) :- my_call(me(Me)).\n"
            "me(client).\n"
            "my_call__spec1(x).\n",
            "collide.pl");
  CHECK_THROWS_WITH_AS(run_spec(s),
                       "specialization name collision: client:my_call__spec1/1",
                       load_error);
}

TEST_CASE("deeply nested static sites stop at the depth cap") {
  session s;
  load_text(s,
            ":- module(d, [top/0]).\n"
            ":- meta_predicate(r(0)).\n"
            "r(G) :- call(G).\n"
            "top :- r(r(r(r(r(r(r(r(r(r(true)))))))))).\n",
            "deep.pl");
  specialize_stats st = run_spec(s);
  CHECK(any_diag_contains(st, "specialization depth limit reached at r/1"));
  CHECK(solve_all(s, "d:top").found);  // behavior survives the cap
}

TEST_CASE("context-driven targets are left alone with a note") {
  {
    session s;
    load_fixtures(s, {"reflect_tool.pl"});
    load_text(s, "t1(C) :- m:mp(true, C).\n", "site1.pl");
    specialize_stats st = run_spec(s);
    CHECK(st.sites == 0);
    CHECK(any_diag_contains(
        st, "info: mp/2 is a tool interface without a meta template; not "
            "specializable"));
    CHECK(solve_all(s, "t1(C)").solutions ==
          std::vector<std::string>{"C = user"});
  }
  {
    session s;
    load_fixtures(s, {"reflect_transparent.pl"});
    load_text(s, "t2(C) :- t:cm(C).\n", "site2.pl");
    specialize_stats st = run_spec(s);
    CHECK(st.sites == 0);
    CHECK(any_diag_contains(
        st, "info: cm/1 is module-transparent without a meta template; not "
            "specializable"));
  }
}

TEST_CASE("the specialized listing reloads to the same program") {
  session s;
  load_fixtures(s, {"library.pl", "client_v1.pl"});
  run_spec(s);
  std::string listing = render_program(s.db());

  session s2;
  sink_pair sk2;
  attach(s2, sk2);
  load_text(s2, listing, "reloaded.pl");
  run_result r = solve_all(s2, "test(Me)");
  CHECK(r.solutions == std::vector<std::string>{"Me = client"});
  CHECK(normalize_vars(sk2.out) == "Calling: client:me(_)\n");
  CHECK(r.meta_calls == 0);
}
