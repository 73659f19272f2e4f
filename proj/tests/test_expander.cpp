#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expander.hpp"
#include "reader.hpp"
#include "support.hpp"
#include "writer.hpp"

using namespace modlog;

namespace {

term_ptr parse1(const std::string& text, var_pool& pool) {
  return parse_term(text, "<t>", pool).t;
}

std::string render(const term_ptr& t) { return write_canonical_term(t, true); }

}  // namespace

TEST_CASE("peel_static: innermost qualifier wins") {
  var_pool pool;
  peeled_goal p = peel_static(parse1("m1:(m2:(m3:g(X)))", pool));
  REQUIRE(p.module.has_value());
  CHECK(*p.module == "m3");
  CHECK(is_functor(p.goal, "g", 1));
  CHECK_FALSE(p.var_qualifier);
  CHECK_FALSE(p.bad_qualifier);
  CHECK_FALSE(p.synthetic);

  p = peel_static(parse1("plain(X)", pool));
  CHECK_FALSE(p.module.has_value());

  p = peel_static(parse1("M:g", pool));
  CHECK(p.var_qualifier);

  p = peel_static(parse1("42:g", pool));
  CHECK(p.bad_qualifier);

  // Synthetic marking comes from qualify().
  term_ptr wrapped = qualify("m", parse1("g", pool));
  p = peel_static(wrapped);
  REQUIRE(p.module.has_value());
  CHECK(*p.module == "m");
  CHECK(p.synthetic);
  term_ptr user_written = qualify("m", parse1("g", pool), /*synthetic=*/false);
  CHECK_FALSE(peel_static(user_written).synthetic);
}

TEST_CASE("propagate_control distributes over the control skeleton") {
  var_pool pool;
  auto prop = [&](const std::string& s) {
    return testsup::normalize_vars(render(propagate_control("m", parse1(s, pool))));
  };
  CHECK(prop("(x:a, b)") == "x:a,m:b");
  CHECK(prop("(a, b)") == "m:a,m:b");
  CHECK(prop("(a ; b)") == "m:a;m:b");
  CHECK(prop("(a -> b ; c)") == "m:a->m:b;m:c");
  CHECK(prop("\\+ a") == "\\+m:a");
  CHECK(prop("\\+ x:a") == "\\+x:a");
  CHECK(prop("call(g, E)") == "call(m:g,_)");
  CHECK(prop("call(x:g, E)") == "call(x:g,_)");
  CHECK(prop("catch(g, E, r)") == "catch(m:g,_,m:r)");
  CHECK(prop("catch(x:g, E, y:r)") == "catch(x:g,_,y:r)");
  CHECK(prop("leaf(X)") == "m:leaf(_)");
  CHECK(prop("((a, b) ; c)") == "m:a,m:b;m:c");
}

TEST_CASE("collect_head_meta_vars and qualify_meta_args") {
  var_pool pool;
  template_result tr = build_template(parse1("p(0, ?, 1)", pool), false);
  REQUIRE(tr.ok);

  term_ptr head = parse1("p(G, X, C)", pool);
  std::set<long long> hmv = collect_head_meta_vars(tr.tmpl, head);
  CHECK(hmv.size() == 2);  // G and C, not X
  CHECK(hmv.count(head->args[0]->ival) == 1);
  CHECK(hmv.count(head->args[1]->ival) == 0);
  CHECK(hmv.count(head->args[2]->ival) == 1);

  // Meta args get the context; normal args and already-qualified ones stay.
  term_ptr goal = parse1("p(inner, keep, x:c)", pool);
  term_ptr wrapped = qualify_meta_args(tr.tmpl, goal, "ctx");
  CHECK(render(wrapped) == "p(ctx:inner,keep,x:c)");

  // Head meta variables are left alone so templates chain.
  term_ptr chain = parse1("p(G, z, cl)", pool);
  std::set<long long> skip{chain->args[0]->ival};
  term_ptr out = qualify_meta_args(tr.tmpl, chain, "ctx", skip);
  REQUIRE(out->args.size() == 3);
  CHECK(out->args[0]->kind == term_kind::var);
  CHECK(render(out->args[2]) == "ctx:cl");
}

TEST_CASE("classify_meta_call") {
  var_pool pool;
  std::set<long long> hmv;
  term_ptr hv = parse1("G", pool);
  hmv.insert(hv->ival);
  CHECK(classify_meta_call(parse1("x:g", pool), hmv) ==
        meta_call_class::already_qualified);
  CHECK(classify_meta_call(hv, hmv) == meta_call_class::head_meta_var);
  CHECK(classify_meta_call(parse1("g(1)", pool), hmv) ==
        meta_call_class::caller_qualified);
}

TEST_CASE("expand_body wraps meta arguments with the enclosing module") {
  session s;
  testsup::load_fixtures(s, {"library.pl", "client_v1.pl"});
  // load_fixtures commits, which already expands; inspect the stored clause.
  const module_def* client = s.db().find("client");
  REQUIRE(client != nullptr);
  const predicate_def* test = client->find_pred({"test", 1});
  REQUIRE(test != nullptr);
  REQUIRE(test->clauses.size() == 1);
  CHECK(render(test->clauses[0]->body).rfind("my_call(client:me(", 0) == 0);

  // The library's own call site keeps its head meta variable bare.
  const module_def* lib = s.db().find("library");
  const predicate_def* mc = lib->find_pred({"my_call", 1});
  REQUIRE(mc != nullptr);
  std::string body = render(mc->clauses[0]->body);
  CHECK(body.find("call(Goal") == std::string::npos);  // ids rendered, not names
  CHECK(body.find("call(_") != std::string::npos);     // still a bare variable
  CHECK(body.find("library:call") == std::string::npos);
}

TEST_CASE("expansion golden: qualified call site stays, unqualified gains context") {
  session s;
  testsup::load_fixtures(s, {"library.pl", "client_v2.pl"});
  const module_def* client = s.db().find("client");
  const predicate_def* test = client->find_pred({"test", 1});
  REQUIRE(test != nullptr);
  std::string body = render(test->clauses[0]->body);
  // Explicitly qualified call sites are left for the runtime flag to decide.
  CHECK(body.rfind("library:my_call(me(", 0) == 0);
}

TEST_CASE("expand_body is idempotent") {
  session s;
  testsup::load_fixtures(s, {"library.pl", "client_v1.pl", "client_nested.pl"});
  for (const char* mod : {"library", "client", "nestcli"}) {
    const module_def* m = s.db().find(mod);
    REQUIRE(m != nullptr);
    for (const auto& ind : m->pred_order) {
      const predicate_def& p = m->preds.at(ind);
      for (const auto& c : p.clauses) {
        std::set<long long> hmv;
        if (p.tmpl) hmv = collect_head_meta_vars(*p.tmpl, c->head);
        term_ptr again = expand_body(s.db(), mod, c->body, hmv);
        CAPTURE(mod);
        CAPTURE(render(c->body));
        CHECK(again == nullptr);  // nothing changes on a second pass
      }
    }
  }
}

TEST_CASE("expand skips transparent predicates") {
  session s;
  testsup::load_fixtures(s, {"reflect_transparent.pl"});
  const module_def* t = s.db().find("t");
  const predicate_def* cm = t->find_pred({"cm", 1});
  REQUIRE(cm != nullptr);
  CHECK(render(cm->clauses[0]->body).rfind("context_module(", 0) == 0);
}

TEST_CASE("static_qualify_body wraps every unqualified leaf") {
  var_pool pool;
  term_ptr body = parse1("(a, x:b ; call(c), \\+ d)", pool);
  term_ptr out = static_qualify_body("m", body);
  CHECK(render(out) == "m:a,x:b;m:call(c),m:(\\+d)");
}

TEST_CASE("nested qualified bodies are not rewritten by expansion") {
  session s2;
  testsup::load_text(s2,
                     ":- module(w, [go/1]).\n"
                     ":- meta_predicate(mc(0)).\n"
                     "mc(G) :- call(G).\n"
                     "go(X) :- other:mc(hit(X)).\n"
                     "other:hit(1).\n");
  const module_def* w = s2.db().find("w");
  const predicate_def* go = w->find_pred({"go", 1});
  std::string body = render(go->clauses[0]->body);
  CHECK(body.rfind("other:mc(hit(", 0) == 0);
}
