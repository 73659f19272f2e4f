#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reader.hpp"
#include "support.hpp"
#include "term.hpp"
#include "writer.hpp"

using namespace modlog;

namespace {

term_ptr parse1(const std::string& text, var_pool& pool) {
  return parse_term(text, "<t>", pool).t;
}

std::string rt(const std::string& text) {
  var_pool pool;
  return write_canonical_term(parse1(text, pool), true);
}

}  // namespace

TEST_CASE("tokens: basic shapes") {
  auto toks = tokenize("foo Bar _x 42 'q a' f(X), [a|T]", "<t>");
  REQUIRE(toks.back().kind == token_kind::eof);
  CHECK(toks[0].kind == token_kind::atom);
  CHECK(toks[0].text == "foo");
  CHECK(toks[1].kind == token_kind::variable);
  CHECK(toks[1].text == "Bar");
  CHECK(toks[2].kind == token_kind::variable);
  CHECK(toks[2].text == "_x");
  CHECK(toks[3].kind == token_kind::integer);
  CHECK(toks[3].ival == 42);
  CHECK(toks[4].kind == token_kind::atom);
  CHECK(toks[4].text == "q a");
  CHECK(toks[4].quoted);
}

TEST_CASE("tokens: symbol runs use longest match") {
  auto toks = tokenize("X =.. L", "<t>");
  CHECK(toks[1].text == "=..");
  // A '.' only ends a clause when it starts a token.
  auto t2 = tokenize("a:-b.", "<t>");
  CHECK(t2[1].text == ":-");
  CHECK(t2[3].kind == token_kind::end);
  auto t3 = tokenize("p :- q. % trailing comment", "<t>");
  CHECK(t3[3].kind == token_kind::end);
}

TEST_CASE("tokens: negative integers glue only in operand position") {
  auto toks = tokenize("f(-3)", "<t>");
  CHECK(toks[2].kind == token_kind::integer);
  CHECK(toks[2].ival == -3);
  auto t2 = tokenize("g(1 -3)", "<t>");  // '-' after an integer is an atom
  CHECK(t2[2].kind == token_kind::integer);
  CHECK(t2[3].kind == token_kind::atom);
  CHECK(t2[3].text == "-");
}

TEST_CASE("tokens: quoted escapes") {
  auto toks = tokenize("'a\\nb' '\\t' '\\\\' '\\''", "<t>");
  CHECK(toks[0].text == "a\nb");
  CHECK(toks[1].text == "\t");
  CHECK(toks[2].text == "\\");
  CHECK(toks[3].text == "'");
  CHECK_THROWS_AS(tokenize("'\\x41'", "<t>"), syntax_error);
  CHECK_THROWS_AS(tokenize("'unterminated", "<t>"), syntax_error);
}

TEST_CASE("parse: operator precedence and associativity") {
  CHECK(rt("a :- b , c ; d") == "a:-b,c;d");
  var_pool pool;
  term_ptr t = parse1("a :- b , c ; d", pool);
  REQUIRE(is_functor(t, ":-", 2));
  REQUIRE(is_functor(t->args[1], ";", 2));
  CHECK(is_functor(t->args[1]->args[0], ",", 2));

  term_ptr ite = parse1("(c -> t ; e)", pool);
  REQUIRE(is_functor(ite, ";", 2));
  CHECK(is_functor(ite->args[0], "->", 2));

  // ':' is xfy: the innermost qualifier binds tightest.
  term_ptr q = parse1("m1:m2:g(X)", pool);
  REQUIRE(is_qualified(q));
  CHECK(is_atom(q->args[0], "m1"));
  REQUIRE(is_qualified(q->args[1]));
  CHECK(is_atom(q->args[1]->args[0], "m2"));
  CHECK(is_functor(q->args[1]->args[1], "g", 1));

  term_ptr cc = parse1("a::b", pool);
  CHECK(is_functor(cc, "::", 2));

  term_ptr neg = parse1("\\+ \\+ a", pool);
  REQUIRE(is_functor(neg, "\\+", 1));
  CHECK(is_functor(neg->args[0], "\\+", 1));

  term_ptr ind = parse1("m:f/1", pool);  // ':' (200) binds before '/' (400)
  REQUIRE(is_functor(ind, "/", 2));
  CHECK(is_qualified(ind->args[0]));
}

TEST_CASE("parse: arithmetic symbols are not operators") {
  var_pool pool;
  CHECK_THROWS_AS(parse1("1 + 2", pool), syntax_error);
  // As a functor they are plain compounds.
  term_ptr t = parse1("+(1, 2)", pool);
  CHECK(is_functor(t, "+", 2));
}

TEST_CASE("parse: univ reads as a 700 xfx operator") {
  var_pool pool;
  term_ptr t = parse1("X =.. [f, a]", pool);
  REQUIRE(is_functor(t, "=..", 2));
  CHECK(t->args[0]->kind == term_kind::var);
  term_ptr packed = parse1("X=..L", pool);
  CHECK(is_functor(packed, "=..", 2));
}

TEST_CASE("parse: functor application needs an adjacent '('") {
  var_pool pool;
  CHECK_NOTHROW(parse1("f(a)", pool));
  CHECK_THROWS_AS(parse1("f (a)", pool), syntax_error);
}

TEST_CASE("parse: anonymous variables are distinct, named ones shared") {
  var_pool pool;
  read_result r = parse_term("f(_, X, _, X)", "<t>", pool);
  REQUIRE(r.t->args.size() == 4);
  CHECK(r.t->args[0]->ival != r.t->args[2]->ival);
  CHECK(r.t->args[1]->ival == r.t->args[3]->ival);
  REQUIRE(r.var_names.size() == 1);
  CHECK(r.var_names[0].first == "X");
}

TEST_CASE("parse: operator atom before a closer is a plain atom") {
  var_pool pool;
  term_ptr t = parse1("f(:-)", pool);
  REQUIRE(is_functor(t, "f", 1));
  CHECK(is_atom(t->args[0], ":-"));
  CHECK(rt("f(:-)") == "f(:-)");
  CHECK_THROWS_AS(parse1("f(:- a, b)", pool), syntax_error);
}

TEST_CASE("parse: trailing input and malformed args are rejected") {
  var_pool pool;
  CHECK_THROWS_AS(parse1("a b", pool), syntax_error);
  CHECK_THROWS_AS(parse1("f(,)", pool), syntax_error);
  CHECK_THROWS_AS(parse1("f(a", pool), syntax_error);
  CHECK_THROWS_AS(parse1("", pool), syntax_error);
}

TEST_CASE("parse_program: item kinds and first-token locations") {
  var_pool pool;
  auto items = parse_program(":- module(m, []).\n\np(X) :-\n    q(X).\nfact.\n",
                             "file.pl", pool);
  REQUIRE(items.size() == 3);
  CHECK(items[0].kind == item_kind::directive);
  CHECK(is_functor(items[0].t, "module", 2));
  CHECK(items[0].loc.line == 1);
  CHECK(items[0].loc.col == 1);
  CHECK(items[1].kind == item_kind::clause);
  CHECK(items[1].loc.line == 3);
  CHECK(items[1].loc.col == 1);
  CHECK(items[2].kind == item_kind::clause);
  CHECK(items[2].loc.line == 5);

  CHECK_THROWS_AS(parse_program("a.b.", "<t>", pool), syntax_error);
  CHECK_THROWS_AS(parse_program("p :- q", "<t>", pool), syntax_error);
}

TEST_CASE("classify_directive covers every form") {
  var_pool pool;
  auto cls = [&](const std::string& s) { return classify_directive(parse1(s, pool)); };
  CHECK(cls("module(m, [])") == directive_form::module_decl);
  CHECK(cls("module(m)") == directive_form::module_decl);
  CHECK(cls("export(f/1)") == directive_form::export_decl);
  CHECK(cls("use_module(lib)") == directive_form::use_module);
  CHECK(cls("use_module(lib, [f/1])") == directive_form::use_module);
  CHECK(cls("meta_predicate(p(0))") == directive_form::meta_predicate);
  CHECK(cls("metapredicate(p(0))") == directive_form::metapredicate_iso);
  CHECK(cls("module_transparent(p/1)") == directive_form::module_transparent);
  CHECK(cls("tool(p/2, p/3)") == directive_form::tool);
  CHECK(cls("op(200, xfy, foo)") == directive_form::unknown);
  CHECK(classify_directive(mk_atom("foo")) == directive_form::unknown);
}

TEST_CASE("writer: canonical forms") {
  CHECK(testsup::normalize_vars(rt("[a, b | T]")) == "[a,b|_]");
  CHECK(rt("[a, b, c]") == "[a,b,c]");
  CHECK(rt("[]") == "[]");
  CHECK(rt("f(-3)") == "f(-3)");
  CHECK(rt("\\+ a") == "\\+a");
  CHECK(rt("\\+ \\+ a") == "\\+ \\+a");
  CHECK(rt("'hello world'") == "'hello world'");
  CHECK(rt("+(1, 2)") == "+(1,2)");
  CHECK(rt("m:f/1") == "m:f/1");
  CHECK(rt("a = b") == "a=b");
  CHECK(rt("f('A', [])") == "f('A',[])");
  CHECK(atom_needs_quotes("hello world"));
  CHECK_FALSE(atom_needs_quotes("foo"));
  CHECK_FALSE(atom_needs_quotes("=.."));
  CHECK_FALSE(atom_needs_quotes("[]"));
  CHECK_FALSE(atom_needs_quotes("!"));
}

TEST_CASE("writer: rendering round-trips over the fixture corpus") {
  var_pool pool;
  const char* fixtures[] = {
      "library.pl",      "client_v1.pl", "client_v2.pl",      "late.pl",
      "reflect_strip.pl", "reflect_qpattern.pl", "reflect_tool.pl",
      "reflect_transparent.pl", "gmod.pl", "kmod.pl", "dist.pl", "probe.pl",
      "applier.pl",      "worker.pl",    "client_nested.pl",  "p11.pl",
      "lint/sr1_nonvar.pl", "lint/sr1_alias.pl", "lint/sr2_local.pl",
      "lint/sr2_missing.pl", "lint/sr2_var.pl", "lint/sr3_bare.pl",
      "lint/sr3_wrong_arity.pl", "lint/sr3_normal_pos.pl",
      "lint/sr3_forward.pl", "lint/d1_transparent.pl", "lint/d3_extended.pl",
      "lint/d4_unimplemented.pl", "lint/p1_ceiling.pl", "lint/p2_univ.pl",
  };
  int items_seen = 0;
  for (const char* f : fixtures) {
    CAPTURE(f);
    auto items = parse_program(testsup::fixture_text(f), f, pool);
    for (const auto& it : items) {
      ++items_seen;
      std::string once = write_canonical_term(it.t, true);
      // Variable ids depend on pool history; reparsing from a fresh pool
      // canonicalizes them, so two reparses must render identically.
      var_pool pa;
      std::string norm1 =
          write_canonical_term(parse_term(once, "<rt>", pa).t, true);
      var_pool pb;
      std::string norm2 =
          write_canonical_term(parse_term(norm1, "<rt>", pb).t, true);
      CHECK(norm1 == norm2);
    }
  }
  CHECK(items_seen > 60);
}
