#include <doctest.h>

#include "lbridge/lbridge.hpp"

using namespace lbridge;

TEST_SUITE("syntax") {

TEST_CASE("parse terms") {
  Term t = parse_term("student(person(mary))");
  CHECK(term_equal(t, Term::compound("student", {Term::compound("person", {Term::atom("mary")})})));

  CHECK(term_equal(parse_term("[a,b]"), Term::cons(Term::atom("a"), Term::cons(Term::atom("b"), Term::nil()))));
  CHECK(term_equal(parse_term("[a|T]"), Term::cons(Term::atom("a"), Term::var("T"))));
  CHECK(parse_term("[]").is_atom("[]"));

  Term f = parse_term("f(X, X)");
  CHECK(f.is_compound("f", 2));
  CHECK(f.arg(0).as_var() == f.arg(1).as_var());

  CHECK(parse_term("-42").as_integer().value == -42);
  CHECK(parse_term("2.5e3").as_float().value == 2500.0);
  CHECK(parse_term("'hello world'").is_atom("hello world"));
  CHECK(parse_term("'it''s'").is_atom("it's"));
  CHECK(parse_term("'a\\nb'").is_atom("a\nb"));
  CHECK(parse_term("X = f(Y)").is_compound("=", 2));
  CHECK(parse_term("(a, b)").is_compound(",", 2));
  CHECK(parse_term("_").as_var().anonymous());
  CHECK(parse_term("123456789012345678901234567890").as_integer().value ==
        BigInt("123456789012345678901234567890"));
}

TEST_CASE("parse goals allow top-level conjunction and a final period") {
  Term g = parse_goal("p(X), q(X).");
  CHECK(g.is_compound(",", 2));
  CHECK(parse_goal("p ; q").is_compound(";", 2));
  CHECK_THROWS_AS(parse_term("p, q"), SyntaxError);
  CHECK_THROWS_AS(parse_term("p."), SyntaxError);
}

TEST_CASE("parse programs") {
  auto clauses = parse_program("p(a). p(b).");
  REQUIRE(clauses.size() == 2);
  CHECK(print_term(clauses[0].head) == "p(a)");
  CHECK(clauses[1].is_fact());

  auto rules = parse_program("% comment\nq(X) :- p(X).\n");
  REQUIRE(rules.size() == 1);
  CHECK(print_term(rules[0].head) == "q(X)");
  CHECK(print_term(rules[0].body) == "p(X)");

  CHECK(parse_program("").empty());
  CHECK(parse_program("  % only a comment\n").empty());
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_AS(parse_program("p(a)"), SyntaxError);
  try {
    parse_program("p(a).\nq(b) :- .");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.span().line == 2);
    CHECK(e.kind() == "syntax_error");
  }
  CHECK_THROWS_AS(parse_program("X :- p."), SyntaxError);
  CHECK_THROWS_AS(parse_program("3."), SyntaxError);
  CHECK_THROWS_AS(parse_term("'unterminated"), SyntaxError);
  CHECK_THROWS_AS(parse_term("f(a"), SyntaxError);
}

TEST_CASE("foreign refs cannot be written") {
  CHECK_THROWS_AS(parse_term("<jref:1>"), SyntaxError);
  CHECK_THROWS_AS(parse_term("student(<jref:7>)"), SyntaxError);
}

TEST_CASE("printing") {
  CHECK(print_term(Term::compound("person", {Term::atom("mary")})) == "person(mary)");
  CHECK(print_term(Term::foreign_ref(RefHandle{7, Strength::strong})) == "<jref:7>");
  CHECK(print_term(Term::atom("hello world")) == "'hello world'");
  CHECK(print_term(Term::atom("[]")) == "[]");
  CHECK(print_term(Term::atom("Mary")) == "'Mary'");
  CHECK(print_term(Term::atom("it's")) == "'it\\'s'");
  CHECK(print_term(Term::floating(3.0)) == "3.0");
  CHECK(print_term(Term::floating(0.1)) == "0.1");
  CHECK(print_term(Term::list({Term::integer(1), Term::integer(2)}, Term::var("T"))) == "[1,2|T]");
  CHECK(print_term(parse_term("X = (a, b)")) == "X=(a,b)");
  CHECK(print_clause(parse_program("q(X) :- p(X), r.")[0]) == "q(X) :- p(X),r.");
  CHECK(print_clause(Clause{Term::atom("p")}) == "p.");
}

TEST_CASE("printing fresh variables") {
  FreshVars fresh;
  Clause c = rename_apart(parse_program("q(X) :- p(X).")[0], fresh);
  CHECK(print_clause(c) == "q(_G1) :- p(_G1).");
}

}
