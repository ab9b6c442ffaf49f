#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "lbridge/demo/person.hpp"
#include "lbridge/lbridge.hpp"

using namespace lbridge;

TEST_SUITE("term") {

TEST_CASE("functor and arity") {
  CHECK(functor_arity(Term::atom("student")) == FunctorArity{"student", 0});
  CHECK(functor_arity(Term::compound("person", {Term::atom("mary")})) == FunctorArity{"person", 1});
  CHECK_FALSE(functor_arity(Term::var("Person")));
  CHECK_FALSE(functor_arity(Term::integer(3)));
}

TEST_CASE("an empty argument list is an atom") {
  Term t = Term::compound("foo", {});
  CHECK(t.is_atom("foo"));
}

TEST_CASE("structural equality") {
  Term a = Term::compound("person", {Term::atom("mary")});
  CHECK(term_equal(a, Term::compound("person", {Term::atom("mary")})));
  CHECK_FALSE(term_equal(Term::integer(3), Term::floating(3.0)));
  CHECK_FALSE(term_equal(Term::atom("a"), Term::var("a")));
  CHECK(term_equal(Term::floating(std::nan("")), Term::floating(std::nan(""))));
  CHECK(hash_value(Term::floating(std::nan(""))) == hash_value(Term::floating(-std::nan(""))));
}

TEST_CASE("foreign refs compare by id only") {
  auto registry = RefRegistry::create();
  registry->register_equality<demo::Person>();
  Term r1 = registry->make_jref(Object::make<demo::Person>("Mary"));
  Term r2 = registry->make_jref(Object::make<demo::Person>("Mary"));
  CHECK_FALSE(term_equal(r1, r2));
  CHECK(term_equal(r1, Term::foreign_ref(r1.as_foreign_ref().handle)));
}

TEST_CASE("variables in first-occurrence order") {
  auto names = [](const Term& t) {
    std::vector<std::string> out;
    for (const Var& v : variables_of(t)) out.push_back(v.name);
    return out;
  };
  CHECK(names(Term::compound("student", {Term::var("Person")})) == std::vector<std::string>{"Person"});
  Term x = Term::var("X");
  CHECK(names(Term::compound("f", {x, Term::compound("g", {Term::var("Y"), x})})) ==
        std::vector<std::string>{"X", "Y"});
  CHECK(names(Term::atom("a")).empty());
}

TEST_CASE("lists are cons cells ending in []") {
  Term l = Term::list({Term::atom("a"), Term::atom("b")});
  CHECK(l.is_compound(".", 2));
  CHECK(l.arg(1).arg(1).is_atom("[]"));
  std::vector<std::string> seen;
  Term tail = for_each_list_element(l, [&](const Term& e) { seen.push_back(e.as_atom().name); });
  CHECK(seen == std::vector<std::string>{"a", "b"});
  CHECK(tail.is_atom("[]"));
}

TEST_CASE("integers are unbounded") {
  BigInt big = BigInt(1) << 200;
  Term t = Term::integer(big);
  CHECK(t.as_integer().value == big);
  CHECK(print_term(Term::integer(big + 1)) == BigInt(big + 1).str());
}

TEST_CASE("equality is an equivalence and ground iff no variables") {
  testing::TermGen gen(11);
  for (int i = 0; i < 300; ++i) {
    Term a = gen.term(3), b = gen.term(3), c = gen.term(3);
    CHECK(term_equal(a, a));
    CHECK(term_equal(a, b) == term_equal(b, a));
    if (term_equal(a, b) && term_equal(b, c)) CHECK(term_equal(a, c));
    if (term_equal(a, b)) CHECK(hash_value(a) == hash_value(b));
    CHECK(is_ground(a) == variables_of(a).empty());
  }
}

}
