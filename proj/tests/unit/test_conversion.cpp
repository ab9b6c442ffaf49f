#include <doctest.h>

#include "lbridge/demo/person.hpp"
#include "lbridge/lbridge.hpp"

using namespace lbridge;
using demo::Person;

namespace {

struct Opaque {
  int x = 0;
};

struct Fixture {
  std::shared_ptr<RefRegistry> registry = RefRegistry::create();
  std::shared_ptr<CodecRegistry> codecs = std::make_shared<CodecRegistry>();
  Fixture() { demo::install_person_support(*registry, *codecs); }
  ConversionContext with_person() const { return build_context({demo::person_converter()}, registry, codecs); }
  ConversionContext plain() const { return ContextBuilder(registry, codecs).build(); }
};

}  // namespace

TEST_SUITE("conversion") {

TEST_CASE("person converter") {
  Fixture f;
  ConversionContext ctx = f.with_person();
  CHECK(print_term(ctx.to_term(Person("Mary"))) == "person(mary)");
  Object back = ctx.from_term(parse_term("person(mary)"));
  REQUIRE(back.is<Person>());
  CHECK(back.as<Person>() == Person("Mary"));
  CHECK_THROWS_AS(ctx.from_term(parse_term("person(X)"), TypeTag::of<Person>()), ConversionError);
}

TEST_CASE("defaults") {
  Fixture f;
  ConversionContext ctx = f.plain();
  CHECK(ctx.converter_count() == 0);
  CHECK_FALSE(ConversionContext::defaults(f.registry, f.codecs).parent());
  CHECK(print_term(ctx.to_term(std::int64_t{42})) == "42");
  CHECK(print_term(ctx.to_term(42)) == "42");
  CHECK(print_term(ctx.to_term(2.5)) == "2.5");
  CHECK(print_term(ctx.to_term(std::string("hello world"))) == "'hello world'");
  CHECK(print_term(ctx.to_term(true)) == "true");
  CHECK(print_term(ctx.to_term(BigInt(1) << 70)) == (BigInt(1) << 70).str());
  ObjectList list{Object::make<std::int64_t>(1), Object::make<std::string>("a")};
  CHECK(print_term(ctx.to_term(list)) == "[1,a]");

  CHECK(ctx.from_term(parse_term("42")).as<std::int64_t>() == 42);
  CHECK(ctx.from_term(parse_term("123456789012345678901234567890")).is<BigInt>());
  CHECK(ctx.from_term(parse_term("2.5")).as<double>() == 2.5);
  CHECK(ctx.from_term(parse_term("hello")).as<std::string>() == "hello");
  CHECK(ctx.from_term(parse_term("true"), TypeTag::of<bool>()).as<bool>());
  CHECK(ctx.from_term(parse_term("[]")).as<ObjectList>().empty());
  CHECK(ctx.from_term(parse_term("[1, 2]")).as<ObjectList>().size() == 2);
  Term t = parse_term("f(X)");
  CHECK(term_equal(ctx.from_term(t, TypeTag::of<Term>()).as<Term>(), t));

  CHECK_THROWS_AS(ctx.to_term(Opaque{}), ConversionError);
  CHECK_THROWS_AS(ctx.from_term(parse_term("person(mary)")), ConversionError);
  CHECK_THROWS_AS(ctx.from_term(parse_term("X")), ConversionError);
}

TEST_CASE("conversion errors explain themselves") {
  Fixture f;
  try {
    f.plain().from_term(parse_term("person(mary)"), TypeTag::of<Person>());
    FAIL("expected a conversion error");
  } catch (const ConversionError& e) {
    REQUIRE(e.term());
    CHECK(print_term(*e.term()) == "person(mary)");
    CHECK(e.target().find("Person") != std::string::npos);
    CHECK_FALSE(e.steps_tried().empty());
  }
}

TEST_CASE("later converters shadow earlier ones") {
  Fixture f;
  auto emitting = [](const char* name) {
    return make_converter<Person>("person", 1, [name](const Person&) { return Term::compound("person", {Term::atom(name)}); },
                                  nullptr);
  };
  ConversionContext ctx = build_context({emitting("first"), emitting("second")}, f.registry, f.codecs);
  CHECK(print_term(ctx.to_term(Person("x"))) == "person(second)");
  CHECK_THROWS(ContextBuilder(f.registry, f.codecs).register_converter(Converter{}));
}

TEST_CASE("child contexts fall back to their parent") {
  Fixture f;
  ConversionContext parent = f.with_person();
  ConversionContext child = ContextBuilder(f.registry, f.codecs).parent(parent).build();
  CHECK(child.parent());
  CHECK(print_term(child.to_term(Person("Ann"))) == "person(ann)");
  CHECK(child.from_term(parse_term("person(ann)")).is<Person>());
}

TEST_CASE("contexts are isolated") {
  Fixture f;
  ConversionContext a = f.with_person();
  ConversionContext b = f.plain();
  Term t = parse_term("person(mary)");
  CHECK(a.from_term(t).is<Person>());
  CHECK_THROWS_AS(b.from_term(t), ConversionError);
  CHECK(a.from_term(t).is<Person>());
}

TEST_CASE("associations come before converters") {
  Fixture f;
  ConversionContext ctx = f.with_person();
  Object mary = Object::make<Person>("Mary");
  Term key = ctx.new_ref_term(mary, ctx.to_term(mary));
  CHECK(ctx.from_term(key).same_object(mary));
  CHECK(f.plain().from_term(key).same_object(mary));
  CHECK(ctx.forget_ref_term(key));
  Object fresh = ctx.from_term(key);
  CHECK(fresh.as<Person>() == mary.as<Person>());
  CHECK_FALSE(fresh.same_object(mary));
}

TEST_CASE("dead associations raise instead of falling through") {
  Fixture f;
  ConversionContext ctx = f.with_person();
  Object mary = Object::make<Person>("Mary");
  Term key = ctx.new_weak_ref_term(mary, ctx.to_term(mary));
  mary.reset();
  f.registry->run_collection_pass();
  CHECK_THROWS_AS(f.plain().from_term(key), DeadReferenceError);
  CHECK_THROWS_AS(ctx.from_term(key), ConversionError);
}

TEST_CASE("serialized terms decode under the default context") {
  Fixture f;
  Object mary = Object::make<Person>("Mary");
  Term ser = serialize_term(mary, *f.codecs);
  CHECK(ser.is_compound("serialized", 1));
  CHECK(is_base64(ser.arg(0).as_atom().name));
  Object back = f.plain().from_term(ser);
  CHECK(back.as<Person>() == mary.as<Person>());
  CHECK_FALSE(back.same_object(mary));

  Object empty = f.plain().from_term(serialize_term(Object::make<Person>(""), *f.codecs));
  CHECK(empty.as<Person>().name().empty());
  CHECK_THROWS_AS(serialize_term(Object::make<Opaque>(), *f.codecs), NoCodecError);
  CHECK_THROWS_AS(f.plain().from_term(parse_term("serialized('not base64!')")), ConversionError);
}

TEST_CASE("foreign refs convert to their referent") {
  Fixture f;
  Object mary = Object::make<Person>("Mary");
  Term ref = f.registry->make_jref(mary);
  CHECK(f.plain().from_term(ref).same_object(mary));
  CHECK(f.plain().from_term_as<Person>(ref).get() == &mary.as<Person>());
}

}
