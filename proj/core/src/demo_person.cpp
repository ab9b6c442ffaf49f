#include "lbridge/demo/person.hpp"

#include <algorithm>

namespace lbridge::demo {

namespace {

char fold(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), fold);
  return s;
}

}  // namespace

bool operator==(const Person& a, const Person& b) noexcept {
  return std::equal(a.name_.begin(), a.name_.end(), b.name_.begin(), b.name_.end(),
                    [](char x, char y) { return fold(x) == fold(y); });
}

Converter person_converter() {
  return make_converter<Person>(
      kPersonFunctor, 1, [](const Person& p) { return Term::compound(kPersonFunctor, {Term::atom(lower(p.name()))}); },
      [](const Term& t) {
        if (!t.arg(0).is_atom()) throw ConversionError("person/1 expects an atom argument", t, "Person");
        return Person(t.arg(0).as_atom().name);
      });
}

Codec person_codec() {
  Codec codec;
  codec.name = "Person";
  codec.type = TypeTag::of<Person>();
  codec.encode = [](const Object& obj) { return FieldWriter().write(obj.as<Person>().name()).take(); };
  codec.decode = [](std::span<const std::uint8_t> bytes) {
    FieldReader reader(bytes);
    auto name = reader.read();
    if (!name || !reader.done()) return Object();
    return Object::make<Person>(std::move(*name));
  };
  return codec;
}

void install_person_support(RefRegistry& registry, CodecRegistry& codecs) {
  registry.register_equality<Person>();
  codecs.add(person_codec());
}

}  // namespace lbridge::demo
