#pragma once

#include <string>
#include <utility>

#include "lbridge/conversion.hpp"
#include "lbridge/refbridge.hpp"
#include "lbridge/serialization.hpp"

namespace lbridge::demo {

/// Sample foreign type: a person with a name. Two persons are equal when
/// their names match ignoring ASCII case.
class Person {
 public:
  explicit Person(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const Person& a, const Person& b) noexcept;

 private:
  std::string name_;
};

inline constexpr const char* kPersonFunctor = "person";

/// Person <-> person(Name). The name atom is lower-cased on the way out.
Converter person_converter();

/// Length-prefixed codec for Person, named "Person".
Codec person_codec();

/// Installs the Person equality contract on `registry` and the Person codec on `codecs`.
void install_person_support(RefRegistry& registry, CodecRegistry& codecs = *CodecRegistry::global());

}  // namespace lbridge::demo
