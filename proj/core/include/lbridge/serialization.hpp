#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lbridge/object.hpp"
#include "lbridge/term.hpp"

namespace lbridge {

using Bytes = std::vector<std::uint8_t>;

/// Standard base-64 alphabet with `=` padding.
std::string base64_encode(std::span<const std::uint8_t> bytes);

/// Nothing if `text` is not canonical padded base-64.
std::optional<Bytes> base64_decode(std::string_view text);

bool is_base64(std::string_view text);

/// Length-prefixed fields: a 4-byte big-endian length followed by the bytes.
class FieldWriter {
 public:
  FieldWriter& write(std::string_view field);
  FieldWriter& write(std::span<const std::uint8_t> field);
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class FieldReader {
 public:
  explicit FieldReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  /// Nothing on truncated input.
  std::optional<std::string> read();
  bool done() const noexcept { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

/// Byte encoding for one foreign type.
struct Codec {
  std::string name;
  TypeTag type = TypeTag::of<void>();
  std::function<Bytes(const Object&)> encode;
  /// Returns an empty Object on malformed input.
  std::function<Object(std::span<const std::uint8_t>)> decode;
};

/// Codecs keyed by type and by name. Encoded bytes carry the codec name so
/// they can be decoded without knowing the type in advance.
class CodecRegistry {
 public:
  static std::shared_ptr<CodecRegistry> global();

  /// Replaces any codec with the same type or name.
  void add(Codec codec);

  const Codec* find(TypeTag type) const;
  const Codec* find(std::string_view name) const;

  /// Throws NoCodecError when the object's type has no codec.
  Bytes encode(const Object& obj) const;
  /// Throws ConversionError on unknown codec names or malformed bytes.
  Object decode(std::span<const std::uint8_t> bytes) const;

 private:
  std::vector<Codec> codecs_;
};

inline constexpr std::string_view kSerializedFunctor = "serialized";

/// `serialized(Payload)` where Payload is an atom of base-64 codec bytes.
Term serialize_term(const Object& obj, const CodecRegistry& codecs = *CodecRegistry::global());

bool is_serialized_term(const Term& t);

Object deserialize_term(const Term& t, const CodecRegistry& codecs = *CodecRegistry::global());

}  // namespace lbridge
