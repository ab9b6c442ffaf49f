#include "lbridge/serialization.hpp"

#include <array>

#include "lbridge/errors.hpp"

namespace lbridge {

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<int, 256> make_decode_table() {
  std::array<int, 256> table{};
  for (auto& v : table) v = -1;
  for (int i = 0; i < 64; ++i) table[static_cast<unsigned char>(kAlphabet[i])] = i;
  return table;
}

constexpr auto kDecode = make_decode_table();

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(n >> 18) & 63];
    out += kAlphabet[(n >> 12) & 63];
    out += kAlphabet[(n >> 6) & 63];
    out += kAlphabet[n & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    std::uint32_t n = bytes[i] << 16;
    out += kAlphabet[(n >> 18) & 63];
    out += kAlphabet[(n >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(n >> 18) & 63];
    out += kAlphabet[(n >> 12) & 63];
    out += kAlphabet[(n >> 6) & 63];
    out += '=';
  }
  return out;
}

std::optional<Bytes> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) return std::nullopt;
  Bytes out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    int v[4];
    std::size_t pad = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      char c = text[i + j];
      if (c == '=' && last && j >= 2) {
        v[j] = 0;
        ++pad;
        continue;
      }
      if (pad) return std::nullopt;  // data after padding
      v[j] = kDecode[static_cast<unsigned char>(c)];
      if (v[j] < 0) return std::nullopt;
    }
    std::uint32_t n = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    // Non-canonical encodings leave bits set in the padded positions.
    if ((pad == 1 && (n & 0xff)) || (pad == 2 && (n & 0xffff))) return std::nullopt;
    out.push_back(static_cast<std::uint8_t>(n >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(n >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(n));
  }
  return out;
}

bool is_base64(std::string_view text) { return base64_decode(text).has_value(); }

FieldWriter& FieldWriter::write(std::string_view field) {
  return write(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(field.data()), field.size()));
}

FieldWriter& FieldWriter::write(std::span<const std::uint8_t> field) {
  const auto n = static_cast<std::uint32_t>(field.size());
  out_.push_back(static_cast<std::uint8_t>(n >> 24));
  out_.push_back(static_cast<std::uint8_t>(n >> 16));
  out_.push_back(static_cast<std::uint8_t>(n >> 8));
  out_.push_back(static_cast<std::uint8_t>(n));
  out_.insert(out_.end(), field.begin(), field.end());
  return *this;
}

std::optional<std::string> FieldReader::read() {
  if (bytes_.size() - pos_ < 4) return std::nullopt;
  std::uint32_t n = (std::uint32_t{bytes_[pos_]} << 24) | (std::uint32_t{bytes_[pos_ + 1]} << 16) |
                    (std::uint32_t{bytes_[pos_ + 2]} << 8) | std::uint32_t{bytes_[pos_ + 3]};
  pos_ += 4;
  if (bytes_.size() - pos_ < n) return std::nullopt;
  std::string out(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
  pos_ += n;
  return out;
}

std::shared_ptr<CodecRegistry> CodecRegistry::global() {
  static const std::shared_ptr<CodecRegistry> instance = std::make_shared<CodecRegistry>();
  return instance;
}

void CodecRegistry::add(Codec codec) {
  std::erase_if(codecs_, [&](const Codec& c) { return c.type == codec.type || c.name == codec.name; });
  codecs_.push_back(std::move(codec));
}

const Codec* CodecRegistry::find(TypeTag type) const {
  for (const auto& c : codecs_)
    if (c.type == type) return &c;
  return nullptr;
}

const Codec* CodecRegistry::find(std::string_view name) const {
  for (const auto& c : codecs_)
    if (c.name == name) return &c;
  return nullptr;
}

Bytes CodecRegistry::encode(const Object& obj) const {
  if (!obj) throw NoCodecError("cannot serialise an empty object");
  const Codec* codec = find(obj.type());
  if (!codec) throw NoCodecError("no codec registered for type " + obj.type().name());
  Bytes payload = codec->encode(obj);
  return FieldWriter().write(codec->name).write(payload).take();
}

Object CodecRegistry::decode(std::span<const std::uint8_t> bytes) const {
  FieldReader reader(bytes);
  auto name = reader.read();
  auto payload = reader.read();
  if (!name || !payload || !reader.done()) throw ConversionError("malformed serialised bytes");
  const Codec* codec = find(*name);
  if (!codec) throw ConversionError("no codec named '" + *name + "'");
  Object obj = codec->decode(
      std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(payload->data()), payload->size()));
  if (!obj) throw ConversionError("codec '" + *name + "' rejected its payload");
  return obj;
}

Term serialize_term(const Object& obj, const CodecRegistry& codecs) {
  Bytes bytes = codecs.encode(obj);
  return Term::compound(std::string(kSerializedFunctor), {Term::atom(base64_encode(bytes))});
}

bool is_serialized_term(const Term& t) {
  return t.is_compound(kSerializedFunctor, 1) && t.arg(0).is_atom();
}

Object deserialize_term(const Term& t, const CodecRegistry& codecs) {
  if (!is_serialized_term(t)) throw ConversionError("not a serialized/1 term", t);
  auto bytes = base64_decode(t.arg(0).as_atom().name);
  if (!bytes) throw ConversionError("serialized payload is not valid base-64", t);
  return codecs.decode(*bytes);
}

}  // namespace lbridge
