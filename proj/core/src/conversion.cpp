#include "lbridge/conversion.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>

#include "lbridge/syntax.hpp"

namespace lbridge {

namespace {

std::string target_name(const std::optional<TypeTag>& target) { return target ? target->name() : std::string(); }

Object check_target(Object obj, const Term& t, const std::optional<TypeTag>& target, const char* step) {
  if (target && !(obj.type() == *target))
    throw ConversionError(std::string(step) + " resolved to a " + obj.type().name(), t, target->name());
  return obj;
}

template <class Int>
std::optional<Object> narrow_integer(const BigInt& v) {
  if (v < std::numeric_limits<Int>::min() || v > std::numeric_limits<Int>::max()) return std::nullopt;
  return Object::make<Int>(static_cast<Int>(v));
}

}  // namespace

bool ShapePattern::matches(const Term& t) const {
  if (arity == 0) return t.is_atom(functor);
  return t.is_compound(functor, arity);
}

ConversionContext ConversionContext::defaults(std::shared_ptr<RefRegistry> registry,
                                              std::shared_ptr<CodecRegistry> codecs) {
  auto impl = std::make_shared<Impl>();
  impl->registry = std::move(registry);
  impl->codecs = std::move(codecs);
  return ConversionContext(std::move(impl));
}

std::optional<ConversionContext> ConversionContext::parent() const {
  if (!impl_->parent) return std::nullopt;
  return ConversionContext(impl_->parent);
}

Term ConversionContext::to_term(const Object& obj) const {
  if (!obj) throw ConversionError("cannot convert an empty object");
  for (const Impl* ctx = impl_.get(); ctx; ctx = ctx->parent.get())
    for (auto it = ctx->converters.rbegin(); it != ctx->converters.rend(); ++it)
      if (it->to_term && it->type == obj.type()) return it->to_term(obj, *this);
  if (auto t = builtin_to_term(obj)) return *t;
  throw ConversionError("no converter for objects of type " + obj.type().name(), std::nullopt, obj.type().name(),
                        {"converters", "defaults"});
}

std::optional<Term> ConversionContext::builtin_to_term(const Object& obj) const {
  if (auto* v = obj.get_if<Term>()) return *v;
  if (auto* v = obj.get_if<BigInt>()) return Term::integer(*v);
  if (auto* v = obj.get_if<std::int64_t>()) return Term::integer(*v);
  if (auto* v = obj.get_if<int>()) return Term::integer(*v);
  if (auto* v = obj.get_if<double>()) return Term::floating(*v);
  if (auto* v = obj.get_if<std::string>()) return Term::atom(*v);
  if (auto* v = obj.get_if<bool>()) return Term::atom(*v ? "true" : "false");
  if (auto* v = obj.get_if<ObjectList>()) {
    std::vector<Term> items;
    items.reserve(v->size());
    for (const auto& item : *v) items.push_back(to_term(item));
    return Term::list(std::move(items));
  }
  return std::nullopt;
}

Object ConversionContext::from_term(const Term& t, std::optional<TypeTag> target) const {
  if (target && *target == TypeTag::of<Term>()) return Object::make<Term>(t);

  std::vector<std::string> tried;
  const RefRegistry& reg = *impl_->registry;

  if (auto key = reg.find_key(t)) {
    if (!key->live) throw DeadReferenceError(key->id, t);
    return check_target(key->referent, t, target, "registry association");
  }
  tried.emplace_back("registry-key");

  if (t.is_foreign_ref()) {
    std::optional<Object> obj;
    try {
      obj = reg.referent_of(t);
    } catch (const NotAReferenceError&) {
      // Forgotten or foreign to this registry: nothing later can convert it.
    }
    if (obj) return check_target(*obj, t, target, "foreign reference");
  }
  tried.emplace_back("foreign-ref");

  if (is_serialized_term(t)) return check_target(deserialize_term(t, *impl_->codecs), t, target, "serialized term");
  tried.emplace_back("serialized");

  for (const Impl* ctx = impl_.get(); ctx; ctx = ctx->parent.get())
    for (auto it = ctx->converters.rbegin(); it != ctx->converters.rend(); ++it)
      if (it->from_term && it->shape.matches(t) && (!target || it->type == *target)) return it->from_term(t, *this);
  tried.emplace_back("converters");

  if (auto obj = builtin_from_term(t, target)) return *obj;
  tried.emplace_back("defaults");

  throw ConversionError("no conversion applies", t, target_name(target), std::move(tried));
}

std::optional<Object> ConversionContext::builtin_from_term(const Term& t, const std::optional<TypeTag>& target) const {
  auto wants = [&](TypeTag tag) { return !target || *target == tag; };
  switch (t.kind()) {
    case Term::Kind::integer: {
      const BigInt& v = t.as_integer().value;
      if (!target) {
        if (auto small = narrow_integer<std::int64_t>(v)) return small;
        return Object::make<BigInt>(v);
      }
      if (*target == TypeTag::of<BigInt>()) return Object::make<BigInt>(v);
      if (*target == TypeTag::of<std::int64_t>()) return narrow_integer<std::int64_t>(v);
      if (*target == TypeTag::of<int>()) return narrow_integer<int>(v);
      return std::nullopt;
    }
    case Term::Kind::floating:
      if (wants(TypeTag::of<double>())) return Object::make<double>(t.as_float().value);
      return std::nullopt;
    case Term::Kind::atom: {
      const std::string& name = t.as_atom().name;
      if (target && *target == TypeTag::of<bool>()) {
        if (name == "true") return Object::make<bool>(true);
        if (name == "false") return Object::make<bool>(false);
        return std::nullopt;
      }
      if (name == "[]" && wants(TypeTag::of<ObjectList>())) return Object::make<ObjectList>();
      if (wants(TypeTag::of<std::string>())) return Object::make<std::string>(name);
      return std::nullopt;
    }
    case Term::Kind::compound: {
      if (!t.is_compound(".", 2) || !wants(TypeTag::of<ObjectList>())) return std::nullopt;
      ObjectList items;
      Term tail = for_each_list_element(t, [&](const Term& item) { items.push_back(from_term(item)); });
      if (!tail.is_atom("[]")) return std::nullopt;  // partial list
      return Object::make<ObjectList>(std::move(items));
    }
    default: return std::nullopt;
  }
}

ContextBuilder::ContextBuilder(std::shared_ptr<RefRegistry> registry, std::shared_ptr<CodecRegistry> codecs)
    : registry_(std::move(registry)), codecs_(std::move(codecs)) {}

ContextBuilder& ContextBuilder::register_converter(Converter converter) {
  if (!converter.to_term && !converter.from_term)
    throw std::invalid_argument("converter for " + converter.type.name() + " has no direction");
  converters_.push_back(std::move(converter));
  return *this;
}

ContextBuilder& ContextBuilder::parent(const ConversionContext& parent) {
  parent_ = parent;
  return *this;
}

ConversionContext ContextBuilder::build() const {
  auto impl = std::make_shared<ConversionContext::Impl>();
  impl->converters = converters_;
  impl->registry = registry_;
  impl->codecs = codecs_;
  impl->parent = parent_ ? parent_->impl_ : ConversionContext::defaults(registry_, codecs_).impl_;
  return ConversionContext(std::move(impl));
}

ConversionContext build_context(std::vector<Converter> converters, std::shared_ptr<RefRegistry> registry,
                                std::shared_ptr<CodecRegistry> codecs) {
  ContextBuilder builder(std::move(registry), std::move(codecs));
  for (auto& c : converters) builder.register_converter(std::move(c));
  return builder.build();
}

}  // namespace lbridge
