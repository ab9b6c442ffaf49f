#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "lbridge/errors.hpp"
#include "lbridge/object.hpp"
#include "lbridge/refbridge.hpp"
#include "lbridge/serialization.hpp"
#include "lbridge/term.hpp"

namespace lbridge {

class ConversionContext;

/// Functor/arity a converter accepts on the term side. Arity 0 matches atoms.
struct ShapePattern {
  std::string functor;
  std::size_t arity = 0;

  bool matches(const Term& t) const;
};

/// Two-way translation between one foreign type and one term shape.
/// At least one direction must be present.
struct Converter {
  TypeTag type = TypeTag::of<void>();
  ShapePattern shape;
  std::function<Term(const Object&, const ConversionContext&)> to_term;
  std::function<Object(const Term&, const ConversionContext&)> from_term;
};

namespace detail {

template <class Fn, class Arg>
decltype(auto) call_with_context(Fn& fn, const Arg& arg, const ConversionContext& ctx) {
  if constexpr (std::is_invocable_v<Fn&, const Arg&, const ConversionContext&>)
    return fn(arg, ctx);
  else
    return fn(arg);
}

}  // namespace detail

/// Converter for `T` and terms shaped `functor/arity`. `to` maps `const T&`
/// to a Term and `from` maps a Term to a `T`; either may also take the
/// ConversionContext as a second argument. Pass nullptr to omit a direction.
template <class T, class ToFn, class FromFn>
Converter make_converter(std::string functor, std::size_t arity, ToFn to, FromFn from) {
  Converter c;
  c.type = TypeTag::of<T>();
  c.shape = ShapePattern{std::move(functor), arity};
  if constexpr (!std::is_null_pointer_v<ToFn>) {
    c.to_term = [to = std::move(to)](const Object& obj, const ConversionContext& ctx) mutable -> Term {
      return detail::call_with_context(to, obj.as<T>(), ctx);
    };
  }
  if constexpr (!std::is_null_pointer_v<FromFn>) {
    c.from_term = [from = std::move(from)](const Term& t, const ConversionContext& ctx) mutable -> Object {
      return Object::make<T>(detail::call_with_context(from, t, ctx));
    };
  }
  return c;
}

/// Immutable, shareable bundle of converters with a view onto a reference
/// registry and a codec registry. Built with ContextBuilder.
///
/// Term-to-object resolution tries, in order:
///   1. a live association whose key is the term (the original object);
///   2. the referent of a live ForeignRef term;
///   3. decoding a `serialized/1` term through the codec registry;
///   4. converters matching the term shape and target, newest first,
///      then the parent chain;
///   5. built-in defaults (numbers, atoms, booleans, lists).
/// A matching association that has been invalidated raises DeadReferenceError.
class ConversionContext {
 public:
  /// Context with only the built-in conversions.
  static ConversionContext defaults(std::shared_ptr<RefRegistry> registry = RefRegistry::global(),
                                    std::shared_ptr<CodecRegistry> codecs = CodecRegistry::global());

  Term to_term(const Object& obj) const;

  template <class T>
    requires(!std::same_as<std::remove_cvref_t<T>, Object>)
  Term to_term(T&& value) const {
    return to_term(Object::make<std::remove_cvref_t<T>>(std::forward<T>(value)));
  }

  /// `target` restricts converter dispatch and the result type. Requesting
  /// Term returns `t` itself.
  Object from_term(const Term& t, std::optional<TypeTag> target = std::nullopt) const;

  template <class T>
  std::shared_ptr<T> from_term_as(const Term& t) const {
    return from_term(t, TypeTag::of<T>()).template shared<T>();
  }

  RefRegistry& registry() const { return *impl_->registry; }
  const std::shared_ptr<RefRegistry>& registry_ptr() const { return impl_->registry; }
  const CodecRegistry& codecs() const { return *impl_->codecs; }

  /// Nothing for the default context.
  std::optional<ConversionContext> parent() const;
  std::size_t converter_count() const { return impl_->converters.size(); }

  // Association helpers operating on this context's registry.
  Term new_ref_term(const Object& obj, const Term& key) const { return registry().new_ref_term(obj, key); }
  Term new_ref_term(const Object& obj) const { return registry().new_ref_term_generated(obj); }
  Term new_weak_ref_term(const Object& obj, const Term& key, CleaningTask task = {}) const {
    return registry().new_weak_ref_term(obj, key, std::move(task));
  }
  Term new_soft_ref_term(const Object& obj, const Term& key, CleaningTask task = {}) const {
    return registry().new_soft_ref_term(obj, key, std::move(task));
  }
  bool forget_ref_term(const Term& key) const { return registry().forget_ref_term(key); }

 private:
  friend class ContextBuilder;

  struct Impl {
    std::vector<Converter> converters;  // registration order
    std::shared_ptr<const Impl> parent;
    std::shared_ptr<RefRegistry> registry;
    std::shared_ptr<CodecRegistry> codecs;
  };

  explicit ConversionContext(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::optional<Object> builtin_from_term(const Term& t, const std::optional<TypeTag>& target) const;
  std::optional<Term> builtin_to_term(const Object& obj) const;

  std::shared_ptr<const Impl> impl_;
};

/// Accumulates converters; `build()` chains the result to the parent
/// context (the default context unless set).
class ContextBuilder {
 public:
  explicit ContextBuilder(std::shared_ptr<RefRegistry> registry = RefRegistry::global(),
                          std::shared_ptr<CodecRegistry> codecs = CodecRegistry::global());

  static ContextBuilder create() { return ContextBuilder(); }

  /// Later registrations shadow earlier ones with overlapping applicability.
  ContextBuilder& register_converter(Converter converter);
  ContextBuilder& parent(const ConversionContext& parent);

  ConversionContext build() const;

 private:
  std::vector<Converter> converters_;
  std::optional<ConversionContext> parent_;
  std::shared_ptr<RefRegistry> registry_;
  std::shared_ptr<CodecRegistry> codecs_;
};

ConversionContext build_context(std::vector<Converter> converters,
                                std::shared_ptr<RefRegistry> registry = RefRegistry::global(),
                                std::shared_ptr<CodecRegistry> codecs = CodecRegistry::global());

}  // namespace lbridge
