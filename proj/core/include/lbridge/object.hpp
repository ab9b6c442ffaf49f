#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <typeindex>
#include <typeinfo>
#include <utility>
#include <vector>

namespace lbridge {

/// Nominal type tag of a foreign object. One tag per C++ type; no subtype dispatch.
class TypeTag {
 public:
  template <class T>
  static TypeTag of() {
    return TypeTag(typeid(T));
  }

  std::string name() const;
  std::size_t hash() const noexcept { return index_.hash_code(); }

  friend bool operator==(const TypeTag& a, const TypeTag& b) noexcept { return a.index_ == b.index_; }

 private:
  explicit TypeTag(const std::type_info& info) : index_(info) {}

  std::type_index index_;
};

struct TypeTagHash {
  std::size_t operator()(const TypeTag& t) const noexcept { return t.hash(); }
};

/// Owning, type-erased handle to a host object. Copies share ownership;
/// identity is the address of the shared object.
class Object {
 public:
  Object() = default;

  template <class T, class... Args>
  static Object make(Args&&... args) {
    return Object(std::make_shared<T>(std::forward<Args>(args)...), TypeTag::of<T>());
  }

  template <class T>
  static Object adopt(std::shared_ptr<T> ptr) {
    return Object(std::move(ptr), TypeTag::of<T>());
  }

  explicit operator bool() const noexcept { return ptr_ != nullptr; }

  TypeTag type() const noexcept { return type_; }

  template <class T>
  bool is() const noexcept {
    return ptr_ && type_ == TypeTag::of<T>();
  }

  template <class T>
  T* get_if() const noexcept {
    return is<T>() ? static_cast<T*>(ptr_.get()) : nullptr;
  }

  /// Throws std::bad_cast on type mismatch.
  template <class T>
  T& as() const {
    if (!is<T>()) throw std::bad_cast();
    return *static_cast<T*>(ptr_.get());
  }

  template <class T>
  std::shared_ptr<T> shared() const {
    return is<T>() ? std::static_pointer_cast<T>(ptr_) : nullptr;
  }

  const void* identity() const noexcept { return ptr_.get(); }
  bool same_object(const Object& other) const noexcept { return ptr_ && ptr_ == other.ptr_; }

  /// Number of Object handles (and other shared owners) keeping the referent alive.
  long owner_count() const noexcept { return ptr_.use_count(); }

  void reset() noexcept { ptr_.reset(); }

 private:
  Object(std::shared_ptr<void> ptr, TypeTag type) : ptr_(std::move(ptr)), type_(type) {}

  std::shared_ptr<void> ptr_;
  TypeTag type_ = TypeTag::of<void>();
};

/// Host-side sequence; the default conversions map it to and from lists.
using ObjectList = std::vector<Object>;

}  // namespace lbridge
