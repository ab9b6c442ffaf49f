#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lbridge {

using BigInt = boost::multiprecision::cpp_int;

using RefId = std::uint64_t;

/// Life-span policy of a registry entry.
enum class Strength { strong, weak, soft };

const char* to_string(Strength s) noexcept;

/// Identity token of a foreign object registered in a RefRegistry.
struct RefHandle {
  RefId id = 0;
  Strength strength = Strength::strong;

  friend bool operator==(const RefHandle& a, const RefHandle& b) noexcept { return a.id == b.id; }
};

class Term;

struct Atom {
  std::string name;
};

struct IntTerm {
  BigInt value;
};

struct FloatTerm {
  double value = 0.0;
};

/// A logic variable. `serial` is 0 for variables written by the user and
/// a positive counter value for variables minted by renaming.
struct Var {
  std::string name;
  std::uint64_t serial = 0;

  bool anonymous() const noexcept { return serial == 0 && name == "_"; }

  friend bool operator==(const Var& a, const Var& b) noexcept {
    return a.serial == b.serial && a.name == b.name;
  }
};

struct VarHash {
  std::size_t operator()(const Var& v) const noexcept;
};

struct Compound {
  std::string functor;
  std::shared_ptr<const std::vector<Term>> args;
  bool ground = false;  // no variables below; set by Term::compound

  std::size_t arity() const noexcept { return args ? args->size() : 0; }
  const Term& arg(std::size_t i) const { return (*args)[i]; }
};

struct ForeignRef {
  RefHandle handle;
};

/// Immutable logic datum. Copies share compound argument storage.
class Term {
 public:
  enum class Kind { atom, integer, floating, var, compound, foreign_ref };

  Term() : value_(Atom{"[]"}) {}

  static Term atom(std::string name);
  static Term integer(BigInt value);
  static Term floating(double value);
  static Term var(std::string name);
  static Term var(Var v);
  static Term anonymous();
  /// An empty argument list yields the atom `functor`.
  static Term compound(std::string functor, std::vector<Term> args);
  static Term foreign_ref(RefHandle handle);

  static Term nil() { return atom("[]"); }
  static Term cons(Term head, Term tail);
  static Term list(std::vector<Term> items, std::optional<Term> tail = std::nullopt);

  Kind kind() const noexcept { return static_cast<Kind>(value_.index()); }

  bool is_atom() const noexcept { return kind() == Kind::atom; }
  bool is_integer() const noexcept { return kind() == Kind::integer; }
  bool is_float() const noexcept { return kind() == Kind::floating; }
  bool is_var() const noexcept { return kind() == Kind::var; }
  bool is_compound() const noexcept { return kind() == Kind::compound; }
  bool is_foreign_ref() const noexcept { return kind() == Kind::foreign_ref; }
  bool is_callable() const noexcept { return is_atom() || is_compound(); }
  bool is_atom(std::string_view name) const noexcept;
  bool is_compound(std::string_view functor, std::size_t arity) const noexcept;

  const Atom& as_atom() const { return std::get<Atom>(value_); }
  const IntTerm& as_integer() const { return std::get<IntTerm>(value_); }
  const FloatTerm& as_float() const { return std::get<FloatTerm>(value_); }
  const Var& as_var() const { return std::get<Var>(value_); }
  const Compound& as_compound() const { return std::get<Compound>(value_); }
  const ForeignRef& as_foreign_ref() const { return std::get<ForeignRef>(value_); }

  /// Compound argument by zero-based index.
  const Term& arg(std::size_t i) const { return as_compound().arg(i); }

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const {
    return std::visit(std::forward<Visitor>(v), value_);
  }

 private:
  using Value = std::variant<Atom, IntTerm, FloatTerm, Var, Compound, ForeignRef>;
  explicit Term(Value v) : value_(std::move(v)) {}

  Value value_;
};

/// Structural equality. ForeignRef terms compare handle ids only.
bool term_equal(const Term& a, const Term& b);

inline bool operator==(const Term& a, const Term& b) { return term_equal(a, b); }

std::size_t hash_value(const Term& t);

struct TermHash {
  std::size_t operator()(const Term& t) const { return hash_value(t); }
};

struct FunctorArity {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const FunctorArity&, const FunctorArity&) = default;
  friend auto operator<=>(const FunctorArity&, const FunctorArity&) = default;
};

/// name/0 for atoms, functor/N for compounds, nothing otherwise.
std::optional<FunctorArity> functor_arity(const Term& t);

/// Variables in left-to-right depth-first order, without duplicates.
std::vector<Var> variables_of(const Term& t);

bool is_ground(const Term& t);

/// True when `t` contains a ForeignRef anywhere.
bool contains_foreign_ref(const Term& t);

/// Iterates the elements of a proper or partial list. Returns the tail
/// reached after the last cons cell.
template <class Fn>
Term for_each_list_element(const Term& list, Fn&& fn) {
  const Term* cur = &list;
  while (cur->is_compound(".", 2)) {
    fn(cur->arg(0));
    cur = &cur->arg(1);
  }
  return *cur;
}

}  // namespace lbridge
