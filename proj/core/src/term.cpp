#include "lbridge/term.hpp"

#include <functional>
#include <limits>
#include <unordered_set>

namespace lbridge {

const char* to_string(Strength s) noexcept {
  switch (s) {
    case Strength::strong: return "strong";
    case Strength::weak: return "weak";
    case Strength::soft: return "soft";
  }
  return "?";
}

std::size_t VarHash::operator()(const Var& v) const noexcept {
  return std::hash<std::string>{}(v.name) ^ (std::hash<std::uint64_t>{}(v.serial) * 0x9e3779b97f4a7c15ULL);
}

Term Term::atom(std::string name) { return Term(Atom{std::move(name)}); }

Term Term::integer(BigInt value) { return Term(IntTerm{std::move(value)}); }

Term Term::floating(double value) { return Term(FloatTerm{value}); }

Term Term::var(std::string name) { return Term(Var{std::move(name), 0}); }

Term Term::var(Var v) { return Term(std::move(v)); }

Term Term::anonymous() { return var("_"); }

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return atom(std::move(functor));
  bool ground = true;
  for (const Term& a : args) ground = ground && (a.is_compound() ? a.as_compound().ground : !a.is_var());
  return Term(Compound{std::move(functor), std::make_shared<const std::vector<Term>>(std::move(args)), ground});
}

Term Term::foreign_ref(RefHandle handle) { return Term(ForeignRef{handle}); }

Term Term::cons(Term head, Term tail) { return compound(".", {std::move(head), std::move(tail)}); }

Term Term::list(std::vector<Term> items, std::optional<Term> tail) {
  Term result = tail ? std::move(*tail) : nil();
  for (auto it = items.rbegin(); it != items.rend(); ++it) result = cons(std::move(*it), std::move(result));
  return result;
}

bool Term::is_atom(std::string_view name) const noexcept {
  return is_atom() && as_atom().name == name;
}

bool Term::is_compound(std::string_view functor, std::size_t arity) const noexcept {
  if (!is_compound()) return false;
  const auto& c = as_compound();
  return c.arity() == arity && c.functor == functor;
}

bool term_equal(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::atom: return a.as_atom().name == b.as_atom().name;
    case Term::Kind::integer: return a.as_integer().value == b.as_integer().value;
    case Term::Kind::floating: {
      double x = a.as_float().value, y = b.as_float().value;
      return x == y || (x != x && y != y);  // NaN equals NaN, keeping equality reflexive
    }
    case Term::Kind::var: return a.as_var() == b.as_var();
    case Term::Kind::foreign_ref: return a.as_foreign_ref().handle.id == b.as_foreign_ref().handle.id;
    case Term::Kind::compound: {
      const auto& ca = a.as_compound();
      const auto& cb = b.as_compound();
      if (ca.args == cb.args) return ca.functor == cb.functor;
      if (ca.functor != cb.functor || ca.arity() != cb.arity()) return false;
      for (std::size_t i = 0; i < ca.arity(); ++i)
        if (!term_equal(ca.arg(i), cb.arg(i))) return false;
      return true;
    }
  }
  return false;
}

namespace {

void mix(std::size_t& seed, std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); }

}  // namespace

std::size_t hash_value(const Term& t) {
  std::size_t seed = static_cast<std::size_t>(t.kind());
  switch (t.kind()) {
    case Term::Kind::atom: mix(seed, std::hash<std::string>{}(t.as_atom().name)); break;
    case Term::Kind::integer: mix(seed, std::hash<std::string>{}(t.as_integer().value.str())); break;
    case Term::Kind::floating: {
      double d = t.as_float().value;
      if (d != d) d = std::numeric_limits<double>::quiet_NaN();
      mix(seed, std::hash<double>{}(d == 0.0 ? 0.0 : d));
      break;
    }
    case Term::Kind::var: mix(seed, VarHash{}(t.as_var())); break;
    case Term::Kind::foreign_ref: mix(seed, std::hash<RefId>{}(t.as_foreign_ref().handle.id)); break;
    case Term::Kind::compound: {
      const auto& c = t.as_compound();
      mix(seed, std::hash<std::string>{}(c.functor));
      for (const auto& a : *c.args) mix(seed, hash_value(a));
      break;
    }
  }
  return seed;
}

std::optional<FunctorArity> functor_arity(const Term& t) {
  if (t.is_atom()) return FunctorArity{t.as_atom().name, 0};
  if (t.is_compound()) return FunctorArity{t.as_compound().functor, t.as_compound().arity()};
  return std::nullopt;
}

namespace {

void collect_vars(const Term& t, std::vector<Var>& out, std::unordered_set<Var, VarHash>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.as_var()).second) out.push_back(t.as_var());
  } else if (t.is_compound()) {
    for (const auto& a : *t.as_compound().args) collect_vars(a, out, seen);
  }
}

}  // namespace

std::vector<Var> variables_of(const Term& t) {
  std::vector<Var> out;
  std::unordered_set<Var, VarHash> seen;
  collect_vars(t, out, seen);
  return out;
}

bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  return !t.is_compound() || t.as_compound().ground;
}

bool contains_foreign_ref(const Term& t) {
  if (t.is_foreign_ref()) return true;
  if (!t.is_compound()) return false;
  for (const auto& a : *t.as_compound().args)
    if (contains_foreign_ref(a)) return true;
  return false;
}

}  // namespace lbridge
