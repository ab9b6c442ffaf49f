#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lbridge/syntax.hpp"
#include "lbridge/term.hpp"

namespace lbridge {

class RefRegistry;

/// Variable bindings with an undo trail.
///
/// Bindings are stored in triangular form (a bound value may mention other
/// bound variables, never cyclically); `apply` resolves them completely, so
/// the observable substitution is idempotent. `bindings()` returns the
/// fully resolved form.
class Substitution {
 public:
  using Mark = std::size_t;

  Substitution() = default;

  /// Builds a substitution from possibly non-idempotent bindings, resolving
  /// each value against the others. Self-bindings are dropped.
  static Substitution from_bindings(const std::vector<std::pair<Var, Term>>& bindings);

  bool empty() const noexcept { return map_.empty(); }
  std::size_t size() const noexcept { return map_.size(); }
  bool contains(const Var& v) const { return map_.count(v) != 0; }

  /// Direct binding of `v` (one step), or null.
  const Term* lookup(const Var& v) const;

  /// Follows variable bindings until reaching an unbound variable or non-variable.
  Term walk(const Term& t) const;

  /// Simultaneous replacement of every bound variable.
  Term apply(const Term& t) const;

  /// Fully resolved bindings in binding order.
  std::vector<std::pair<Var, Term>> bindings() const;

  /// Records a binding. `v` must be unbound and not anonymous.
  void bind(const Var& v, Term value);

  Mark mark() const noexcept { return trail_.size(); }
  void undo(Mark m);

 private:
  std::unordered_map<Var, Term, VarHash> map_;
  std::vector<Var> trail_;
};

struct UnifyOptions {
  bool occurs_check = true;
  /// Lets a variable bind to an invalidated ForeignRef. Used when matching
  /// clauses for removal, so that clauses holding dead references can be retracted.
  bool dead_refs_bind_vars = false;
};

/// Unifies `a` and `b`, extending `s` in place. On failure `s` is left as it
/// was on entry. ForeignRef terms unify as constants by referent equality,
/// consulting `registry`; without a registry they unify iff their ids match.
bool unify_in_place(const Term& a, const Term& b, Substitution& s, const RefRegistry* registry,
                    const UnifyOptions& options = {});

/// Most general unifier extending `s`, or nothing.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s,
                                  const RefRegistry* registry, const UnifyOptions& options = {});

inline Term apply(const Substitution& s, const Term& t) { return s.apply(t); }

/// Source of fresh variables, named `_G<n>` when printed.
class FreshVars {
 public:
  Var fresh(const Var& original) { return Var{original.name, next_++}; }
  std::uint64_t peek() const noexcept { return next_; }

 private:
  std::uint64_t next_ = 1;
};

/// Replaces every variable of `t` with a fresh one, keeping sharing. Anonymous
/// variables stay anonymous.
Term rename_apart(const Term& t, FreshVars& fresh);
Clause rename_apart(const Clause& c, FreshVars& fresh);

/// True if the two terms are equal up to a consistent bijective renaming of variables.
bool is_variant(const Term& a, const Term& b);

}  // namespace lbridge
