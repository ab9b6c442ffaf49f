#include "lbridge/unify.hpp"

#include <stdexcept>
#include <unordered_map>

#include "lbridge/refbridge.hpp"

namespace lbridge {

const Term* Substitution::lookup(const Var& v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::walk(const Term& t) const {
  const Term* cur = &t;
  while (cur->is_var()) {
    const Term* next = lookup(cur->as_var());
    if (!next) break;
    cur = next;
  }
  return *cur;
}

Term Substitution::apply(const Term& t) const {
  if (map_.empty()) return t;
  if (t.is_var()) {
    const Term* bound = lookup(t.as_var());
    return bound ? apply(*bound) : t;
  }
  if (!t.is_compound()) return t;
  const Compound& c = t.as_compound();
  std::vector<Term> args;
  bool changed = false;
  args.reserve(c.arity());
  for (const auto& a : *c.args) {
    Term r = apply(a);
    if (!changed && !(r.kind() == a.kind() && (r.is_compound() ? r.as_compound().args == a.as_compound().args
                                                               : term_equal(r, a))))
      changed = true;
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  return Term::compound(c.functor, std::move(args));
}

std::vector<std::pair<Var, Term>> Substitution::bindings() const {
  std::vector<std::pair<Var, Term>> out;
  out.reserve(trail_.size());
  for (const auto& v : trail_) out.emplace_back(v, apply(map_.at(v)));
  return out;
}

void Substitution::bind(const Var& v, Term value) {
  auto [it, inserted] = map_.emplace(v, std::move(value));
  if (!inserted) throw std::logic_error("variable " + v.name + " is already bound");
  trail_.push_back(v);
}

void Substitution::undo(Mark m) {
  while (trail_.size() > m) {
    map_.erase(trail_.back());
    trail_.pop_back();
  }
}

namespace {

bool occurs(const Var& v, const Term& t, const Substitution& s) {
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term w = s.walk(stack.back());
    stack.pop_back();
    if (w.is_var()) {
      if (w.as_var() == v) return true;
    } else if (w.is_compound() && !w.as_compound().ground) {
      for (const auto& a : *w.as_compound().args) stack.push_back(a);
    }
  }
  return false;
}

bool ref_live(const Term& t, const RefRegistry* registry) {
  return !registry || registry->is_live(t.as_foreign_ref().handle.id);
}

// Binds variable `v` to non-identical `value`, both already walked.
bool bind_var(const Var& v, const Term& value, Substitution& s, const RefRegistry* registry,
              const UnifyOptions& options) {
  if (value.is_foreign_ref() && !options.dead_refs_bind_vars && !ref_live(value, registry)) return false;
  if (v.anonymous()) return true;
  if (value.is_var() && value.as_var().anonymous()) return true;
  if (options.occurs_check && value.is_compound() && occurs(v, value, s)) return false;
  s.bind(v, value);
  return true;
}

}  // namespace

bool unify_in_place(const Term& a, const Term& b, Substitution& s, const RefRegistry* registry,
                    const UnifyOptions& options) {
  const Substitution::Mark mark = s.mark();
  std::vector<std::pair<Term, Term>> pending;
  pending.emplace_back(a, b);
  auto fail = [&] {
    s.undo(mark);
    return false;
  };
  while (!pending.empty()) {
    auto [x0, y0] = std::move(pending.back());
    pending.pop_back();
    Term x = s.walk(x0);
    Term y = s.walk(y0);
    if (x.is_var() && y.is_var() && x.as_var() == y.as_var() && !x.as_var().anonymous()) continue;
    if (x.is_var()) {
      if (!bind_var(x.as_var(), y, s, registry, options)) return fail();
      continue;
    }
    if (y.is_var()) {
      if (!bind_var(y.as_var(), x, s, registry, options)) return fail();
      continue;
    }
    if (x.kind() != y.kind()) return fail();
    switch (x.kind()) {
      case Term::Kind::foreign_ref: {
        RefId xa = x.as_foreign_ref().handle.id;
        RefId yb = y.as_foreign_ref().handle.id;
        bool ok = registry ? registry->referents_unify(xa, yb) : xa == yb;
        if (!ok) return fail();
        break;
      }
      case Term::Kind::compound: {
        const Compound& cx = x.as_compound();
        const Compound& cy = y.as_compound();
        if (cx.functor != cy.functor || cx.arity() != cy.arity()) return fail();
        if (cx.args == cy.args && !contains_foreign_ref(x)) break;
        for (std::size_t i = cx.arity(); i-- > 0;) pending.emplace_back(cx.arg(i), cy.arg(i));
        break;
      }
      default:
        if (!term_equal(x, y)) return fail();
    }
  }
  return true;
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s, const RefRegistry* registry,
                                  const UnifyOptions& options) {
  Substitution out = s;
  if (!unify_in_place(a, b, out, registry, options)) return std::nullopt;
  return out;
}

Substitution Substitution::from_bindings(const std::vector<std::pair<Var, Term>>& bindings) {
  Substitution s;
  for (const auto& [v, t] : bindings) {
    if (v.anonymous() || s.contains(v)) throw std::invalid_argument("cannot bind variable " + v.name);
    Term value = s.apply(t);
    if (value.is_var() && value.as_var() == v) continue;
    if (occurs(v, value, s)) throw std::invalid_argument("cyclic binding for variable " + v.name);
    s.bind(v, std::move(value));
  }
  return s;
}

namespace {

Term rename_term(const Term& t, FreshVars& fresh, std::unordered_map<Var, Var, VarHash>& renamed) {
  if (t.is_var()) {
    const Var& v = t.as_var();
    if (v.anonymous()) return t;
    auto it = renamed.find(v);
    if (it == renamed.end()) it = renamed.emplace(v, fresh.fresh(v)).first;
    return Term::var(it->second);
  }
  if (!t.is_compound()) return t;
  const Compound& c = t.as_compound();
  std::vector<Term> args;
  args.reserve(c.arity());
  for (const auto& a : *c.args) args.push_back(rename_term(a, fresh, renamed));
  return Term::compound(c.functor, std::move(args));
}

bool variant_walk(const Term& a, const Term& b, std::unordered_map<Var, Var, VarHash>& fwd,
                  std::unordered_map<Var, Var, VarHash>& back) {
  if (a.is_var() && b.is_var()) {
    const Var& x = a.as_var();
    const Var& y = b.as_var();
    if (x.anonymous() || y.anonymous()) return x.anonymous() && y.anonymous();
    auto [fi, fnew] = fwd.emplace(x, y);
    auto [bi, bnew] = back.emplace(y, x);
    return fi->second == y && bi->second == x;
  }
  if (a.kind() != b.kind()) return false;
  if (!a.is_compound()) return term_equal(a, b);
  const Compound& ca = a.as_compound();
  const Compound& cb = b.as_compound();
  if (ca.functor != cb.functor || ca.arity() != cb.arity()) return false;
  for (std::size_t i = 0; i < ca.arity(); ++i)
    if (!variant_walk(ca.arg(i), cb.arg(i), fwd, back)) return false;
  return true;
}

}  // namespace

Term rename_apart(const Term& t, FreshVars& fresh) {
  std::unordered_map<Var, Var, VarHash> renamed;
  return rename_term(t, fresh, renamed);
}

Clause rename_apart(const Clause& c, FreshVars& fresh) {
  std::unordered_map<Var, Var, VarHash> renamed;
  Clause out;
  out.head = rename_term(c.head, fresh, renamed);
  out.body = c.is_fact() ? c.body : rename_term(c.body, fresh, renamed);
  return out;
}

bool is_variant(const Term& a, const Term& b) {
  std::unordered_map<Var, Var, VarHash> fwd, back;
  return variant_walk(a, b, fwd, back);
}

}  // namespace lbridge
