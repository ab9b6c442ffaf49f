#pragma once

// Bottom-up ground evaluation of small stratified, non-recursive Datalog
// programs. Independent of the engine: it never unifies, it enumerates every
// assignment of rule variables over the constant domain.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "generators.hpp"

namespace lbridge::testing {

using Tuple = std::vector<std::string>;
using Relation = std::set<Tuple>;

struct DatalogProgram {
  std::vector<std::string> constants;
  std::vector<Clause> facts;
  // Rules listed stratum by stratum: a body only mentions earlier predicates.
  std::vector<Clause> rules;
  std::vector<FunctorArity> predicates;
};

class GroundEvaluator {
 public:
  explicit GroundEvaluator(const DatalogProgram& program) : program_(program) {
    for (const Clause& f : program.facts) relations_[key(f.head)].insert(ground_args(f.head, {}));
    for (const Clause& r : program.rules) {
      std::vector<std::string> vars;
      for (const Var& v : variables_of(r.head)) vars.push_back(v.name);
      for (const Var& v : variables_of(r.body))
        if (!v.anonymous() && std::find(vars.begin(), vars.end(), v.name) == vars.end()) vars.push_back(v.name);
      std::map<std::string, std::string> env;
      Relation derived;
      enumerate(vars, 0, env, [&] {
        if (holds(r.body, env)) derived.insert(ground_args(r.head, env));
      });
      relations_[key(r.head)].insert(derived.begin(), derived.end());
    }
  }

  // Answers to `goal` as the tuple of its variable values, in first-occurrence order.
  std::set<Tuple> answers(const Term& goal) const {
    std::vector<std::string> vars;
    for (const Var& v : variables_of(goal))
      if (!v.anonymous()) vars.push_back(v.name);
    std::set<Tuple> out;
    std::map<std::string, std::string> env;
    enumerate(vars, 0, env, [&] {
      if (holds(goal, env)) {
        Tuple t;
        for (const auto& v : vars) t.push_back(env.at(v));
        out.insert(t);
      }
    });
    return out;
  }

  const Relation& relation(const FunctorArity& fa) const {
    static const Relation empty;
    auto it = relations_.find(fa);
    return it == relations_.end() ? empty : it->second;
  }

 private:
  static FunctorArity key(const Term& t) { return *functor_arity(t); }

  static std::string value_of(const Term& t, const std::map<std::string, std::string>& env) {
    if (t.is_var()) return env.at(t.as_var().name);
    return t.as_atom().name;
  }

  static Tuple ground_args(const Term& head, const std::map<std::string, std::string>& env) {
    Tuple t;
    if (head.is_compound())
      for (std::size_t i = 0; i < head.as_compound().arity(); ++i) t.push_back(value_of(head.arg(i), env));
    return t;
  }

  void enumerate(const std::vector<std::string>& vars, std::size_t i, std::map<std::string, std::string>& env,
                 const std::function<void()>& fn) const {
    if (i == vars.size()) return fn();
    for (const auto& c : program_.constants) {
      env[vars[i]] = c;
      enumerate(vars, i + 1, env, fn);
    }
    env.erase(vars[i]);
  }

  // Anonymous variables in bodies are existential; handled by treating each
  // occurrence as "any constant".
  bool holds(const Term& g, std::map<std::string, std::string>& env) const {
    if (g.is_atom("true")) return true;
    if (g.is_atom("fail") || g.is_atom("false")) return false;
    if (g.is_compound(",", 2)) return holds(g.arg(0), env) && holds(g.arg(1), env);
    if (g.is_compound(";", 2)) return holds(g.arg(0), env) || holds(g.arg(1), env);
    if (g.is_compound("=", 2)) {
      const Term& l = g.arg(0);
      const Term& r = g.arg(1);
      if (l.is_var() && l.as_var().anonymous()) return true;
      if (r.is_var() && r.as_var().anonymous()) return true;
      return value_of(l, env) == value_of(r, env);
    }
    const Relation& rel = relation(key(g));
    for (const Tuple& t : rel) {
      bool ok = true;
      for (std::size_t i = 0; ok && i < t.size(); ++i) {
        const Term& a = g.arg(i);
        if (a.is_var() && a.as_var().anonymous()) continue;
        ok = value_of(a, env) == t[i];
      }
      if (ok) return true;
    }
    return false;
  }

  const DatalogProgram& program_;
  std::map<FunctorArity, Relation> relations_;
};

// Random program: base predicates e/2 and n/1 with at most `max_facts`
// facts, then derived predicates d0..dK whose rules use only earlier ones.
inline DatalogProgram random_datalog(TermGen& gen, std::size_t max_facts = 50) {
  DatalogProgram p;
  std::size_t domain = 2 + gen.below(5);
  for (std::size_t i = 0; i < domain; ++i) p.constants.push_back("c" + std::to_string(i));
  auto constant = [&] { return Term::atom(p.constants[gen.below(domain)]); };

  // A database is a set of facts: duplicates would only multiply SLD derivations.
  std::set<std::string> seen;
  std::size_t nfacts = gen.below(max_facts + 1);
  for (std::size_t i = 0; i < nfacts; ++i) {
    Term fact = gen.chance(0.6) ? Term::compound("e", {constant(), constant()}) : Term::compound("n", {constant()});
    if (seen.insert(print_term(fact)).second) p.facts.push_back(Clause{fact});
  }
  p.predicates = {{"e", 2}, {"n", 1}};

  static const char* var_names[] = {"X", "Y"};
  std::size_t derived = 1 + gen.below(3);
  for (std::size_t d = 0; d < derived; ++d) {
    std::size_t arity = 1 + gen.below(2);
    FunctorArity head_key{"d" + std::to_string(d), arity};
    std::size_t nrules = 1 + gen.below(2);
    for (std::size_t r = 0; r < nrules; ++r) {
      std::vector<Term> head_args;
      for (std::size_t i = 0; i < arity; ++i) head_args.push_back(Term::var(var_names[i]));
      // Body variables: the head's plus one existential Z, which keeps the
      // number of duplicate SLD derivations small.
      auto arg = [&]() -> Term {
        std::size_t k = gen.below(20);
        if (k < 14) return Term::var(k % 3 == 0 ? "Z" : var_names[gen.below(arity)]);
        if (k < 15) return Term::anonymous();
        return constant();
      };
      bool derived_call = false;  // at most one derived predicate per body
      auto literal = [&]() -> Term {
        std::size_t k = gen.below(10);
        if (k == 0) return Term::compound("=", {arg(), arg()});
        std::size_t pick = gen.below(p.predicates.size());
        if (pick >= 2 && derived_call) pick = gen.below(2);
        derived_call = derived_call || pick >= 2;
        const FunctorArity& callee = p.predicates[pick];
        std::vector<Term> args;
        for (std::size_t i = 0; i < callee.arity; ++i) args.push_back(arg());
        return Term::compound(callee.name, std::move(args));
      };
      auto conjunction = [](const std::vector<Term>& items) {
        Term body = items.back();
        for (std::size_t i = items.size() - 1; i-- > 0;) body = Term::compound(",", {items[i], body});
        return body;
      };
      std::vector<Term> free;
      for (std::size_t i = 0, n = 1 + gen.below(2); i < n; ++i) free.push_back(literal());
      Term core = conjunction(free);
      if (gen.chance(0.25)) core = Term::compound(";", {core, literal()});
      // Range restriction: every head variable occurs in a base literal after the core.
      std::vector<Term> body{core};
      for (std::size_t i = 0; i < arity; ++i) {
        if (gen.chance(0.5))
          body.push_back(Term::compound("n", {head_args[i]}));
        else
          body.push_back(Term::compound("e", {head_args[i], arg()}));
      }
      p.rules.push_back(Clause{Term::compound(head_key.name, std::move(head_args)), conjunction(body)});
    }
    p.predicates.push_back(head_key);
  }
  return p;
}

}  // namespace lbridge::testing
