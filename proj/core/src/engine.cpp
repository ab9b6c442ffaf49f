#include "lbridge/engine.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lbridge {

// --- ClauseDatabase ---------------------------------------------------------

std::shared_ptr<ClauseDatabase::ClauseList>& ClauseDatabase::writable(const FunctorArity& key) {
  auto& list = predicates_[key];
  if (!list)
    list = std::make_shared<ClauseList>();
  else if (list.use_count() > 1)  // a running query holds a snapshot
    list = std::make_shared<ClauseList>(*list);
  return list;
}

void ClauseDatabase::assertz(Clause clause) {
  check_clause_head(clause.head);
  if (!clause.body.is_callable() && !clause.body.is_var())
    throw TypeError("clause body is not callable: " + print_term(clause.body));
  auto key = *functor_arity(clause.head);
  writable(key)->push_back(std::make_shared<const Clause>(std::move(clause)));
}

std::size_t ClauseDatabase::retract_all(const Term& head_pattern, const RefRegistry* registry) {
  auto key = functor_arity(head_pattern);
  if (!key) return 0;
  auto it = predicates_.find(*key);
  if (it == predicates_.end() || it->second->empty()) return 0;

  UnifyOptions options;
  options.dead_refs_bind_vars = true;
  FreshVars fresh;
  ClauseList kept;
  for (const auto& clause : *it->second) {
    Substitution s;
    Term pattern = rename_apart(head_pattern, fresh);
    Term head = rename_apart(clause->head, fresh);
    if (!unify_in_place(pattern, head, s, registry, options)) kept.push_back(clause);
  }
  const std::size_t removed = it->second->size() - kept.size();
  if (removed) writable(*key) = std::make_shared<ClauseList>(std::move(kept));
  return removed;
}

namespace {

bool mentions_dead_ref(const Term& t, const RefRegistry& registry) {
  if (t.is_foreign_ref()) return !registry.is_live(t.as_foreign_ref().handle.id);
  if (!t.is_compound()) return false;
  for (const auto& a : *t.as_compound().args)
    if (mentions_dead_ref(a, registry)) return true;
  return false;
}

}  // namespace

std::size_t ClauseDatabase::retract_dead_references(const RefRegistry& registry) {
  std::size_t removed = 0;
  for (auto& [key, list] : predicates_) {
    ClauseList kept;
    for (const auto& clause : *list)
      if (!mentions_dead_ref(clause->head, registry) && !mentions_dead_ref(clause->body, registry))
        kept.push_back(clause);
    if (kept.size() != list->size()) {
      removed += list->size() - kept.size();
      list = std::make_shared<ClauseList>(std::move(kept));
    }
  }
  return removed;
}

ClauseDatabase::Snapshot ClauseDatabase::clauses(const FunctorArity& key) const {
  static const Snapshot kEmpty = std::make_shared<const ClauseList>();
  auto it = predicates_.find(key);
  return it == predicates_.end() ? kEmpty : Snapshot(it->second);
}

std::vector<FunctorArity> ClauseDatabase::predicates() const {
  std::vector<FunctorArity> out;
  for (const auto& [key, list] : predicates_)
    if (!list->empty()) out.push_back(key);
  return out;
}

std::size_t ClauseDatabase::size() const {
  std::size_t n = 0;
  for (const auto& [key, list] : predicates_) n += list->size();
  return n;
}

// --- Solution ---------------------------------------------------------------

const Term* Solution::find(std::string_view name) const {
  for (const auto& [n, t] : bindings_)
    if (n == name) return &t;
  return nullptr;
}

const Term& Solution::get(std::string_view name) const {
  if (const Term* t = find(name)) return *t;
  throw std::out_of_range("no variable named " + std::string(name) + " in the solution");
}

// --- Query ------------------------------------------------------------------

namespace {

// Immutable cons list of pending goals, shared between choice points.
struct GoalNode {
  Term goal;
  std::size_t depth;
  std::shared_ptr<GoalNode> next;

  GoalNode(Term g, std::size_t d, std::shared_ptr<GoalNode> n) : goal(std::move(g)), depth(d), next(std::move(n)) {}

  // Unlinks iteratively so long continuations do not recurse on destruction.
  ~GoalNode() {
    auto n = std::move(next);
    while (n && n.use_count() == 1) n = std::move(n->next);
  }
};

using Goals = std::shared_ptr<GoalNode>;

Goals push(Term goal, std::size_t depth, Goals rest) {
  return std::make_shared<GoalNode>(std::move(goal), depth, std::move(rest));
}

struct ChoicePoint {
  enum class Kind { clauses, disjunction };
  Kind kind;
  Goals continuation;
  Substitution::Mark mark;
  Term goal;  // the call, or the untried disjunct
  std::size_t depth;
  ClauseDatabase::Snapshot snapshot;
  std::size_t next_clause = 0;
};

}  // namespace

struct Query::Machine {
  const Engine* engine;
  Term goal;
  ConversionContext ctx;
  std::vector<Var> goal_vars;
  Substitution subst;
  FreshVars fresh;
  UnifyOptions unify_options;
  std::vector<ChoicePoint> choices;
  Goals goals;
  bool started = false;
  bool exhausted = false;

  Machine(const Engine& e, Term g, ConversionContext c) : engine(&e), goal(std::move(g)), ctx(std::move(c)) {
    for (auto& v : variables_of(goal))
      if (!v.anonymous()) goal_vars.push_back(std::move(v));
    unify_options.occurs_check = e.options().occurs_check;
  }

  bool unify(const Term& a, const Term& b) {
    return unify_in_place(a, b, subst, &engine->registry(), unify_options);
  }

  // Resolves `call` against clauses [start, end) of `snapshot`.
  bool try_clauses(const Term& call, std::size_t depth, const Goals& rest, ClauseDatabase::Snapshot snapshot,
                   std::size_t start) {
    const auto& list = *snapshot;
    for (std::size_t i = start; i < list.size(); ++i) {
      Clause renamed = rename_apart(*list[i], fresh);
      const Substitution::Mark mark = subst.mark();
      if (!unify(call, renamed.head)) continue;
      if (i + 1 < list.size())
        choices.push_back({ChoicePoint::Kind::clauses, rest, mark, call, depth, snapshot, i + 1});
      goals = renamed.is_fact() ? rest : push(std::move(renamed.body), depth + 1, rest);
      return true;
    }
    return false;
  }

  bool backtrack() {
    while (!choices.empty()) {
      ChoicePoint cp = std::move(choices.back());
      choices.pop_back();
      subst.undo(cp.mark);
      if (cp.kind == ChoicePoint::Kind::disjunction) {
        goals = push(std::move(cp.goal), cp.depth, std::move(cp.continuation));
        return true;
      }
      if (try_clauses(cp.goal, cp.depth, cp.continuation, std::move(cp.snapshot), cp.next_clause)) return true;
    }
    return false;
  }

  Solution make_solution() const {
    std::vector<std::pair<std::string, Term>> bindings;
    bindings.reserve(goal_vars.size());
    for (const auto& v : goal_vars) bindings.emplace_back(v.name, subst.apply(Term::var(v)));
    return Solution(std::move(bindings));
  }

  std::optional<Solution> next() {
    if (exhausted) return std::nullopt;
    if (!started) {
      started = true;
      goals = push(goal, 0, nullptr);
    } else if (!backtrack()) {
      return finish();
    }
    const std::size_t max_depth = engine->options().max_depth;
    while (true) {
      if (!goals) return make_solution();
      Term call = subst.walk(goals->goal);
      const std::size_t depth = goals->depth;
      Goals rest = goals->next;
      if (depth > max_depth) {
        finish();
        throw ResourceError("resolution depth limit of " + std::to_string(max_depth) + " exceeded");
      }
      bool ok = true;
      switch (call.kind()) {
        case Term::Kind::var:
          finish();
          throw InstantiationError("goal is an unbound variable");
        case Term::Kind::integer:
        case Term::Kind::floating:
        case Term::Kind::foreign_ref:
          finish();
          throw TypeError("goal is not callable: " + print_term(call));
        case Term::Kind::atom: {
          const std::string& name = call.as_atom().name;
          if (name == "true") {
            goals = rest;
          } else if (name == "fail" || name == "false") {
            ok = false;
          } else {
            ok = try_clauses(call, depth, rest, engine->database().clauses({name, 0}), 0);
          }
          break;
        }
        case Term::Kind::compound: {
          if (call.is_compound(",", 2)) {
            goals = push(call.arg(0), depth, push(call.arg(1), depth, rest));
          } else if (call.is_compound(";", 2)) {
            choices.push_back({ChoicePoint::Kind::disjunction, rest, subst.mark(), call.arg(1), depth, nullptr, 0});
            goals = push(call.arg(0), depth, rest);
          } else if (call.is_compound("=", 2)) {
            ok = unify(call.arg(0), call.arg(1));
            if (ok) goals = rest;
          } else {
            const Compound& c = call.as_compound();
            ok = try_clauses(call, depth, rest, engine->database().clauses({c.functor, c.arity()}), 0);
          }
          break;
        }
      }
      if (!ok && !backtrack()) return finish();
    }
  }

  std::nullopt_t finish() {
    exhausted = true;
    choices.clear();
    goals.reset();
    return std::nullopt;
  }
};

Query::Query(const Engine& engine, Term goal, ConversionContext ctx) {
  if (goal.is_var()) throw InstantiationError("query goal is an unbound variable");
  if (!goal.is_callable()) throw TypeError("query goal is not callable: " + print_term(goal));
  machine_ = std::make_unique<Machine>(engine, std::move(goal), std::move(ctx));
}

Query::Query(Query&&) noexcept = default;
Query& Query::operator=(Query&&) noexcept = default;
Query::~Query() = default;

std::optional<Solution> Query::next() { return machine_->next(); }

bool Query::has_solution() {
  bool found = machine_->next().has_value();
  machine_->finish();
  return found;
}

std::vector<Solution> Query::all_solutions() {
  std::vector<Solution> out;
  while (auto s = next()) out.push_back(std::move(*s));
  return out;
}

Solution Query::one_solution_or_throw() {
  auto s = next();
  if (!s) throw std::runtime_error("query " + print_term(goal()) + " has no solution");
  return std::move(*s);
}

Query::ObjectCursor Query::select_object(std::string var_name) {
  bool known = false;
  for (const auto& v : machine_->goal_vars) known = known || v.name == var_name;
  if (!known) throw std::invalid_argument(var_name + " is not a variable of " + print_term(goal()));
  return ObjectCursor(*this, std::move(var_name));
}

const Term& Query::goal() const { return machine_->goal; }

const ConversionContext& Query::context() const { return machine_->ctx; }

std::optional<Object> Query::ObjectCursor::next() {
  auto s = query_->next();
  if (!s) return std::nullopt;
  return query_->context().from_term(s->get(var_));
}

std::vector<Object> Query::ObjectCursor::all() {
  std::vector<Object> out;
  while (auto o = next()) out.push_back(std::move(*o));
  return out;
}

Object Query::ObjectCursor::one_or_throw() {
  auto o = next();
  if (!o) throw std::runtime_error("query " + print_term(query_->goal()) + " has no solution");
  return std::move(*o);
}

// --- Engine -----------------------------------------------------------------

Engine::Engine(std::shared_ptr<RefRegistry> registry, EngineOptions options)
    : registry_(std::move(registry)), options_(options) {
  if (!registry_) throw std::invalid_argument("engine requires a reference registry");
}

Query Engine::query(const Term& goal) const { return Query(*this, goal, default_context()); }

Query Engine::query(const Term& goal, ConversionContext ctx) const { return Query(*this, goal, std::move(ctx)); }

ConversionContext Engine::default_context() const { return ConversionContext::defaults(registry_); }

std::size_t Engine::consult(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return consult_text(text.str());
}

std::size_t Engine::consult_text(std::string_view program) {
  auto clauses = parse_program(program);
  for (auto& c : clauses) db_.assertz(std::move(c));
  return clauses.size();
}

}  // namespace lbridge
