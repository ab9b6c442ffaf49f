#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lbridge/conversion.hpp"
#include "lbridge/refbridge.hpp"
#include "lbridge/syntax.hpp"
#include "lbridge/term.hpp"
#include "lbridge/unify.hpp"

namespace lbridge {

/// Clauses grouped by predicate, in insertion order.
///
/// Each predicate's clause list is copy-on-write: a running query holds a
/// snapshot of the list it started iterating, so later asserts and retracts
/// only affect calls made after them.
class ClauseDatabase {
 public:
  using ClauseList = std::vector<std::shared_ptr<const Clause>>;
  using Snapshot = std::shared_ptr<const ClauseList>;

  /// Throws InvalidHeadError if the head is not an atom or compound.
  void assertz(Clause clause);

  /// Removes every clause whose head unifies with `head_pattern`. Clause
  /// heads holding invalidated references still match variables here.
  std::size_t retract_all(const Term& head_pattern, const RefRegistry* registry);

  /// Removes every clause that mentions an invalidated ForeignRef.
  std::size_t retract_dead_references(const RefRegistry& registry);

  /// Empty snapshot for unknown predicates.
  Snapshot clauses(const FunctorArity& key) const;

  std::vector<FunctorArity> predicates() const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }

 private:
  std::shared_ptr<ClauseList>& writable(const FunctorArity& key);

  std::map<FunctorArity, std::shared_ptr<ClauseList>> predicates_;
};

/// One answer: query variable name to fully substituted term.
class Solution {
 public:
  Solution() = default;
  explicit Solution(std::vector<std::pair<std::string, Term>> bindings) : bindings_(std::move(bindings)) {}

  /// Throws std::out_of_range for names not in the goal.
  const Term& get(std::string_view name) const;
  const Term* find(std::string_view name) const;

  /// In order of first occurrence in the goal.
  const std::vector<std::pair<std::string, Term>>& bindings() const noexcept { return bindings_; }

 private:
  std::vector<std::pair<std::string, Term>> bindings_;
};

struct EngineOptions {
  /// Maximum resolution depth before a ResourceError is raised.
  std::size_t max_depth = 1'000'000;
  bool occurs_check = true;
};

class Engine;

/// Lazy iterator over the answers to a goal. Resolution is depth-first,
/// leftmost goal first, clauses in stored order. Built-ins: true/0, fail/0,
/// false/0, ','/2, ';'/2 and '='/2. Unknown predicates fail.
///
/// A query borrows its engine's database and must not outlive the engine.
class Query {
 public:
  Query(Query&&) noexcept;
  Query& operator=(Query&&) noexcept;
  ~Query();

  /// Next solution, or nothing once exhausted. Throws ResourceError when
  /// the depth bound is exceeded.
  std::optional<Solution> next();

  /// True iff at least one solution exists. Consumes the query.
  bool has_solution();

  /// Every remaining solution, in resolution order.
  std::vector<Solution> all_solutions();

  /// The first solution; throws std::runtime_error if there is none.
  Solution one_solution_or_throw();

  /// Lazily converts the binding of `var_name` in each solution to an
  /// object through the query's conversion context.
  class ObjectCursor {
   public:
    /// Next object, nothing when solutions are exhausted. Conversion
    /// failures throw for that element; the cursor stays usable.
    std::optional<Object> next();
    std::vector<Object> all();
    Object one_or_throw();

   private:
    friend class Query;
    ObjectCursor(Query& query, std::string var_name) : query_(&query), var_(std::move(var_name)) {}

    Query* query_;
    std::string var_;
  };

  /// Throws std::invalid_argument if `var_name` is not a variable of the goal.
  ObjectCursor select_object(std::string var_name);

  const Term& goal() const;
  const ConversionContext& context() const;

 private:
  friend class Engine;
  struct Machine;

  Query(const Engine& engine, Term goal, ConversionContext ctx);

  std::unique_ptr<Machine> machine_;
};

/// An embedded clause database with SLD resolution over terms that may
/// hold foreign references.
///
/// Single-threaded: database changes, query iteration and collection passes
/// on the shared registry must be serialised by the caller.
class Engine {
 public:
  explicit Engine(std::shared_ptr<RefRegistry> registry = RefRegistry::global(), EngineOptions options = {});

  void assertz(Clause clause) { db_.assertz(std::move(clause)); }
  void assertz(const Term& fact) { db_.assertz(Clause{fact}); }

  std::size_t retract_all(const Term& head_pattern) { return db_.retract_all(head_pattern, registry_.get()); }
  std::size_t retract_dead_references() { return db_.retract_dead_references(*registry_); }

  /// Query under the default conversion context of this engine's registry.
  Query query(const Term& goal) const;
  Query query(const Term& goal, ConversionContext ctx) const;

  /// Parses a program file and asserts its clauses in order.
  /// Throws IoError when the file cannot be read, SyntaxError on bad input.
  std::size_t consult(const std::filesystem::path& path);
  std::size_t consult_text(std::string_view program);

  ConversionContext default_context() const;

  const ClauseDatabase& database() const noexcept { return db_; }
  RefRegistry& registry() const noexcept { return *registry_; }
  const std::shared_ptr<RefRegistry>& registry_ptr() const noexcept { return registry_; }
  const EngineOptions& options() const noexcept { return options_; }
  void set_max_depth(std::size_t depth) { options_.max_depth = depth; }

 private:
  ClauseDatabase db_;
  std::shared_ptr<RefRegistry> registry_;
  EngineOptions options_;
};

}  // namespace lbridge
