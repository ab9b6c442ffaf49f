#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lbridge/errors.hpp"
#include "lbridge/object.hpp"
#include "lbridge/term.hpp"

namespace lbridge {

/// Callback run once when a collection pass invalidates its entry.
using CleaningTask = std::function<void()>;

/// Value-equality contract for referents of one type.
using EqualityContract = std::function<bool(const Object&, const Object&)>;

struct CleaningFailure {
  RefId id = 0;
  std::string message;
};

struct CollectionResult {
  /// Invalidated entries, in invalidation order.
  std::vector<RefId> invalidated;
  /// Cleaning tasks that threw; the remaining tasks still ran.
  std::vector<CleaningFailure> failures;
};

/// One line of the registry dump: `id strength live|dead key-text`.
struct RefEntryInfo {
  RefId id = 0;
  Strength strength = Strength::strong;
  bool live = false;
  Term key;
};

/// Associations between host objects and terms.
///
/// Each entry maps a key term (a symbolic compound, a generated `jref(N)`
/// compound, or a ForeignRef term) to a referent under a life-span policy:
///
///  - strong entries own the referent until forgotten;
///  - weak entries are invalidated by the next collection pass once no owner
///    outside the registry remains;
///  - soft entries behave like weak ones, but only under memory pressure.
///
/// The registry keeps weak and soft referents reachable until a pass runs,
/// so lookups between the release of the last outside owner and the next
/// pass still see a live entry. Invalidated entries never come back.
///
/// Not thread-safe for writers: registrations, forgets and collection passes
/// must be serialised with each other and with query iteration. Const
/// lookups may run concurrently with each other.
class RefRegistry {
 public:
  RefRegistry() = default;
  RefRegistry(const RefRegistry&) = delete;
  RefRegistry& operator=(const RefRegistry&) = delete;

  /// Process-wide registry shared by default contexts and engines.
  static std::shared_ptr<RefRegistry> global();

  /// Fresh isolated registry; ids start at 1.
  static std::shared_ptr<RefRegistry> create() { return std::make_shared<RefRegistry>(); }

  // Symbolic associations. `key` must be a compound term. Returns `key`.
  Term new_ref_term(const Object& obj, const Term& key);
  Term new_weak_ref_term(const Object& obj, const Term& key, CleaningTask task = {});
  Term new_soft_ref_term(const Object& obj, const Term& key, CleaningTask task = {});

  /// Strong association with a generated `jref(ID)` term, stable per object identity.
  Term new_ref_term_generated(const Object& obj);

  /// Removes the association for `key` (symbolic, generated, or ForeignRef)
  /// without running its cleaning task. Returns whether one existed.
  bool forget_ref_term(const Term& key);

  /// Registers `obj` and returns a ForeignRef term wrapping it. Every call
  /// issues a fresh id.
  Term make_jref(const Object& obj, Strength strength = Strength::strong, CleaningTask task = {});

  /// Sweeps weak entries (and soft entries under pressure) whose referent
  /// has no owner outside the registry, then runs their cleaning tasks.
  CollectionResult run_collection_pass(bool pressure = false);

  /// Soft entries are also swept when `usage()` exceeds `bytes`.
  void set_memory_threshold(std::size_t bytes, std::function<std::size_t()> usage);
  void clear_memory_threshold();

  /// The referent of a ForeignRef term or registered key.
  /// Throws DeadReferenceError or NotAReferenceError.
  Object referent_of(const Term& t) const;

  /// Lookup of a symbolic/generated key. Nothing if `t` is not a key.
  struct KeyLookup {
    RefId id = 0;
    bool live = false;
    Object referent;
  };
  std::optional<KeyLookup> find_key(const Term& t) const;

  bool is_live(RefId id) const;
  std::optional<Object> referent(RefId id) const;

  /// ForeignRef unification rule: both entries live and referents equal
  /// (same object, or equal under the type's registered contract).
  bool referents_unify(RefId a, RefId b) const;

  void register_equality(TypeTag type, EqualityContract contract);

  template <class T>
  void register_equality() {
    register_equality(TypeTag::of<T>(), [](const Object& a, const Object& b) { return a.as<T>() == b.as<T>(); });
  }

  bool objects_equal(const Object& a, const Object& b) const;

  /// Entries in id order.
  std::vector<RefEntryInfo> entries() const;

  /// One line per entry: `id strength live|dead key-text`.
  std::string dump() const;

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  struct Entry {
    RefId id = 0;
    Term key;
    Strength strength = Strength::strong;
    Object referent;  // empty once invalidated
    const void* identity = nullptr;
    CleaningTask cleaning_task;
    bool live = true;
    bool generated = false;
  };

  Term add_symbolic(const Object& obj, const Term& key, Strength strength, CleaningTask task);
  const Entry* find_entry(RefId id) const;
  bool pressure_now(bool requested) const;

  std::map<RefId, Entry> entries_;
  std::unordered_map<Term, RefId, TermHash> key_index_;
  std::unordered_map<const void*, RefId> identity_index_;  // generated terms only
  std::unordered_map<TypeTag, EqualityContract, TypeTagHash> equality_;
  RefId next_id_ = 1;
  std::optional<std::size_t> threshold_bytes_;
  std::function<std::size_t()> usage_probe_;
};

}  // namespace lbridge
