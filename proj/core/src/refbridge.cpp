#include "lbridge/refbridge.hpp"

#include <stdexcept>

#include "lbridge/syntax.hpp"

namespace lbridge {

std::shared_ptr<RefRegistry> RefRegistry::global() {
  static const std::shared_ptr<RefRegistry> instance = std::make_shared<RefRegistry>();
  return instance;
}

Term RefRegistry::add_symbolic(const Object& obj, const Term& key, Strength strength, CleaningTask task) {
  if (!obj) throw std::invalid_argument("cannot register an empty object");
  if (!key.is_compound()) throw InvalidKeyError("association key must be a compound term, got " + print_term(key));
  if (auto it = key_index_.find(key); it != key_index_.end()) {
    Entry& existing = entries_.at(it->second);
    if (existing.live) {
      if (existing.identity == obj.identity()) return existing.key;
      throw KeyConflictError("key " + print_term(key) + " is already associated with another object");
    }
    // The old association is dead; the key can be reused.
    key_index_.erase(it);
  }
  const RefId id = next_id_++;
  Entry e;
  e.id = id;
  e.key = key;
  e.strength = strength;
  e.referent = obj;
  e.identity = obj.identity();
  e.cleaning_task = std::move(task);
  entries_.emplace(id, std::move(e));
  key_index_.emplace(key, id);
  return key;
}

Term RefRegistry::new_ref_term(const Object& obj, const Term& key) {
  return add_symbolic(obj, key, Strength::strong, {});
}

Term RefRegistry::new_weak_ref_term(const Object& obj, const Term& key, CleaningTask task) {
  return add_symbolic(obj, key, Strength::weak, std::move(task));
}

Term RefRegistry::new_soft_ref_term(const Object& obj, const Term& key, CleaningTask task) {
  return add_symbolic(obj, key, Strength::soft, std::move(task));
}

Term RefRegistry::new_ref_term_generated(const Object& obj) {
  if (!obj) throw std::invalid_argument("cannot register an empty object");
  if (auto it = identity_index_.find(obj.identity()); it != identity_index_.end()) return entries_.at(it->second).key;
  auto key_for = [](RefId id) { return Term::compound("jref", {Term::integer(id)}); };
  while (key_index_.count(key_for(next_id_))) ++next_id_;
  const RefId id = next_id_++;
  Entry e;
  e.id = id;
  e.key = key_for(id);
  e.strength = Strength::strong;
  e.referent = obj;
  e.identity = obj.identity();
  e.generated = true;
  Term key = e.key;
  entries_.emplace(id, std::move(e));
  key_index_.emplace(key, id);
  identity_index_.emplace(obj.identity(), id);
  return key;
}

bool RefRegistry::forget_ref_term(const Term& key) {
  if (key.is_foreign_ref()) return entries_.erase(key.as_foreign_ref().handle.id) != 0;
  auto it = key_index_.find(key);
  if (it == key_index_.end()) return false;
  auto entry = entries_.find(it->second);
  if (entry->second.generated) identity_index_.erase(entry->second.identity);
  entries_.erase(entry);
  key_index_.erase(it);
  return true;
}

Term RefRegistry::make_jref(const Object& obj, Strength strength, CleaningTask task) {
  if (!obj) throw std::invalid_argument("cannot register an empty object");
  const RefId id = next_id_++;
  Entry e;
  e.id = id;
  e.key = Term::foreign_ref(RefHandle{id, strength});
  e.strength = strength;
  e.referent = obj;
  e.identity = obj.identity();
  e.cleaning_task = std::move(task);
  Term key = e.key;
  entries_.emplace(id, std::move(e));
  return key;
}

bool RefRegistry::pressure_now(bool requested) const {
  if (requested) return true;
  return threshold_bytes_ && usage_probe_ && usage_probe_() > *threshold_bytes_;
}

CollectionResult RefRegistry::run_collection_pass(bool pressure) {
  const bool under_pressure = pressure_now(pressure);
  auto reclaimable = [&](const Entry& e) {
    return e.live && (e.strength == Strength::weak || (e.strength == Strength::soft && under_pressure));
  };

  CollectionResult result;
  std::vector<std::pair<RefId, CleaningTask>> tasks;
  // Releasing one referent can drop the last outside owner of another
  // (an object holding a handle to a second one), so sweep to a fixpoint.
  while (true) {
    std::unordered_map<const void*, long> holders;
    for (const auto& [id, e] : entries_)
      if (reclaimable(e)) ++holders[e.identity];

    std::vector<Object> released;
    for (auto& [id, e] : entries_) {
      if (!reclaimable(e) || e.referent.owner_count() != holders[e.identity]) continue;
      e.live = false;
      released.push_back(std::move(e.referent));
      e.referent = Object();
      result.invalidated.push_back(id);
      if (e.cleaning_task) tasks.emplace_back(id, std::move(e.cleaning_task));
      e.cleaning_task = nullptr;
    }
    if (released.empty()) break;
  }

  for (auto& [id, task] : tasks) {
    try {
      task();
    } catch (const std::exception& ex) {
      result.failures.push_back({id, ex.what()});
    } catch (...) {
      result.failures.push_back({id, "unknown exception"});
    }
  }
  return result;
}

void RefRegistry::set_memory_threshold(std::size_t bytes, std::function<std::size_t()> usage) {
  threshold_bytes_ = bytes;
  usage_probe_ = std::move(usage);
}

void RefRegistry::clear_memory_threshold() {
  threshold_bytes_.reset();
  usage_probe_ = nullptr;
}

const RefRegistry::Entry* RefRegistry::find_entry(RefId id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

Object RefRegistry::referent_of(const Term& t) const {
  if (t.is_foreign_ref()) {
    const RefId id = t.as_foreign_ref().handle.id;
    const Entry* e = find_entry(id);
    if (!e) throw NotAReferenceError(print_term(t) + " has no registry entry");
    if (!e->live) throw DeadReferenceError(id, t);
    return e->referent;
  }
  if (auto found = find_key(t)) {
    if (!found->live) throw DeadReferenceError(found->id, t);
    return found->referent;
  }
  throw NotAReferenceError(print_term(t) + " is neither a foreign reference nor a registered key");
}

std::optional<RefRegistry::KeyLookup> RefRegistry::find_key(const Term& t) const {
  if (!t.is_compound()) return std::nullopt;
  auto it = key_index_.find(t);
  if (it == key_index_.end()) return std::nullopt;
  const Entry& e = entries_.at(it->second);
  return KeyLookup{e.id, e.live, e.referent};
}

bool RefRegistry::is_live(RefId id) const {
  const Entry* e = find_entry(id);
  return e && e->live;
}

std::optional<Object> RefRegistry::referent(RefId id) const {
  const Entry* e = find_entry(id);
  if (!e || !e->live) return std::nullopt;
  return e->referent;
}

bool RefRegistry::referents_unify(RefId a, RefId b) const {
  const Entry* ea = find_entry(a);
  const Entry* eb = find_entry(b);
  if (!ea || !eb || !ea->live || !eb->live) return false;
  return objects_equal(ea->referent, eb->referent);
}

void RefRegistry::register_equality(TypeTag type, EqualityContract contract) {
  equality_.insert_or_assign(type, std::move(contract));
}

bool RefRegistry::objects_equal(const Object& a, const Object& b) const {
  if (a.same_object(b)) return true;
  if (!a || !b || !(a.type() == b.type())) return false;
  auto it = equality_.find(a.type());
  return it != equality_.end() && it->second(a, b);
}

std::vector<RefEntryInfo> RefRegistry::entries() const {
  std::vector<RefEntryInfo> out;
  out.reserve(entries_.size());
  for (const auto& [id, e] : entries_) out.push_back({id, e.strength, e.live, e.key});
  return out;
}

std::string RefRegistry::dump() const {
  std::string out;
  for (const auto& [id, e] : entries_) {
    out += std::to_string(id);
    out += ' ';
    out += to_string(e.strength);
    out += e.live ? " live " : " dead ";
    out += print_term(e.key);
    out += '\n';
  }
  return out;
}

}  // namespace lbridge
