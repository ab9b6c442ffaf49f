#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "generators.hpp"

namespace lbridge::testing {

struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  double seconds = 0.0;

  bool ok() const { return failures == 0 && cases > 0; }
};

// Each property draws `cases` inputs from a mt19937_64 seeded with `seed`.
PropertyResult prop_unify_symmetry_and_mgu(std::uint64_t seed, int cases);
PropertyResult prop_occurs_check(std::uint64_t seed, int cases);
PropertyResult prop_parse_print_round_trip(std::uint64_t seed, int cases);
PropertyResult prop_converter_round_trip(std::uint64_t seed, int cases);
PropertyResult prop_sweep_exactness(std::uint64_t seed, int cases);
PropertyResult prop_generated_terms(std::uint64_t seed, int cases);
PropertyResult prop_sld_matches_ground_enumeration(std::uint64_t seed, int cases);

std::vector<PropertyResult> run_all_properties(std::uint64_t seed = kDefaultSeed, int cases = 200);

// Textbook Robinson unification with eager substitution; used as an oracle.
std::optional<Substitution> reference_unify(const Term& a, const Term& b);

}  // namespace lbridge::testing
