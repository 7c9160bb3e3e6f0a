#pragma once

#include <optional>
#include <string>

#include "misodof/pattern.hpp"
#include "misodof/region.hpp"

namespace misodof {

// The weight-2 pair of a joint-probability inequality; the remaining
// user of a 3-user pattern gets weight 1.
struct PatternInequalitySpec {
  int heavy_a = 0;
  int heavy_b = 1;
};

// Joint-probability constraint for a 3-user pattern:
//   2 d_a + 2 d_b + d_c <= 2 + (lambda_P^a + lambda_D^a)
//                            + (lambda_P^b + lambda_D^b)
//                            + mass(a and b both in {P,D}, c arbitrary)
// The last term is a joint probability, not derivable from marginals.
LinearInequality pattern_weighted_inequality(const CsitPattern& pattern,
                                             const PatternInequalitySpec& spec);

// The marginal outer bound intersected with the three joint-probability
// constraints of the pattern. K = 3 only.
Region tightened_region(const CsitPattern& pattern);

enum class RegionRelation { equal, r1_strict_subset, r2_strict_subset, incomparable };

std::string relation_name(RegionRelation r);

struct CompareResult {
  RegionRelation relation = RegionRelation::equal;
  // A vertex of the non-contained region outside the other one; the
  // lexicographically greatest such vertex, for determinism. For
  // incomparable pairs both directions are populated and `separator`
  // aliases the r1-outside-r2 witness.
  std::optional<DofPoint> separator;
  std::optional<DofPoint> separator_r1_not_in_r2;
  std::optional<DofPoint> separator_r2_not_in_r1;
  std::string violated;  // the inequality the separator breaks
};

// Exact comparison by mutual vertex membership. Requires equal
// dimensions, K <= 4 and bounded regions.
CompareResult compare_regions(const Region& r1, const Region& r2);

}  // namespace misodof
