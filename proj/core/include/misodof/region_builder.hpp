#pragma once

#include <vector>

#include "misodof/pattern.hpp"
#include "misodof/region.hpp"

namespace misodof {

// Ordered list of distinct 0-based user indices, 1 <= size <= K.
using PermutationSpec = std::vector<int>;

// Weighted-family constraint for one ordered permutation pi of size j:
//   sum_{i=1..j} d_{pi(i)} / i  <=  1 + sum_{i=2..j} (sum_{r<i} lambda_P^{pi(r)}) / (i(i-1))
// Size-1 permutations give the box constraint d_i <= 1.
LinearInequality weighted_inequality(const MarginalProfile& marginals,
                                     const PermutationSpec& perm);

// Users of `subset` sorted by lambda_P + lambda_D ascending, ties broken
// by ascending user index. This ordering minimizes the sum bound over
// all permutations of the subset.
PermutationSpec psi_order(const MarginalProfile& marginals, std::vector<int> subset);

// Sum-family constraint for a subset S:
//   sum_{i in S} d_i <= 1 + (sum of the |S|-1 smallest lambda_P+lambda_D in S)
// i.e. the user with the largest lambda_P+lambda_D is excluded from the
// right-hand side. Size-1 subsets give the box constraint.
LinearInequality sum_inequality(const MarginalProfile& marginals,
                                const std::vector<int>& subset);

// The full outer-bound system: one weighted inequality per ordered
// permutation of every size, one sum inequality per subset of size >= 2.
// Count (nonnegativity excluded): 2^K - 1 + sum_{j=2..K} j! C(K,j).
Region build_region(const MarginalProfile& marginals);

// Symmetric specialization; produces the same constraint set as
// build_region on the constant profile.
Region build_symmetric_region(const Rational& lambda_p, const Rational& lambda_d,
                              int k);

// 2^K - 1 + sum_{j=2..K} j! C(K,j)
long expected_inequality_count(int k);

// Drops exact duplicates (same coefficients and rhs), keeping the first
// occurrence. build_region itself never produces duplicates; this is for
// regions assembled from several sources.
Region dedup_region(const Region& region);

}  // namespace misodof
