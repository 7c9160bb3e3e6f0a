#include "misodof/region_builder.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace misodof {

namespace {

void check_perm(const MarginalProfile& marginals, const PermutationSpec& perm) {
  if (perm.empty()) throw std::invalid_argument("empty permutation");
  std::set<int> seen;
  for (int u : perm) {
    if (u < 0 || u >= marginals.size())
      throw std::invalid_argument("permutation index out of range");
    if (!seen.insert(u).second)
      throw std::invalid_argument("duplicate index in permutation");
  }
}

std::string index_list(const PermutationSpec& perm, char open, char close) {
  std::ostringstream os;
  os << open;
  for (size_t i = 0; i < perm.size(); ++i) {
    if (i) os << ",";
    os << (perm[i] + 1);
  }
  os << close;
  return os.str();
}

// All size-j subsets of {0..k-1} in lexicographic order.
void for_each_subset(int k, int j, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> subset(j);
  for (int i = 0; i < j; ++i) subset[i] = i;
  while (true) {
    fn(subset);
    int i = j - 1;
    while (i >= 0 && subset[i] == k - j + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int r = i + 1; r < j; ++r) subset[r] = subset[r - 1] + 1;
  }
}

}  // namespace

LinearInequality weighted_inequality(const MarginalProfile& marginals,
                                     const PermutationSpec& perm) {
  check_perm(marginals, perm);
  const int k = marginals.size();
  const int j = static_cast<int>(perm.size());

  LinearInequality ineq;
  ineq.coeffs.assign(k, Rational(0));
  for (int i = 1; i <= j; ++i) ineq.coeffs[perm[i - 1]] = Rational(1, i);

  Rational rhs(1);
  Rational prefix_p;  // sum_{r<i} lambda_P of the permuted users
  for (int i = 2; i <= j; ++i) {
    prefix_p += marginals.user(perm[i - 2]).p;
    rhs += prefix_p / Rational(static_cast<long>(i) * (i - 1));
  }
  ineq.rhs = rhs;
  ineq.family = (j == 1) ? Family::box : Family::weighted;
  ineq.label = (j == 1) ? "d" + std::to_string(perm[0] + 1) + "<=1"
                        : "w" + index_list(perm, '(', ')');
  return ineq;
}

PermutationSpec psi_order(const MarginalProfile& marginals, std::vector<int> subset) {
  check_perm(marginals, subset);
  std::sort(subset.begin(), subset.end(), [&](int a, int b) {
    const Rational pa = marginals.user(a).pd();
    const Rational pb = marginals.user(b).pd();
    if (pa != pb) return pa < pb;
    return a < b;
  });
  return subset;
}

LinearInequality sum_inequality(const MarginalProfile& marginals,
                                const std::vector<int>& subset) {
  const PermutationSpec psi = psi_order(marginals, subset);
  const int k = marginals.size();
  const int j = static_cast<int>(psi.size());

  LinearInequality ineq;
  ineq.coeffs.assign(k, Rational(0));
  for (int u : psi) ineq.coeffs[u] = Rational(1);

  Rational rhs(1);
  for (int i = 0; i + 1 < j; ++i) rhs += marginals.user(psi[i]).pd();
  ineq.rhs = rhs;
  ineq.family = (j == 1) ? Family::box : Family::sum;

  std::vector<int> sorted(subset);
  std::sort(sorted.begin(), sorted.end());
  ineq.label = (j == 1) ? "d" + std::to_string(subset[0] + 1) + "<=1"
                        : "s" + index_list(sorted, '{', '}');
  return ineq;
}

Region build_region(const MarginalProfile& marginals) {
  const int k = marginals.size();
  Region region;
  region.dim = k;

  // Weighted family: every ordered permutation of every size. Size 1 is
  // the box d_i <= 1.
  for (int j = 1; j <= k; ++j) {
    for_each_subset(k, j, [&](const std::vector<int>& subset) {
      std::vector<int> perm(subset);
      do {
        region.add(weighted_inequality(marginals, perm));
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
  }

  // Sum family: one inequality per subset of size >= 2 (the psi ordering
  // already minimizes over the j! permutations of the subset).
  for (int j = 2; j <= k; ++j) {
    for_each_subset(k, j, [&](const std::vector<int>& subset) {
      region.add(sum_inequality(marginals, subset));
    });
  }
  return region;
}

Region build_symmetric_region(const Rational& lambda_p, const Rational& lambda_d,
                              int k) {
  if (lambda_p < Rational(0) || lambda_d < Rational(0) ||
      lambda_p + lambda_d > Rational(1))
    throw std::invalid_argument("build_symmetric_region: probabilities out of range");
  return build_region(MarginalProfile::symmetric(k, lambda_p, lambda_d));
}

long expected_inequality_count(int k) {
  long count = (1L << k) - 1;
  for (int j = 2; j <= k; ++j) {
    long fact = 1;
    for (int i = 2; i <= j; ++i) fact *= i;
    long binom = 1;
    for (int i = 0; i < j; ++i) binom = binom * (k - i) / (i + 1);
    count += fact * binom;
  }
  return count;
}

Region dedup_region(const Region& region) {
  Region out;
  out.dim = region.dim;
  for (const auto& ineq : region.ineqs) {
    bool dup = false;
    for (const auto& kept : out.ineqs) {
      if (kept.same_constraint(ineq)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.add(ineq);
  }
  return out;
}

}  // namespace misodof
