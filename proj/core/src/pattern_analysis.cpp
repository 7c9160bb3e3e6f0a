#include "misodof/pattern_analysis.hpp"

#include <stdexcept>

#include "misodof/polytope.hpp"
#include "misodof/region_builder.hpp"

namespace misodof {

LinearInequality pattern_weighted_inequality(const CsitPattern& pattern,
                                             const PatternInequalitySpec& spec) {
  if (pattern.users() != 3)
    throw std::invalid_argument("pattern_weighted_inequality: stated for K = 3 only");
  const int a = spec.heavy_a, b = spec.heavy_b;
  if (a == b || a < 0 || b < 0 || a >= 3 || b >= 3)
    throw std::invalid_argument("pattern_weighted_inequality: bad heavy pair");

  const MarginalProfile marginals = marginals_of(pattern);
  std::vector<StateSet> mass_spec(3, StateSet::any());
  mass_spec[a] = StateSet::of({CsitState::Perfect, CsitState::Delayed});
  mass_spec[b] = StateSet::of({CsitState::Perfect, CsitState::Delayed});
  const Rational joint = joint_mass(pattern, mass_spec);

  LinearInequality ineq;
  ineq.coeffs.assign(3, Rational(1));
  ineq.coeffs[a] = Rational(2);
  ineq.coeffs[b] = Rational(2);
  ineq.rhs = Rational(2) + marginals.user(a).pd() + marginals.user(b).pd() + joint;
  ineq.family = Family::pattern;
  ineq.label = "p(" + std::to_string(std::min(a, b) + 1) + "," +
               std::to_string(std::max(a, b) + 1) + ")";
  return ineq;
}

Region tightened_region(const CsitPattern& pattern) {
  if (pattern.users() != 3)
    throw std::invalid_argument("tightened_region: stated for K = 3 only");
  Region region = build_region(marginals_of(pattern));
  region.add(pattern_weighted_inequality(pattern, {0, 1}));
  region.add(pattern_weighted_inequality(pattern, {0, 2}));
  region.add(pattern_weighted_inequality(pattern, {1, 2}));
  return region;
}

std::string relation_name(RegionRelation r) {
  switch (r) {
    case RegionRelation::equal: return "equal";
    case RegionRelation::r1_strict_subset: return "r1 strictly inside r2";
    case RegionRelation::r2_strict_subset: return "r2 strictly inside r1";
    case RegionRelation::incomparable: return "incomparable";
  }
  return "?";
}

namespace {

// Lexicographically greatest vertex of `probe` outside `target`, with
// the first constraint it violates.
std::optional<std::pair<DofPoint, std::string>> outside_witness(
    const std::vector<DofPoint>& probe_vertices, const Region& target) {
  std::optional<DofPoint> best;
  std::string violated;
  for (const auto& v : probe_vertices) {
    const auto check = contains(target, v);
    if (check.inside) continue;
    if (!best || lex_less(*best, v)) {
      best = v;
      violated = check.violated.empty() ? "d_i >= 0"
                                        : target.ineqs[check.violated.front()].str();
    }
  }
  if (!best) return std::nullopt;
  return std::make_pair(*best, violated);
}

void require_bounded(const Region& region, const char* name) {
  std::vector<Rational> e(region.dim, Rational(0));
  for (int i = 0; i < region.dim; ++i) {
    e[i] = Rational(1);
    if (lp_max(region, e).status != LpStatus::optimal)
      throw std::invalid_argument(std::string("compare_regions: ") + name +
                                  " is unbounded");
    e[i] = Rational(0);
  }
}

}  // namespace

CompareResult compare_regions(const Region& r1, const Region& r2) {
  if (r1.dim != r2.dim)
    throw std::invalid_argument("compare_regions: dimension mismatch");
  require_bounded(r1, "r1");
  require_bounded(r2, "r2");

  const auto v1 = vertices(r1);
  const auto v2 = vertices(r2);
  const auto w1 = outside_witness(v1, r2);  // r1 not inside r2
  const auto w2 = outside_witness(v2, r1);  // r2 not inside r1

  CompareResult result;
  if (!w1 && !w2) {
    result.relation = RegionRelation::equal;
    return result;
  }
  if (w1) {
    result.separator_r1_not_in_r2 = w1->first;
  }
  if (w2) {
    result.separator_r2_not_in_r1 = w2->first;
  }
  if (!w1) {
    result.relation = RegionRelation::r1_strict_subset;
    result.separator = w2->first;
    result.violated = w2->second;
  } else if (!w2) {
    result.relation = RegionRelation::r2_strict_subset;
    result.separator = w1->first;
    result.violated = w1->second;
  } else {
    result.relation = RegionRelation::incomparable;
    result.separator = w1->first;
    result.violated = w1->second;
  }
  return result;
}

}  // namespace misodof
