#include <doctest.h>

#include <random>

#include "misodof/pattern_analysis.hpp"
#include "misodof/polytope.hpp"
#include "misodof/region_builder.hpp"
#include "test_util.hpp"

using namespace misodof;
using namespace misodof::test;

namespace {

const char* kStaggered = "PNN\nNPN\nNNP";  // one perfect user per slot
const char* kBurst = "PNN\nPNN\nPNN";      // all perfect in slot 1

}  // namespace

TEST_CASE("joint-probability inequality values") {
  CHECK(pattern_weighted_inequality(pat(kStaggered), {0, 1}).rhs == rat("8/3"));
  CHECK(pattern_weighted_inequality(pat(kBurst), {0, 1}).rhs == Rational(3));
  CHECK(pattern_weighted_inequality(pat("NNN\nNNN\nNNN"), {0, 2}).rhs == Rational(2));
  CHECK(pattern_weighted_inequality(pat("PPP\nPPP\nPPP"), {1, 2}).rhs == Rational(5));

  const auto ineq = pattern_weighted_inequality(pat(kStaggered), {2, 1});
  CHECK(ineq.coeffs == std::vector<Rational>{Rational(1), Rational(2), Rational(2)});

  CHECK_THROWS_AS(pattern_weighted_inequality(pat("PN\nNP"), {0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pattern_weighted_inequality(pat(kStaggered), {1, 1}),
                  std::invalid_argument);
}

TEST_CASE("tightened region cuts the staggered pattern") {
  const auto tight_b = tightened_region(pat(kStaggered));
  CHECK_FALSE(contains(tight_b, point({"1", "1/3", "1/3"})).inside);

  // For the burst pattern the joint constraints are redundant: the
  // region equals the marginal outer bound.
  const auto tight_a = tightened_region(pat(kBurst));
  const auto outer = build_region(marginals_of(pat(kBurst)));
  const auto cmp = compare_regions(tight_a, outer);
  CHECK(cmp.relation == RegionRelation::equal);
  for (size_t i = 0; i < tight_a.ineqs.size(); ++i) {
    if (tight_a.ineqs[i].family == Family::pattern)
      CHECK(is_redundant(tight_a, static_cast<int>(i)));
  }

  // The all-perfect pattern keeps the all-ones point.
  CHECK(contains(tightened_region(pat("PPP\nPPP\nPPP")), point({"1", "1", "1"})).inside);
}

TEST_CASE("same marginals, strictly different regions") {
  const auto a = pat(kBurst), b = pat(kStaggered);
  CHECK(marginals_of(a) == marginals_of(b));

  const auto cmp = compare_regions(tightened_region(b), tightened_region(a));
  CHECK(cmp.relation == RegionRelation::r1_strict_subset);
  REQUIRE(cmp.separator.has_value());
  CHECK(*cmp.separator == point({"1", "1/3", "1/3"}));
  CHECK(cmp.violated.find("<= 8/3") != std::string::npos);
}

TEST_CASE("comparison edge cases") {
  const auto r = tightened_region(pat(kStaggered));
  CHECK(compare_regions(r, r).relation == RegionRelation::equal);

  // Mirror-asymmetric profiles cross: each contains a point the other
  // excludes ((1,1/2,0) vs (1/2,1,0)).
  const auto left = build_region(profile({{"1", "0"}, {"0", "1"}, {"0", "0"}}));
  const auto right = build_region(profile({{"0", "1"}, {"1", "0"}, {"0", "0"}}));
  const auto cmp = compare_regions(left, right);
  CHECK(cmp.relation == RegionRelation::incomparable);
  REQUIRE(cmp.separator_r1_not_in_r2.has_value());
  REQUIRE(cmp.separator_r2_not_in_r1.has_value());
  CHECK_FALSE(contains(right, *cmp.separator_r1_not_in_r2).inside);
  CHECK(contains(left, *cmp.separator_r1_not_in_r2).inside);
  CHECK_FALSE(contains(left, *cmp.separator_r2_not_in_r1).inside);

  Region low;
  low.dim = 2;
  CHECK_THROWS_AS(compare_regions(low, build_region(profile({{"1", "0"}}))),
                  std::invalid_argument);
}

TEST_CASE("symmetric 2/3-perfect profile strictly dominates the 7/4 profile") {
  // Every vertex of the asymmetric no-delay region satisfies the
  // symmetric (2/3, 1/6) system, while the symmetric region's center
  // (28/33, 28/33, 28/33) breaks the asymmetric weighted bound 5/4.
  const auto sym = build_region(MarginalProfile::symmetric(3, rat("2/3"), rat("1/6")));
  const auto asym = build_region(profile({{"1/4", "0"}, {"1/2", "0"}, {"1", "0"}}));
  const DofPoint center = point({"28/33", "28/33", "28/33"});
  CHECK(contains(sym, center).inside);
  CHECK_FALSE(contains(asym, center).inside);

  const auto cmp = compare_regions(sym, asym);
  CHECK(cmp.relation == RegionRelation::r2_strict_subset);
}

TEST_CASE("tightened region is always inside the marginal outer bound") {
  std::mt19937 gen(37);
  std::uniform_int_distribution<int> slots(1, 6), st(0, 2);
  const CsitState states[] = {CsitState::Perfect, CsitState::Delayed, CsitState::None};
  for (int it = 0; it < 40; ++it) {
    const int t = slots(gen);
    std::vector<CsitState> grid;
    for (int i = 0; i < 3 * t; ++i) grid.push_back(states[st(gen)]);
    const CsitPattern p(3, t, grid);

    const auto tight = tightened_region(p);
    const auto outer = build_region(marginals_of(p));
    for (const auto& v : vertices(tight)) CHECK(contains(outer, v).inside);

    // Joint masses never exceed either pair marginal; hence each
    // pattern rhs is bounded by the pair bound plus the unminimized
    // triple bound.
    const auto m = marginals_of(p);
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        const auto ineq = pattern_weighted_inequality(p, {a, b});
        std::vector<StateSet> spec(3, StateSet::any());
        spec[a] = StateSet::of({CsitState::Perfect, CsitState::Delayed});
        spec[b] = StateSet::of({CsitState::Perfect, CsitState::Delayed});
        const Rational mass = joint_mass(p, spec);
        CHECK(mass <= std::min(m.user(a).pd(), m.user(b).pd()));
        const Rational pair_bound = Rational(1) + std::min(m.user(a).pd(), m.user(b).pd());
        const Rational triple_excl_c = Rational(1) + m.user(a).pd() + m.user(b).pd();
        CHECK(ineq.rhs <= pair_bound + triple_excl_c);
      }
    }
  }
}

TEST_CASE("slot order does not matter") {
  const auto base = pat("PDN\nNPD\nDNP");
  // Columns (1,2,0) of base.
  std::vector<CsitState> grid(9);
  for (int i = 0; i < 3; ++i) {
    const auto col = base.column((i + 1) % 3);
    for (int u = 0; u < 3; ++u) grid[u * 3 + i] = col[u];
  }
  const CsitPattern shuffled(3, 3, grid);

  const auto r1 = tightened_region(base);
  const auto r2 = tightened_region(shuffled);
  CHECK(compare_regions(r1, r2).relation == RegionRelation::equal);
}
