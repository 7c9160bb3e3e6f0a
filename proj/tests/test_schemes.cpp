#include <doctest.h>

#include "misodof/errors.hpp"
#include "misodof/polytope.hpp"
#include "misodof/region_builder.hpp"
#include "misodof/schemes.hpp"
#include "test_util.hpp"

using namespace misodof;
using namespace misodof::test;

TEST_CASE("case A corner schedule census") {
  const auto s = case_a_corner_scheme(3, rat("1/3"), 0);
  CHECK(s.result.dof == point({"1", "1/3", "1/3"}));
  CHECK(s.result.slots == 3);
  CHECK(s.result.decoded == std::vector<long>{3, 1, 1});

  // Realized pattern: one all-P ZF slot, then N.
  const auto m = marginals_of(s.result.realized);
  for (int u = 0; u < 3; ++u) {
    CHECK(m.user(u).p == rat("1/3"));
    CHECK(m.user(u).d == Rational(0));
  }

  CHECK(case_a_corner_scheme(3, Rational(1), 2).result.dof ==
        point({"1", "1", "1"}));
  CHECK(case_a_corner_scheme(2, rat("1/2"), 1).result.dof == point({"1/2", "1"}));
  CHECK_THROWS_AS(case_a_corner_scheme(3, rat("1/3"), 5), std::invalid_argument);
}

TEST_CASE("MAT schedule bookkeeping, K = 3") {
  const auto schedule = mat_schedule(3, 1);
  const auto breakdown = mat_phase_breakdown(3, 1);
  REQUIRE(breakdown.size() == 3);
  CHECK(breakdown[0].slots == 18);
  CHECK(breakdown[1].slots == 9);
  CHECK(breakdown[2].slots == 6);
  CHECK(schedule.total_slots() == 33);
  CHECK(schedule.symbols.size() == 54);

  const auto result = account(schedule);
  CHECK(result.sum_dof() == rat("18/11"));
  CHECK(result.dof == point({"6/11", "6/11", "6/11"}));
  CHECK(delayed_census(schedule) == rat("5/11"));
}

TEST_CASE("each MAT phase-p slot needs exactly K-p delayed feedbacks") {
  const auto schedule = mat_schedule(3, 1);
  for (int t = 0; t < schedule.pattern.slots(); ++t) {
    int d_count = 0;
    for (int u = 0; u < 3; ++u)
      if (schedule.pattern.state(u, t) == CsitState::Delayed) ++d_count;
    const int expected = t < 18 ? 2 : (t < 27 ? 1 : 0);
    CHECK(d_count == expected);
    CHECK(static_cast<int>(schedule.slots[t].targets.size()) == 3 - expected);
  }
}

TEST_CASE("MAT schedule bookkeeping, K = 2") {
  const auto schedule = mat_schedule(2, 1);
  CHECK(schedule.total_slots() == 6);
  CHECK(schedule.symbols.size() == 8);
  CHECK(account(schedule).sum_dof() == rat("4/3"));
  CHECK(delayed_census(schedule) == rat("1/3"));
}

TEST_CASE("MAT starting at the top order needs no feedback") {
  for (int k = 1; k <= 4; ++k) {
    const auto schedule = mat_schedule(k, k);
    CHECK(schedule.feedback.empty());
    CHECK(delayed_census(schedule) == Rational(0));
    for (const auto& slot : schedule.slots)
      CHECK(static_cast<int>(slot.targets.size()) == k);
  }
}

TEST_CASE("minimum delayed-CSIT probability matches the schedule census") {
  CHECK(mat_min_delay(3, 1) == rat("5/11"));
  CHECK(mat_min_delay(2, 1) == rat("1/3"));
  for (int k = 1; k <= 6; ++k) CHECK(mat_min_delay(k, k) == Rational(0));

  for (int k = 1; k <= 6; ++k) {
    for (int j = 1; j <= k; ++j) {
      CHECK(delayed_census(mat_schedule(k, j)) == mat_min_delay(k, j));
    }
  }
  CHECK_THROWS_AS(mat_min_delay(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(mat_min_delay(3, 4), std::invalid_argument);
}

TEST_CASE("MAT sum DoF is K over the K-th harmonic number") {
  for (int k = 1; k <= 5; ++k) {
    const auto result = account(mat_schedule(k, 1));
    CHECK(result.sum_dof() == Rational(k) / harmonic(1, k));
  }
}

TEST_CASE("MAT phase ledger balances") {
  for (int k = 2; k <= 6; ++k) {
    for (int j = 1; j <= k; ++j) {
      const auto phases = mat_phase_breakdown(k, j);
      for (size_t i = 0; i + 1 < phases.size(); ++i)
        CHECK(phases[i].outputs == phases[i + 1].inputs);
      // Construction would throw on any pool imbalance; building it is
      // itself the ledger check.
      if (k <= 5) CHECK_NOTHROW(mat_schedule(k, j));
    }
  }
}

TEST_CASE("hybrid corner scheme") {
  // K=3, S={1,2}, lambda_P = lambda_D = 1/3: DoF ((2+1/3)/3, ., 1/3).
  const auto pair = hybrid_corner_scheme(rat("1/3"), rat("1/3"), 3, {0, 1});
  CHECK(pair.result.dof == point({"7/9", "7/9", "1/3"}));

  // Full subset at lambda_P = 0 is plain MAT.
  const auto mat = hybrid_corner_scheme(Rational(0), Rational(1), 3, {0, 1, 2});
  CHECK(mat.result.dof == point({"6/11", "6/11", "6/11"}));

  // No delayed budget at all: any |S| >= 2 is infeasible.
  CHECK_THROWS_AS(hybrid_corner_scheme(rat("1/3"), Rational(0), 3, {0, 1}),
                  InfeasibleSchemeError);
  try {
    hybrid_corner_scheme(rat("1/3"), Rational(0), 3, {0, 1});
  } catch (const InfeasibleSchemeError& e) {
    CHECK(e.failed_condition().find("lambda_N <= lambda_D") != std::string::npos);
  }

  // |S| = 1 needs no delayed CSIT and matches the case-A corner.
  const auto single = hybrid_corner_scheme(rat("1/3"), Rational(0), 3, {1});
  CHECK(single.result.dof == point({"1/3", "1", "1/3"}));
}

TEST_CASE("hybrid delayed demand stays within budget") {
  const auto s = hybrid_corner_scheme(rat("1/4"), rat("1/2"), 3, {0, 1, 2});
  const auto m = marginals_of(s.result.realized);
  for (int u = 0; u < 3; ++u) {
    CHECK(m.user(u).d <= rat("1/2"));
    CHECK(m.user(u).p == rat("1/4"));
  }
}

TEST_CASE("overheard retransmission example") {
  const auto s = overheard_retransmission_scheme();
  CHECK(s.result.dof == point({"2/3", "2/3", "1/3"}));
  CHECK(s.result.sum_dof() == rat("5/3"));
  CHECK(s.result.slots == 3);

  // Pattern: column (P,P,D), then all-N.
  CHECK(s.schedule.pattern == pat("PNN\nPNN\nDNN"));
  const auto avg = average_marginals(marginals_of(s.result.realized));
  CHECK(avg.p == rat("2/9"));
  CHECK(avg.d == rat("1/9"));
  CHECK(avg.n == rat("6/9"));

  // The sum bound at these marginals is met with equality.
  const auto bound = sum_inequality(marginals_of(s.result.realized), {0, 1, 2});
  CHECK(bound.rhs == rat("5/3"));
  CHECK(bound.lhs_at(s.result.dof) == bound.rhs);
}

TEST_CASE("alternating order-2 example") {
  const auto s = alternating_order2_scheme();
  CHECK(s.result.sum_dof() == rat("24/17"));
  CHECK(s.result.slots == 17);
  CHECK(s.result.decoded == std::vector<long>{8, 8, 8});
  CHECK(s.schedule.symbols.size() == 24);

  // Realized marginals: no perfect CSIT, one delayed user in 15 of 17
  // slots, cycling.
  const auto m = marginals_of(s.result.realized);
  for (int u = 0; u < 3; ++u) {
    CHECK(m.user(u).p == Rational(0));
    CHECK(m.user(u).d == rat("5/17"));
  }

  // The fixed-CSIT counterpart is capped at sum DoF 1 and reaches it
  // with single-user transmission.
  const auto fixed = marginals_of(pat("DDD\nNNN\nNNN"));
  CHECK(sum_inequality(fixed, {0, 1, 2}).rhs == Rational(1));
  const auto su = single_user_scheme(3, 0, 1);
  CHECK(su.result.sum_dof() == Rational(1));
  CHECK(contains(build_region(fixed), su.result.dof).inside);
}

TEST_CASE("scheme DoF lies inside the outer bound of its realized pattern") {
  const auto check_inside = [](const SchemeOutput& s) {
    const auto region = build_region(marginals_of(s.result.realized));
    CHECK(contains(region, s.result.dof).inside);
  };
  check_inside(case_a_corner_scheme(3, rat("1/3"), 0));
  check_inside(case_a_corner_scheme(2, rat("3/5"), 1));
  check_inside(hybrid_corner_scheme(rat("1/3"), rat("1/3"), 3, {0, 1}));
  check_inside(hybrid_corner_scheme(Rational(0), Rational(1), 3, {0, 1, 2}));
  check_inside(overheard_retransmission_scheme());
  check_inside(alternating_order2_scheme());
  check_inside(single_user_scheme(4, 2, 2));

  const auto mat_result = account(mat_schedule(3, 1));
  CHECK(contains(build_region(marginals_of(mat_result.realized)), mat_result.dof).inside);
}

TEST_CASE("schedule validation catches tampering") {
  auto s = overheard_retransmission_scheme().schedule;
  CHECK_NOTHROW(s.validate());

  // Downgrade the fed-back cell to N: the resends become impossible.
  auto broken = s;
  std::vector<CsitState> grid;
  for (int u = 0; u < 3; ++u)
    for (int t = 0; t < 3; ++t)
      grid.push_back(u == 2 && t == 0 ? CsitState::None : s.pattern.state(u, t));
  broken.pattern = CsitPattern(3, 3, grid);
  broken.feedback.clear();
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);

  // Feedback ledger out of sync with the pattern.
  auto desynced = s;
  desynced.feedback.clear();
  CHECK_THROWS_AS(desynced.validate(), std::invalid_argument);
}

TEST_CASE("removing an observed slot invalidates its uses") {
  const auto s = overheard_retransmission_scheme().schedule;
  // Dropping the last resend orphans one observation but stays valid.
  CHECK_NOTHROW(s.without_slot(2).validate());
  // Dropping the observed slot dangles the resends themselves.
  CHECK_THROWS_AS(s.without_slot(0).validate(), std::invalid_argument);
}

TEST_CASE("schedule JSON serialization carries the ledgers") {
  const auto s = overheard_retransmission_scheme().schedule;
  const std::string doc = s.to_json();
  CHECK(doc.find("\"pattern\"") != std::string::npos);
  CHECK(doc.find("PNN") != std::string::npos);
  CHECK(doc.find("\"feedback\"") != std::string::npos);
  CHECK(doc.find("\"observation\"") != std::string::npos);
}

TEST_CASE("conservation: decoded counts equal the symbol ledger") {
  for (const auto& s :
       {case_a_corner_scheme(3, rat("2/5"), 1), overheard_retransmission_scheme(),
        alternating_order2_scheme()}) {
    std::vector<long> counts(s.schedule.users, 0);
    for (const auto& sym : s.schedule.symbols)
      for (int u : sym.owners) ++counts[u];
    CHECK(counts == s.result.decoded);
    CHECK(s.result.message_order == 1);
  }
}
