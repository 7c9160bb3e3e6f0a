#include <doctest.h>

#include <random>

#include "misodof/errors.hpp"
#include "misodof/pattern.hpp"
#include "misodof/rational.hpp"
#include "test_util.hpp"

using namespace misodof;
using namespace misodof::test;

TEST_CASE("rational arithmetic stays canonical") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(2, 3) + Rational(1, 6) == Rational(5, 6));
  CHECK((Rational(28, 11) / Rational(4)).str() == "7/11");
  CHECK(Rational(6, 3).str() == "2");
  CHECK(Rational(5, 3) > Rational(3, 2));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::invalid_argument);
}

TEST_CASE("rational parse round-trips") {
  for (const char* s : {"0", "1", "-3", "2/3", "-7/11", "28/11"}) {
    CHECK(Rational::parse(s).str() == s);
  }
  CHECK(Rational::parse("4/6") == Rational(2, 3));
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
}

TEST_CASE("harmonic sums") {
  CHECK(harmonic(1, 3) == Rational(11, 6));
  CHECK(harmonic(2, 3) == Rational(5, 6));
  CHECK(harmonic(2, 1) == Rational(0));
}

TEST_CASE("pattern parse and serialize") {
  const auto p = pat("PNN\nNPN\nNNP");
  CHECK(p.users() == 3);
  CHECK(p.slots() == 3);
  CHECK(p.state(0, 0) == CsitState::Perfect);
  CHECK(p.state(2, 1) == CsitState::None);
  CHECK(CsitPattern::parse(p.serialize()) == p);

  const auto single = pat("P");
  CHECK(single.users() == 1);
  CHECK(single.slots() == 1);

  // trailing newline is fine
  CHECK(pat("PD\nNP\n") == pat("PD\nNP"));
}

TEST_CASE("pattern parse errors carry the location") {
  try {
    pat("PX");
    FAIL("expected PatternParseError");
  } catch (const PatternParseError& e) {
    CHECK(e.row() == 1);
    CHECK(e.col() == 2);
  }
  try {
    pat("PNN\nNP");
    FAIL("expected PatternParseError");
  } catch (const PatternParseError& e) {
    CHECK(e.row() == 2);
  }
  CHECK_THROWS_AS(pat(""), PatternParseError);
}

TEST_CASE("marginals are exact column frequencies") {
  // Per-user counts (4P, 1D, 1N) over 6 slots in two different layouts.
  const auto aligned = pat("PPPPDN\nPPPPDN\nPPPPDN");
  const auto staggered = pat("PPPPDN\nPDNPPP\nDNPPPP");
  for (const auto& p : {aligned, staggered}) {
    const auto m = marginals_of(p);
    for (int u = 0; u < 3; ++u) {
      CHECK(m.user(u).p == Rational(2, 3));
      CHECK(m.user(u).d == Rational(1, 6));
      CHECK(m.user(u).n == Rational(1, 6));
    }
  }

  const auto diag = pat("PNN\nNPN\nNNP");
  const auto md = marginals_of(diag);
  for (int u = 0; u < 3; ++u) {
    CHECK(md.user(u).p == Rational(1, 3));
    CHECK(md.user(u).d == Rational(0));
    CHECK(md.user(u).n == Rational(2, 3));
  }

  const auto m1 = marginals_of(pat("P"));
  CHECK(m1.user(0).p == Rational(1));
  CHECK(m1.user(0).d == Rational(0));
  CHECK(m1.user(0).n == Rational(0));
}

TEST_CASE("joint mass census") {
  const auto diag = pat("PNN\nNPN\nNNP");      // staggered perfect CSIT
  const auto burst = pat("PNN\nPNN\nPNN");     // one all-P column
  const std::vector<StateSet> pair_pd = {
      StateSet::of({CsitState::Perfect, CsitState::Delayed}),
      StateSet::of({CsitState::Perfect, CsitState::Delayed}), StateSet::any()};

  CHECK(joint_mass(diag, pair_pd) == Rational(0));
  CHECK(joint_mass(burst, pair_pd) == Rational(1, 3));
  CHECK(joint_mass(diag, {StateSet::any(), StateSet::any(), StateSet::any()}) ==
        Rational(1));

  CHECK_THROWS_AS(joint_mass(diag, {StateSet::any(), StateSet::any()}),
                  std::invalid_argument);
}

TEST_CASE("joint mass properties") {
  std::mt19937 gen(20240811);
  std::uniform_int_distribution<int> users(1, 4), slots(1, 8), st(0, 2), coin(0, 1);
  for (int it = 0; it < 200; ++it) {
    const int k = users(gen), t = slots(gen);
    std::vector<CsitState> grid;
    const CsitState states[] = {CsitState::Perfect, CsitState::Delayed, CsitState::None};
    for (int i = 0; i < k * t; ++i) grid.push_back(states[st(gen)]);
    const CsitPattern p(k, t, grid);

    // Marginals agree with single-user joint masses.
    const auto m = marginals_of(p);
    Rational per_user_sum;
    for (int u = 0; u < k; ++u) {
      std::vector<StateSet> spec(k, StateSet::any());
      spec[u] = StateSet::of({CsitState::Perfect});
      CHECK(joint_mass(p, spec) == m.user(u).p);
      spec[u] = StateSet::of({CsitState::Delayed});
      CHECK(joint_mass(p, spec) == m.user(u).d);
      CHECK(m.user(u).p + m.user(u).d + m.user(u).n == Rational(1));
    }

    // Monotone under enlarging any user's admissible set.
    std::vector<StateSet> narrow(k), wide(k);
    for (int u = 0; u < k; ++u) {
      StateSet s{coin(gen) != 0, coin(gen) != 0, coin(gen) != 0};
      narrow[u] = s;
      StateSet w = s;
      w.p = w.p || coin(gen) != 0;
      w.d = w.d || coin(gen) != 0;
      w.n = w.n || coin(gen) != 0;
      wide[u] = w;
    }
    CHECK(joint_mass(p, narrow) <= joint_mass(p, wide));
  }
}

TEST_CASE("row permutation permutes marginals") {
  const auto p = pat("PPD\nDNN\nPNN");
  const auto m = marginals_of(p);
  // swap users 1 and 3
  const auto swapped = pat("PNN\nDNN\nPPD");
  const auto ms = marginals_of(swapped);
  CHECK(ms.user(0) == m.user(2));
  CHECK(ms.user(1) == m.user(1));
  CHECK(ms.user(2) == m.user(0));
  CHECK(m.permuted({2, 1, 0}) == ms);
}

TEST_CASE("average marginals") {
  // Column (P,P,D) then two all-N slots.
  const auto p = pat("PNN\nPNN\nDNN");
  const auto avg = average_marginals(marginals_of(p));
  CHECK(avg.p == Rational(2, 9));
  CHECK(avg.d == Rational(1, 9));
  CHECK(avg.n == Rational(6, 9));
}

TEST_CASE("marginal profile validation") {
  CHECK_THROWS_AS(MarginalProfile({{Rational(1, 2), Rational(1, 2), Rational(1, 2)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MarginalProfile({{Rational(-1, 2), Rational(1), Rational(1, 2)}}),
                  std::invalid_argument);
  CHECK_NOTHROW(MarginalProfile::symmetric(3, Rational(2, 3), Rational(1, 6)));
  CHECK_THROWS_AS(MarginalProfile::symmetric(3, Rational(2, 3), Rational(2, 3)),
                  std::invalid_argument);
}
