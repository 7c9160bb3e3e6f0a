#pragma once

#include <string>
#include <vector>

#include "misodof/rational.hpp"

namespace misodof {

// A DoF tuple. All coordinates are >= 0 wherever a DofPoint is produced
// as a result (vertices, scheme accounting); intermediate candidates in
// the polytope machinery may be filtered out before that holds.
using DofPoint = std::vector<Rational>;

enum class Family { box, weighted, sum, pattern };

std::string family_name(Family f);

// One halfspace: coeffs . d <= rhs. The family records where the
// constraint came from; label carries the permutation/subset detail with
// 1-based user indices, e.g. "w(1,2,3)" or "s{2,3}".
struct LinearInequality {
  std::vector<Rational> coeffs;
  Rational rhs;
  Family family = Family::weighted;
  std::string label;

  Rational lhs_at(const DofPoint& d) const;
  bool satisfied(const DofPoint& d) const { return lhs_at(d) <= rhs; }

  // Same halfspace, ignoring family/label.
  bool same_constraint(const LinearInequality& o) const {
    return coeffs == o.coeffs && rhs == o.rhs;
  }

  std::string str() const;  // human-readable, e.g. "d1 + 1/2 d2 <= 4/3"
};

// An H-representation over DoF space. Nonnegativity d_i >= 0 is implicit
// and always part of the geometry.
struct Region {
  int dim = 0;
  std::vector<LinearInequality> ineqs;

  void add(LinearInequality ineq);  // validates dimension, not-all-zero
};

}  // namespace misodof
