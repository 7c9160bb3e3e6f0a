#pragma once

#include <vector>

#include "misodof/region.hpp"

namespace misodof {

enum class LpStatus { optimal, unbounded, infeasible };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  Rational value;
  DofPoint optimizer;  // empty unless status == optimal
};

// Exact maximum of objective . d over {d >= 0} intersected with the
// region. Bland's least-index pivot rule throughout, so identical inputs
// give identical optimizers. When status is optimal the optimizer is
// verified to satisfy every constraint and attain the value, exactly.
LpResult lp_max(const Region& region, const std::vector<Rational>& objective);

struct ContainsResult {
  bool inside = false;
  std::vector<int> violated;  // indices into region.ineqs
  bool negative_coordinate = false;
};

ContainsResult contains(const Region& region, const DofPoint& point);

// Inequality i is redundant iff maximizing its left side subject to all
// the others (and d >= 0) yields a value <= its rhs.
bool is_redundant(const Region& region, int index);

// Irredundant subsystem defining the same set. Inequalities are dropped
// in index order, each tested against the ones still present, so of two
// identical constraints exactly one survives.
Region remove_redundant(const Region& region);

// All extreme points of {d >= 0} n region, each once, sorted
// lexicographically. Exhaustive K-subset enumeration with exact solves;
// guarded to K <= 4 (throws DimensionGuardError above that).
std::vector<DofPoint> vertices(const Region& region);

// flags[i] is true when no other point dominates points[i]
// componentwise.
std::vector<bool> pareto_maximal_flags(const std::vector<DofPoint>& points);

}  // namespace misodof
