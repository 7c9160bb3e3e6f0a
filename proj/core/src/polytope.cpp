#include "misodof/polytope.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

#include "misodof/errors.hpp"

namespace misodof {

namespace {

// Condensed (Tucker) tableau primal simplex over exact rationals.
// Maximizes c.x subject to A x <= b, x >= 0. Variable ids: structurals
// 0..n-1, slacks n..n+m-1, phase-one auxiliary n+m. Bland's least-index
// rule for both entering and leaving variables.
class Simplex {
 public:
  Simplex(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
          std::vector<Rational> c)
      : m_(static_cast<int>(a.size())),
        n_(static_cast<int>(c.size())),
        rows_(std::move(a)),
        rhs_(std::move(b)),
        obj_(std::move(c)) {
    basic_.resize(m_);
    nonbasic_.resize(n_);
    for (int i = 0; i < m_; ++i) basic_[i] = n_ + i;
    for (int j = 0; j < n_; ++j) nonbasic_[j] = j;
  }

  LpStatus solve() {
    if (needs_phase_one()) {
      if (!phase_one()) return LpStatus::infeasible;
    }
    return optimize() ? LpStatus::optimal : LpStatus::unbounded;
  }

  Rational value() const { return value_; }

  std::vector<Rational> structural_solution() const {
    std::vector<Rational> x(n_, Rational(0));
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] < n_) x[basic_[i]] = rhs_[i];
    }
    return x;
  }

 private:
  bool needs_phase_one() const {
    for (const auto& b : rhs_)
      if (b.sign() < 0) return true;
    return false;
  }

  void pivot(int r, int c) {
    const Rational p = rows_[r][c];
    const Rational inv_p = Rational(1) / p;
    for (int j = 0; j < width(); ++j)
      if (j != c) rows_[r][j] *= inv_p;
    rhs_[r] *= inv_p;
    rows_[r][c] = inv_p;

    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Rational f = rows_[i][c];
      if (f.is_zero()) continue;
      for (int j = 0; j < width(); ++j)
        if (j != c) rows_[i][j] -= f * rows_[r][j];
      rhs_[i] -= f * rhs_[r];
      rows_[i][c] = -f * inv_p;
    }

    const Rational f = obj_[c];
    if (!f.is_zero()) {
      for (int j = 0; j < width(); ++j)
        if (j != c) obj_[j] -= f * rows_[r][j];
      value_ += f * rhs_[r];
      obj_[c] = -f * inv_p;
    }
    std::swap(basic_[r], nonbasic_[c]);
  }

  int width() const { return static_cast<int>(nonbasic_.size()); }

  // Entering column by Bland: smallest variable id with positive reduced
  // cost. Returns -1 at optimality.
  int entering() const {
    int best = -1, best_var = 0;
    for (int j = 0; j < width(); ++j) {
      if (obj_[j].sign() > 0 && (best < 0 || nonbasic_[j] < best_var)) {
        best = j;
        best_var = nonbasic_[j];
      }
    }
    return best;
  }

  // Leaving row: minimum ratio, ties by smallest basic variable id.
  // Returns -1 when the column is unbounded.
  int leaving(int c) const {
    int best = -1;
    Rational best_ratio;
    for (int i = 0; i < m_; ++i) {
      if (rows_[i][c].sign() <= 0) continue;
      Rational ratio = rhs_[i] / rows_[i][c];
      if (best < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basic_[i] < basic_[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  bool optimize() {
    while (true) {
      const int c = entering();
      if (c < 0) return true;
      const int r = leaving(c);
      if (r < 0) return false;
      pivot(r, c);
    }
  }

  bool phase_one() {
    const int aux = n_ + m_;
    // Auxiliary column: x_aux appears with coefficient -1 in every row.
    for (auto& row : rows_) row.push_back(Rational(-1));
    nonbasic_.push_back(aux);
    const std::vector<Rational> saved_obj = std::move(obj_);
    obj_.assign(width(), Rational(0));
    obj_.back() = Rational(-1);  // maximize -x_aux
    value_ = Rational(0);

    // Special first pivot: enter x_aux against the most negative rhs.
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (rhs_[i] < rhs_[r] || (rhs_[i] == rhs_[r] && basic_[i] < basic_[r])) r = i;
    }
    pivot(r, width() - 1);
    optimize();  // bounded by construction (x_aux >= 0)
    if (value_.sign() < 0) return false;

    // Drive the auxiliary variable out of the basis if it lingers at 0.
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] != aux) continue;
      int col = -1;
      for (int j = 0; j < width(); ++j) {
        if (nonbasic_[j] == aux) continue;
        if (!rows_[i][j].is_zero() && (col < 0 || nonbasic_[j] < nonbasic_[col]))
          col = j;
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        // All-zero row: the auxiliary sits at value 0 on a vacuous
        // constraint; drop the row.
        rows_.erase(rows_.begin() + i);
        rhs_.erase(rhs_.begin() + i);
        basic_.erase(basic_.begin() + i);
        --m_;
      }
      break;
    }

    // Remove the auxiliary column if it is nonbasic.
    int aux_col = -1;
    for (int j = 0; j < width(); ++j)
      if (nonbasic_[j] == aux) aux_col = j;
    if (aux_col >= 0) {
      for (auto& row : rows_) row.erase(row.begin() + aux_col);
      nonbasic_.erase(nonbasic_.begin() + aux_col);
    }

    // Re-express the original objective over the current nonbasic set.
    obj_.assign(width(), Rational(0));
    value_ = Rational(0);
    for (int v = 0; v < n_; ++v) {
      const Rational& cv = saved_obj[v];
      if (cv.is_zero()) continue;
      bool handled = false;
      for (int j = 0; j < width(); ++j) {
        if (nonbasic_[j] == v) {
          obj_[j] += cv;
          handled = true;
          break;
        }
      }
      if (handled) continue;
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] == v) {
          value_ += cv * rhs_[i];
          for (int j = 0; j < width(); ++j) obj_[j] -= cv * rows_[i][j];
          break;
        }
      }
    }
    return true;
  }

  int m_, n_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<Rational> obj_;
  Rational value_;
  std::vector<int> basic_;
  std::vector<int> nonbasic_;
};

Region drop_inequality(const Region& region, int index) {
  Region out;
  out.dim = region.dim;
  for (int i = 0; i < static_cast<int>(region.ineqs.size()); ++i)
    if (i != index) out.ineqs.push_back(region.ineqs[i]);
  return out;
}

}  // namespace

LpResult lp_max(const Region& region, const std::vector<Rational>& objective) {
  if (static_cast<int>(objective.size()) != region.dim)
    throw std::invalid_argument("lp_max: objective dimension mismatch");

  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  a.reserve(region.ineqs.size());
  for (const auto& ineq : region.ineqs) {
    a.push_back(ineq.coeffs);
    b.push_back(ineq.rhs);
  }

  Simplex simplex(std::move(a), std::move(b), objective);
  LpResult result;
  result.status = simplex.solve();
  if (result.status != LpStatus::optimal) return result;

  result.value = simplex.value();
  result.optimizer = simplex.structural_solution();

  // Exact self-check: the optimizer is feasible and attains the value.
  Rational attained;
  for (int i = 0; i < region.dim; ++i) {
    if (result.optimizer[i].sign() < 0)
      throw std::logic_error("lp_max: negative coordinate in optimizer");
    attained += objective[i] * result.optimizer[i];
  }
  if (attained != result.value)
    throw std::logic_error("lp_max: optimizer does not attain the optimum");
  for (const auto& ineq : region.ineqs) {
    if (!ineq.satisfied(result.optimizer))
      throw std::logic_error("lp_max: optimizer violates a constraint");
  }
  return result;
}

ContainsResult contains(const Region& region, const DofPoint& point) {
  if (static_cast<int>(point.size()) != region.dim)
    throw std::invalid_argument("contains: point dimension mismatch");
  ContainsResult result;
  for (const auto& c : point) {
    if (c.sign() < 0) result.negative_coordinate = true;
  }
  for (int i = 0; i < static_cast<int>(region.ineqs.size()); ++i) {
    if (!region.ineqs[i].satisfied(point)) result.violated.push_back(i);
  }
  result.inside = result.violated.empty() && !result.negative_coordinate;
  return result;
}

bool is_redundant(const Region& region, int index) {
  if (index < 0 || index >= static_cast<int>(region.ineqs.size()))
    throw std::invalid_argument("is_redundant: index out of range");
  const LinearInequality& target = region.ineqs[index];
  const LpResult lp = lp_max(drop_inequality(region, index), target.coeffs);
  if (lp.status == LpStatus::unbounded) return false;
  if (lp.status == LpStatus::infeasible)
    return true;  // the rest is already empty; nothing to cut
  return lp.value <= target.rhs;
}

Region remove_redundant(const Region& region) {
  Region current = region;
  int i = 0;
  while (i < static_cast<int>(current.ineqs.size())) {
    if (is_redundant(current, i)) {
      current.ineqs.erase(current.ineqs.begin() + i);
    } else {
      ++i;
    }
  }
  return current;
}

namespace {

// Incremental echelon state for the K-subset enumeration. Rows are
// (coeffs | rhs); a row is accepted only if it adds rank on the
// coefficient part.
struct Echelon {
  std::vector<std::vector<Rational>> rows;  // reduced rows
  std::vector<int> pivot_col;

  std::optional<std::vector<Rational>> reduce(std::vector<Rational> row, int k) const {
    for (size_t r = 0; r < rows.size(); ++r) {
      const Rational& f = row[pivot_col[r]];
      if (f.is_zero()) continue;
      const Rational scale = f / rows[r][pivot_col[r]];
      for (int j = 0; j <= k; ++j) row[j] -= scale * rows[r][j];
    }
    for (int j = 0; j < k; ++j) {
      if (!row[j].is_zero()) return row;  // rank increases; pivot at first nonzero
    }
    return std::nullopt;
  }
};

std::optional<DofPoint> back_substitute(const Echelon& e, int k) {
  DofPoint x(k, Rational(0));
  // Rows are mutually reduced on earlier pivots only; solve in reverse
  // pivot order.
  std::vector<int> order(e.rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return e.pivot_col[a] > e.pivot_col[b]; });
  for (int idx : order) {
    const auto& row = e.rows[idx];
    const int pc = e.pivot_col[idx];
    Rational acc = row[k];
    for (int j = pc + 1; j < k; ++j) {
      if (!row[j].is_zero()) acc -= row[j] * x[j];
    }
    x[pc] = acc / row[pc];
  }
  return x;
}

}  // namespace

std::vector<DofPoint> vertices(const Region& region) {
  const int k = region.dim;
  if (k > 4)
    throw DimensionGuardError(
        "vertices: exact enumeration is limited to K <= 4 (got K = " +
        std::to_string(k) + "); use lp_max queries instead");

  // The irredundant subsystem defines the same set and keeps the subset
  // enumeration tractable.
  const Region reduced = remove_redundant(region);

  // Constraint rows (coeffs | rhs): the inequalities plus d_i >= 0.
  std::vector<std::vector<Rational>> all_rows;
  for (const auto& ineq : reduced.ineqs) {
    std::vector<Rational> row = ineq.coeffs;
    row.push_back(ineq.rhs);
    all_rows.push_back(std::move(row));
  }
  for (int i = 0; i < k; ++i) {
    std::vector<Rational> row(k + 1, Rational(0));
    row[i] = Rational(-1);
    all_rows.push_back(std::move(row));
  }

  std::map<DofPoint, bool> candidates;  // point -> seen (dedup before feasibility)
  const int total = static_cast<int>(all_rows.size());

  // Depth-first over K-subsets with shared elimination prefixes.
  std::vector<Echelon> stack(k + 1);
  auto recurse = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      if (auto point = back_substitute(stack[depth], k)) candidates.emplace(*point, true);
      return;
    }
    for (int i = start; i < total - (k - depth - 1); ++i) {
      auto reduced_row = stack[depth].reduce(all_rows[i], k);
      if (!reduced_row) continue;
      Echelon& next = stack[depth + 1];
      next = stack[depth];
      int pc = 0;
      while ((*reduced_row)[pc].is_zero()) ++pc;
      next.pivot_col.push_back(pc);
      next.rows.push_back(std::move(*reduced_row));
      self(self, i + 1, depth + 1);
    }
  };
  recurse(recurse, 0, 0);

  std::vector<DofPoint> result;
  for (const auto& [point, _] : candidates) {
    bool feasible = true;
    for (const auto& c : point) {
      if (c.sign() < 0) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      for (const auto& ineq : reduced.ineqs) {
        if (!ineq.satisfied(point)) {
          feasible = false;
          break;
        }
      }
    }
    if (feasible) result.push_back(point);
  }
  std::sort(result.begin(), result.end(),
            [](const DofPoint& a, const DofPoint& b) { return lex_less(a, b); });
  return result;
}

std::vector<bool> pareto_maximal_flags(const std::vector<DofPoint>& points) {
  std::vector<bool> flags(points.size(), true);
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = 0; j < points.size() && flags[i]; ++j) {
      if (i == j) continue;
      bool geq_all = true, gt_some = false;
      for (size_t c = 0; c < points[i].size(); ++c) {
        if (points[j][c] < points[i][c]) geq_all = false;
        if (points[j][c] > points[i][c]) gt_some = true;
      }
      if (geq_all && gt_some) flags[i] = false;
    }
  }
  return flags;
}

}  // namespace misodof
