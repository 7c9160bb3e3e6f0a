#include "misodof/region.hpp"

#include <sstream>
#include <stdexcept>

namespace misodof {

std::string family_name(Family f) {
  switch (f) {
    case Family::box: return "box";
    case Family::weighted: return "weighted-family";
    case Family::sum: return "sum-family";
    case Family::pattern: return "pattern-family";
  }
  return "?";
}

Rational LinearInequality::lhs_at(const DofPoint& d) const {
  if (d.size() != coeffs.size())
    throw std::invalid_argument("LinearInequality: dimension mismatch");
  Rational acc;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (!coeffs[i].is_zero()) acc += coeffs[i] * d[i];
  }
  return acc;
}

std::string LinearInequality::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    if (!first) os << " + ";
    if (coeffs[i] != Rational(1)) os << coeffs[i].str() << " ";
    os << "d" << (i + 1);
    first = false;
  }
  if (first) os << "0";
  os << " <= " << rhs.str();
  return os.str();
}

void Region::add(LinearInequality ineq) {
  if (static_cast<int>(ineq.coeffs.size()) != dim)
    throw std::invalid_argument("Region::add: dimension mismatch");
  bool all_zero = true;
  for (const auto& c : ineq.coeffs) {
    if (!c.is_zero()) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) throw std::invalid_argument("Region::add: all-zero coefficients");
  ineqs.push_back(std::move(ineq));
}

}  // namespace misodof
