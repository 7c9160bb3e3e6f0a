#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace misodof {

// Arbitrary-precision rational. Always canonical: positive denominator,
// gcd(|num|, den) == 1. All probabilities and DoF bounds in this library
// are carried exactly; floating point appears only in the Monte Carlo
// simulator.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(int n) : q_(n) {}        // NOLINT: implicit on purpose
  Rational(long n) : q_(n) {}       // NOLINT
  Rational(long num, long den);
  explicit Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(mpq_class q);

  // Accepts "a/b" or "a" with optional sign. Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  const mpz_class& num() const { return q_.get_num(); }
  const mpz_class& den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  // "a/b", or just "a" when the denominator is 1. parse() round-trips.
  std::string str() const;
  double to_double() const { return q_.get_d(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Rational abs(const Rational& a) { return Rational(mpq_class(::abs(a.q_))); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class q_;
};

// Sum of 1/i for i in [from, to]; zero when the range is empty.
Rational harmonic(int from, int to);

// Lexicographic comparison of rational vectors.
bool lex_less(const std::vector<Rational>& a, const std::vector<Rational>& b);

}  // namespace misodof
