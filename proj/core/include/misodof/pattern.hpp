#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "misodof/rational.hpp"

namespace misodof {

// Transmitter-side channel knowledge for one user in one slot:
// Perfect (current CSI), Delayed (fed back after the slot), or None.
enum class CsitState : char { Perfect = 'P', Delayed = 'D', None = 'N' };

char to_char(CsitState s);
CsitState state_from_char(char c);  // throws std::invalid_argument

// A users x slots grid of CSIT states, interpreted cyclically: long-run
// joint probabilities are column frequencies.
class CsitPattern {
 public:
  CsitPattern(int users, int slots, std::vector<CsitState> grid);

  // One line per user over {P,D,N}; all lines the same length.
  // Throws PatternParseError with 1-based row/column on bad input.
  static CsitPattern parse(std::string_view text);
  std::string serialize() const;

  int users() const { return users_; }
  int slots() const { return slots_; }
  CsitState state(int user, int slot) const;

  // The column multiset is what all derived statistics depend on.
  std::vector<CsitState> column(int slot) const;

  bool operator==(const CsitPattern&) const = default;

 private:
  int users_;
  int slots_;
  std::vector<CsitState> grid_;  // row-major
};

struct UserMarginals {
  Rational p, d, n;
  Rational pd() const { return p + d; }
  bool operator==(const UserMarginals&) const = default;
};

// Per-user exact probabilities (lambda_P, lambda_D, lambda_N), each in
// [0,1] and summing to 1. Accepted either directly or derived from a
// pattern.
class MarginalProfile {
 public:
  explicit MarginalProfile(std::vector<UserMarginals> users);
  static MarginalProfile symmetric(int k, const Rational& lambda_p,
                                   const Rational& lambda_d);

  int size() const { return static_cast<int>(users_.size()); }
  const UserMarginals& user(int i) const { return users_.at(i); }

  MarginalProfile permuted(const std::vector<int>& perm) const;

  bool operator==(const MarginalProfile&) const = default;

 private:
  std::vector<UserMarginals> users_;
};

// Column-frequency marginals of a pattern, exact.
MarginalProfile marginals_of(const CsitPattern& pattern);

// Mean of the per-user marginals; the "pattern average" rendering used
// when a whole pattern is summarized by one triple.
UserMarginals average_marginals(const MarginalProfile& profile);

// Admissible-state set for one user in a joint-mass query. any() is the
// wildcard ("the CSIT of this user is not important").
struct StateSet {
  bool p = false;
  bool d = false;
  bool n = false;

  static StateSet any() { return {true, true, true}; }
  static StateSet of(std::initializer_list<CsitState> states);
  bool contains(CsitState s) const;
  bool is_wildcard() const { return p && d && n; }
};

// Fraction of slots whose column matches `spec` in every non-wildcard
// position. `spec` must have exactly pattern.users() entries.
Rational joint_mass(const CsitPattern& pattern, const std::vector<StateSet>& spec);

}  // namespace misodof
