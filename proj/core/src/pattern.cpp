#include "misodof/pattern.hpp"

#include <sstream>
#include <stdexcept>

#include "misodof/errors.hpp"

namespace misodof {

char to_char(CsitState s) { return static_cast<char>(s); }

CsitState state_from_char(char c) {
  switch (c) {
    case 'P': return CsitState::Perfect;
    case 'D': return CsitState::Delayed;
    case 'N': return CsitState::None;
    default:
      throw std::invalid_argument(std::string("not a CSIT state: '") + c + "'");
  }
}

CsitPattern::CsitPattern(int users, int slots, std::vector<CsitState> grid)
    : users_(users), slots_(slots), grid_(std::move(grid)) {
  if (users_ < 1 || slots_ < 1)
    throw std::invalid_argument("CsitPattern: need at least one user and one slot");
  if (grid_.size() != static_cast<size_t>(users_) * slots_)
    throw std::invalid_argument("CsitPattern: grid size does not match dimensions");
}

CsitPattern CsitPattern::parse(std::string_view text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(current);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  if (lines.empty()) throw PatternParseError("empty pattern", 1, 1);

  const size_t width = lines[0].size();
  std::vector<CsitState> grid;
  for (size_t r = 0; r < lines.size(); ++r) {
    if (lines[r].size() != width) {
      throw PatternParseError(
          "ragged pattern: line " + std::to_string(r + 1) + " has length " +
              std::to_string(lines[r].size()) + ", expected " + std::to_string(width),
          static_cast<int>(r + 1),
          static_cast<int>(std::min(lines[r].size(), width) + 1));
    }
    for (size_t c = 0; c < width; ++c) {
      const char ch = lines[r][c];
      if (ch != 'P' && ch != 'D' && ch != 'N') {
        throw PatternParseError(std::string("illegal character '") + ch +
                                    "' (expected P, D or N)",
                                static_cast<int>(r + 1), static_cast<int>(c + 1));
      }
      grid.push_back(state_from_char(ch));
    }
  }
  if (width == 0) throw PatternParseError("empty pattern line", 1, 1);
  return CsitPattern(static_cast<int>(lines.size()), static_cast<int>(width),
                     std::move(grid));
}

std::string CsitPattern::serialize() const {
  std::string out;
  out.reserve(static_cast<size_t>(users_) * (slots_ + 1));
  for (int u = 0; u < users_; ++u) {
    for (int t = 0; t < slots_; ++t) out.push_back(to_char(state(u, t)));
    if (u + 1 < users_) out.push_back('\n');
  }
  return out;
}

CsitState CsitPattern::state(int user, int slot) const {
  if (user < 0 || user >= users_ || slot < 0 || slot >= slots_)
    throw std::out_of_range("CsitPattern::state: index out of range");
  return grid_[static_cast<size_t>(user) * slots_ + slot];
}

std::vector<CsitState> CsitPattern::column(int slot) const {
  std::vector<CsitState> col(users_);
  for (int u = 0; u < users_; ++u) col[u] = state(u, slot);
  return col;
}

MarginalProfile::MarginalProfile(std::vector<UserMarginals> users)
    : users_(std::move(users)) {
  if (users_.empty()) throw std::invalid_argument("MarginalProfile: no users");
  const Rational zero(0), one(1);
  for (size_t i = 0; i < users_.size(); ++i) {
    const auto& u = users_[i];
    for (const Rational* v : {&u.p, &u.d, &u.n}) {
      if (*v < zero || *v > one)
        throw std::invalid_argument("MarginalProfile: probability of user " +
                                    std::to_string(i + 1) + " outside [0,1]");
    }
    if (u.p + u.d + u.n != one)
      throw std::invalid_argument("MarginalProfile: probabilities of user " +
                                  std::to_string(i + 1) + " do not sum to 1");
  }
}

MarginalProfile MarginalProfile::symmetric(int k, const Rational& lambda_p,
                                           const Rational& lambda_d) {
  if (k < 1) throw std::invalid_argument("MarginalProfile::symmetric: K >= 1");
  UserMarginals u{lambda_p, lambda_d, Rational(1) - lambda_p - lambda_d};
  return MarginalProfile(std::vector<UserMarginals>(k, u));
}

MarginalProfile MarginalProfile::permuted(const std::vector<int>& perm) const {
  if (perm.size() != users_.size())
    throw std::invalid_argument("MarginalProfile::permuted: size mismatch");
  std::vector<UserMarginals> out(users_.size());
  // perm maps new index -> old index
  for (size_t i = 0; i < perm.size(); ++i) out[i] = users_.at(perm[i]);
  return MarginalProfile(std::move(out));
}

MarginalProfile marginals_of(const CsitPattern& pattern) {
  const long t = pattern.slots();
  std::vector<UserMarginals> users;
  users.reserve(pattern.users());
  for (int u = 0; u < pattern.users(); ++u) {
    long np = 0, nd = 0, nn = 0;
    for (int s = 0; s < t; ++s) {
      switch (pattern.state(u, s)) {
        case CsitState::Perfect: ++np; break;
        case CsitState::Delayed: ++nd; break;
        case CsitState::None: ++nn; break;
      }
    }
    users.push_back({Rational(np, t), Rational(nd, t), Rational(nn, t)});
  }
  return MarginalProfile(std::move(users));
}

UserMarginals average_marginals(const MarginalProfile& profile) {
  Rational p, d, n;
  for (int i = 0; i < profile.size(); ++i) {
    p += profile.user(i).p;
    d += profile.user(i).d;
    n += profile.user(i).n;
  }
  const Rational k(profile.size());
  return {p / k, d / k, n / k};
}

StateSet StateSet::of(std::initializer_list<CsitState> states) {
  StateSet s;
  for (CsitState st : states) {
    switch (st) {
      case CsitState::Perfect: s.p = true; break;
      case CsitState::Delayed: s.d = true; break;
      case CsitState::None: s.n = true; break;
    }
  }
  return s;
}

bool StateSet::contains(CsitState s) const {
  switch (s) {
    case CsitState::Perfect: return p;
    case CsitState::Delayed: return d;
    case CsitState::None: return n;
  }
  return false;
}

Rational joint_mass(const CsitPattern& pattern, const std::vector<StateSet>& spec) {
  if (static_cast<int>(spec.size()) != pattern.users())
    throw std::invalid_argument("joint_mass: spec covers " +
                                std::to_string(spec.size()) + " users, pattern has " +
                                std::to_string(pattern.users()));
  long hits = 0;
  for (int t = 0; t < pattern.slots(); ++t) {
    bool match = true;
    for (int u = 0; u < pattern.users(); ++u) {
      if (!spec[u].contains(pattern.state(u, t))) {
        match = false;
        break;
      }
    }
    if (match) ++hits;
  }
  return Rational(hits, pattern.slots());
}

}  // namespace misodof
