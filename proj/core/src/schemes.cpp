#include "misodof/schemes.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "misodof/errors.hpp"

namespace misodof {

namespace {

constexpr long kMaxSlots = 200000;

// Assembles a schedule slot by slot, deriving the CSIT pattern and the
// feedback ledger from what the slots actually demand: beamforming marks
// Perfect, a transmitter-side observation of a slot that was not Perfect
// marks Delayed and records a feedback.
class ScheduleBuilder {
 public:
  explicit ScheduleBuilder(int users) : users_(users) {
    if (users < 1) throw std::invalid_argument("ScheduleBuilder: users >= 1");
  }

  int fresh_data(std::vector<int> owners) {
    std::sort(owners.begin(), owners.end());
    symbols_.push_back({owners});
    Quantity q;
    q.kind = Quantity::Kind::data;
    q.symbol = static_cast<int>(symbols_.size()) - 1;
    quantities_.push_back(std::move(q));
    return static_cast<int>(quantities_.size()) - 1;
  }

  int observation(int user, int slot, std::vector<int> streams) {
    Quantity q;
    q.kind = Quantity::Kind::observation;
    q.observer = user;
    q.slot = slot;
    q.streams = std::move(streams);
    quantities_.push_back(std::move(q));
    if (cols_.at(slot).at(user) == CsitState::None) {
      cols_[slot][user] = CsitState::Delayed;
      feedback_.emplace_back(user, slot);
    }
    return static_cast<int>(quantities_.size()) - 1;
  }

  int whole_slot_observation(int user, int slot) {
    std::vector<int> streams(slots_.at(slot).streams.size());
    std::iota(streams.begin(), streams.end(), 0);
    return observation(user, slot, std::move(streams));
  }

  int mix(std::vector<Quantity::Term> terms) {
    Quantity q;
    q.kind = Quantity::Kind::mix;
    q.terms = std::move(terms);
    quantities_.push_back(std::move(q));
    return static_cast<int>(quantities_.size()) - 1;
  }

  int add_slot(SlotKind kind, std::vector<Stream> streams, std::vector<int> targets,
               std::string note = {}) {
    if (static_cast<long>(slots_.size()) >= kMaxSlots)
      throw std::invalid_argument("schedule would exceed the slot limit");
    Slot slot;
    slot.kind = kind;
    slot.streams = std::move(streams);
    slot.targets = std::move(targets);
    slot.note = std::move(note);
    cols_.emplace_back(users_, CsitState::None);
    for (const Stream& s : slot.streams) {
      for (int u : s.orth_users) cols_.back().at(u) = CsitState::Perfect;
    }
    slots_.push_back(std::move(slot));
    return static_cast<int>(slots_.size()) - 1;
  }

  Schedule finish() {
    std::vector<CsitState> grid(static_cast<size_t>(users_) * slots_.size());
    for (int u = 0; u < users_; ++u) {
      for (size_t t = 0; t < slots_.size(); ++t)
        grid[static_cast<size_t>(u) * slots_.size() + t] = cols_[t][u];
    }
    Schedule schedule{users_,
                      std::move(symbols_),
                      std::move(quantities_),
                      std::move(slots_),
                      CsitPattern(users_, static_cast<int>(cols_.size()), std::move(grid)),
                      std::move(feedback_)};
    schedule.validate();
    return schedule;
  }

 private:
  int users_;
  std::vector<DataSymbol> symbols_;
  std::vector<Quantity> quantities_;
  std::vector<Slot> slots_;
  std::vector<std::vector<CsitState>> cols_;
  std::vector<std::pair<int, int>> feedback_;
};

long to_long(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p())
    throw std::invalid_argument(std::string(what) + ": value too large");
  return z.get_si();
}

// Numerator/denominator of a probability as slot counts.
std::pair<long, long> as_fraction(const Rational& r, const char* what) {
  if (r < Rational(0) || r > Rational(1))
    throw std::invalid_argument(std::string(what) + ": probability outside [0,1]");
  const long num = to_long(r.num(), what);
  const long den = to_long(r.den(), what);
  if (den > kMaxSlots)
    throw std::invalid_argument(std::string(what) +
                                ": denominator too large to realize as a schedule");
  return {num, den};
}

std::vector<int> other_users(int k, int u) {
  std::vector<int> others;
  for (int v = 0; v < k; ++v)
    if (v != u) others.push_back(v);
  return others;
}

void add_zf_slot(ScheduleBuilder& sb, int k) {
  std::vector<Stream> streams;
  std::vector<int> targets;
  for (int u = 0; u < k; ++u) {
    streams.push_back({sb.fresh_data({u}), other_users(k, u)});
    targets.push_back(u);
  }
  sb.add_slot(SlotKind::zf, std::move(streams), std::move(targets));
}

std::string subset_str(const std::vector<int>& subset) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < subset.size(); ++i) {
    if (i) os << ",";
    os << subset[i] + 1;
  }
  os << "}";
  return os.str();
}

// All size-j subsets of `universe` (kept in the universe's order).
std::vector<std::vector<int>> subsets_of(const std::vector<int>& universe, int j) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(universe.size());
  std::vector<int> idx(j);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<int> s(j);
    for (int i = 0; i < j; ++i) s[i] = universe[idx[i]];
    out.push_back(std::move(s));
    int i = j - 1;
    while (i >= 0 && idx[i] == n - j + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int r = i + 1; r < j; ++r) idx[r] = idx[r - 1] + 1;
  }
  return out;
}

long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

long binom(int n, int r) {
  long b = 1;
  for (int i = 0; i < r; ++i) b = b * (n - i) / (i + 1);
  return b;
}

// Appends the MAT cascade over `users` (phases start_order..|users|)
// with per-phase execution counts `reps`, consuming `inputs` as the
// order-start pool. The pool for each subset must hold exactly
// reps[0] * (j' - start + 1) quantities where j' = |users|.
void append_mat_cascade(ScheduleBuilder& sb, const std::vector<int>& users,
                        int start_order, const std::vector<long>& reps,
                        std::map<std::vector<int>, std::deque<int>>& pools) {
  const int j = static_cast<int>(users.size());
  for (int p = start_order; p <= j; ++p) {
    const long n_exec = reps[p - start_order];
    const auto subs = subsets_of(users, p);
    const auto super = p < j ? subsets_of(users, p + 1) : std::vector<std::vector<int>>{};
    for (long e = 0; e < n_exec; ++e) {
      std::map<std::vector<int>, int> slot_of;
      for (const auto& s : subs) {
        std::vector<Stream> streams;
        auto& pool = pools[s];
        const int take = j - p + 1;
        if (static_cast<int>(pool.size()) < take)
          throw std::logic_error("MAT ledger underflow at phase " + std::to_string(p));
        for (int i = 0; i < take; ++i) {
          streams.push_back({pool.front(), {}});
          pool.pop_front();
        }
        std::ostringstream note;
        note << "phase " << p << " S=" << subset_str(s) << " exec " << e + 1;
        slot_of[s] = sb.add_slot(SlotKind::mat_phase, std::move(streams), s, note.str());
      }
      // Overheard compression: the p+1 observations of each
      // (p+1)-subset collapse into p fresh order-(p+1) messages.
      for (const auto& t : super) {
        std::vector<int> obs_ids;
        for (int q : t) {
          std::vector<int> s;
          for (int v : t)
            if (v != q) s.push_back(v);
          obs_ids.push_back(sb.whole_slot_observation(q, slot_of.at(s)));
        }
        for (int m = 0; m < p; ++m) {
          std::vector<Quantity::Term> terms;
          for (int oid : obs_ids) terms.push_back({oid, true, Rational(1)});
          pools[t].push_back(sb.mix(std::move(terms)));
        }
      }
    }
  }
  for (const auto& [subset, pool] : pools) {
    if (!pool.empty())
      throw std::logic_error("MAT ledger imbalance: " + std::to_string(pool.size()) +
                             " undelivered messages for subset " + subset_str(subset));
  }
}

// Minimal integer execution counts for phases start..j of a j-user MAT:
// proportional to (p-1)!(j-p)!, divided by their gcd.
std::vector<long> minimal_reps(int j, int start_order) {
  std::vector<long> reps;
  for (int p = start_order; p <= j; ++p) reps.push_back(factorial(p - 1) * factorial(j - p));
  long g = 0;
  for (long r : reps) g = std::gcd(g, r);
  for (long& r : reps) r /= g;
  return reps;
}

}  // namespace

SchemeOutput case_a_corner_scheme(int k, const Rational& lambda_p, int favored_user) {
  if (k < 1) throw std::invalid_argument("case_a_corner_scheme: K >= 1 required");
  if (favored_user < 0 || favored_user >= k)
    throw std::invalid_argument("case_a_corner_scheme: favored user out of range");
  const auto [a, b] = as_fraction(lambda_p, "case_a_corner_scheme");

  ScheduleBuilder sb(k);
  for (long t = 0; t < a; ++t) add_zf_slot(sb, k);
  for (long t = a; t < b; ++t) {
    sb.add_slot(SlotKind::single_user, {{sb.fresh_data({favored_user}), {}}},
                {favored_user});
  }
  Schedule schedule = sb.finish();
  SchemeResult result = account(schedule);

  for (int u = 0; u < k; ++u) {
    const Rational expect = (u == favored_user) ? Rational(1) : lambda_p;
    if (result.dof[u] != expect)
      throw std::logic_error("case_a_corner_scheme: accounting mismatch");
  }
  return SchemeOutput{std::move(schedule), std::move(result)};
}

Schedule mat_schedule(int k, int start_order) {
  if (k < 1 || k > 8)
    throw std::invalid_argument("mat_schedule: K must be in 1..8");
  if (start_order < 1 || start_order > k)
    throw std::invalid_argument("mat_schedule: start order must be in 1..K");

  std::vector<int> users(k);
  std::iota(users.begin(), users.end(), 0);

  std::vector<long> reps;
  for (int p = start_order; p <= k; ++p)
    reps.push_back(factorial(p - 1) * factorial(k - p) * k);

  ScheduleBuilder sb(k);
  std::map<std::vector<int>, std::deque<int>> pools;
  for (const auto& s : subsets_of(users, start_order)) {
    const long count = reps[0] * (k - start_order + 1);
    for (long i = 0; i < count; ++i) pools[s].push_back(sb.fresh_data(s));
  }
  append_mat_cascade(sb, users, start_order, reps, pools);
  return sb.finish();
}

Rational mat_min_delay(int k, int j) {
  if (k < 1) throw std::invalid_argument("mat_min_delay: K >= 1 required");
  if (j < 1 || j > k) throw std::invalid_argument("mat_min_delay: j must be in 1..K");
  return Rational(1) - Rational(k - j + 1) / (Rational(k) * harmonic(j, k));
}

Rational delayed_census(const Schedule& schedule) {
  long d_cells = 0;
  for (int u = 0; u < schedule.users; ++u) {
    for (int t = 0; t < schedule.pattern.slots(); ++t) {
      if (schedule.pattern.state(u, t) == CsitState::Delayed) ++d_cells;
    }
  }
  return Rational(d_cells, schedule.total_slots() * schedule.users);
}

std::vector<MatPhaseInfo> mat_phase_breakdown(int k, int start_order) {
  if (start_order < 1 || start_order > k)
    throw std::invalid_argument("mat_phase_breakdown: j must be in 1..K");
  std::vector<MatPhaseInfo> out;
  for (int p = start_order; p <= k; ++p) {
    MatPhaseInfo info;
    info.phase = p;
    info.executions = factorial(p - 1) * factorial(k - p) * k;
    info.slots = info.executions * binom(k, p);
    info.feedbacks = info.slots * (k - p);
    info.inputs = info.executions * (k - p + 1) * binom(k, p);
    info.outputs = (p < k) ? info.executions * p * binom(k, p + 1) : 0;
    out.push_back(info);
  }
  return out;
}

SchemeOutput hybrid_corner_scheme(const Rational& lambda_p, const Rational& lambda_d,
                                  int k, std::vector<int> subset) {
  if (k < 1) throw std::invalid_argument("hybrid_corner_scheme: K >= 1 required");
  std::sort(subset.begin(), subset.end());
  if (subset.empty() || std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw std::invalid_argument("hybrid_corner_scheme: subset must be nonempty and distinct");
  if (subset.front() < 0 || subset.back() >= k)
    throw std::invalid_argument("hybrid_corner_scheme: subset user out of range");
  if (lambda_p < Rational(0) || lambda_d < Rational(0) ||
      lambda_p + lambda_d > Rational(1))
    throw std::invalid_argument("hybrid_corner_scheme: invalid probabilities");

  const int j = static_cast<int>(subset.size());
  const Rational lambda_n = Rational(1) - lambda_p - lambda_d;
  const Rational h_tail = harmonic(2, j);
  if (j >= 2 && lambda_n * h_tail > lambda_d) {
    std::ostringstream cond;
    cond << "lambda_N <= lambda_D / (sum_{i=2}^{" << j << "} 1/i): " << lambda_n.str()
         << " <= " << lambda_d.str() << " / " << h_tail.str();
    throw InfeasibleSchemeError(
        "hybrid_corner_scheme: delayed-CSIT budget too small for |S| = " +
            std::to_string(j),
        cond.str());
  }

  const auto [a, b] = as_fraction(lambda_p, "hybrid_corner_scheme");
  const std::vector<long> reps = minimal_reps(j, 1);
  long frame_slots = 0;
  for (int p = 1; p <= j; ++p) frame_slots += reps[p - 1] * binom(j, p);
  if (b * frame_slots > kMaxSlots)
    throw std::invalid_argument("hybrid_corner_scheme: schedule too large");

  ScheduleBuilder sb(k);
  for (long t = 0; t < a * frame_slots; ++t) add_zf_slot(sb, k);
  for (long f = 0; f < b - a; ++f) {
    std::map<std::vector<int>, std::deque<int>> pools;
    for (const auto& s : subsets_of(subset, 1)) {
      for (long i = 0; i < reps[0] * j; ++i) pools[s].push_back(sb.fresh_data(s));
    }
    append_mat_cascade(sb, subset, 1, reps, pools);
  }

  Schedule schedule = sb.finish();
  SchemeResult result = account(schedule);

  const Rational h_full = harmonic(1, j);
  const Rational inside = (Rational(1) + lambda_p * h_tail) / h_full;
  for (int u = 0; u < k; ++u) {
    const bool in_s = std::binary_search(subset.begin(), subset.end(), u);
    const Rational expect = in_s ? inside : lambda_p;
    if (result.dof[u] != expect)
      throw std::logic_error("hybrid_corner_scheme: accounting mismatch");
  }
  // The realized delayed demand must fit the stated budget.
  for (int u : subset) {
    long d_cells = 0;
    for (int t = 0; t < schedule.pattern.slots(); ++t) {
      if (schedule.pattern.state(u, t) == CsitState::Delayed) ++d_cells;
    }
    if (Rational(d_cells, schedule.total_slots()) > lambda_d)
      throw std::logic_error("hybrid_corner_scheme: delayed budget exceeded");
  }
  return SchemeOutput{std::move(schedule), std::move(result)};
}

SchemeOutput overheard_retransmission_scheme() {
  ScheduleBuilder sb(3);
  const int u1a = sb.fresh_data({0}), u1b = sb.fresh_data({0});
  const int u2a = sb.fresh_data({1}), u2b = sb.fresh_data({1});
  const int u3 = sb.fresh_data({2});

  // Slot 1: two streams to user 1 orthogonal to h2, two streams to
  // user 2 orthogonal to h1, one stream to user 3 orthogonal to both.
  sb.add_slot(SlotKind::zf,
              {{u1a, {1}}, {u1b, {1}}, {u2a, {0}}, {u2b, {0}}, {u3, {0, 1}}},
              {0, 1, 2}, "mutually zero-forced pair plus complement stream");

  // Slots 2-3: resend the two mixes user 3 overheard in slot 1; each is
  // user 3's interference and simultaneously the missing equation of
  // user 1 resp. user 2.
  const int l1 = sb.observation(2, 0, {0, 1});
  sb.add_slot(SlotKind::resend, {{l1, {}}}, {0, 2}, "overheard mix of user 1's streams");
  const int l2 = sb.observation(2, 0, {2, 3});
  sb.add_slot(SlotKind::resend, {{l2, {}}}, {1, 2}, "overheard mix of user 2's streams");

  Schedule schedule = sb.finish();
  SchemeResult result = account(schedule);
  return SchemeOutput{std::move(schedule), std::move(result)};
}

SchemeOutput alternating_order2_scheme() {
  ScheduleBuilder sb(3);
  const auto cyc = [](int t) { return t % 3; };

  // Twelve pair slots. In each two-slot block the user fed back in the
  // first slot pairs with the user fed back in the second; each slot
  // carries two fresh symbols for the block partner.
  std::vector<int> pair_msg;                 // order-2 message per block
  std::vector<std::vector<int>> pair_owner;  // its two owners
  for (int m = 0; m < 6; ++m) {
    const int s1 = 2 * m, s2 = 2 * m + 1;
    const int d1 = cyc(s1), d2 = cyc(s2);
    sb.add_slot(SlotKind::single_user,
                {{sb.fresh_data({d2}), {}}, {sb.fresh_data({d2}), {}}}, {d2},
                "pair block " + std::to_string(m + 1));
    sb.add_slot(SlotKind::single_user,
                {{sb.fresh_data({d1}), {}}, {sb.fresh_data({d1}), {}}}, {d1},
                "pair block " + std::to_string(m + 1));
    const int o1 = sb.whole_slot_observation(d1, s1);
    const int o2 = sb.whole_slot_observation(d2, s2);
    pair_msg.push_back(sb.mix({{o1, false, Rational(1)}, {o2, false, Rational(1)}}));
    std::vector<int> owners{d1, d2};
    std::sort(owners.begin(), owners.end());
    pair_owner.push_back(owners);
  }

  // MAT tail: three order-2 slots (one delayed user each, continuing the
  // cycle), then two order-3 slots needing no CSIT.
  std::vector<int> tail_obs;
  for (int i = 0; i < 3; ++i) {
    const int outside = cyc(12 + i);
    std::vector<int> s = other_users(3, outside);
    std::vector<Stream> streams;
    for (int m = 0; m < 6; ++m) {
      if (pair_owner[m] == s) streams.push_back({pair_msg[m], {}});
    }
    const int slot = sb.add_slot(SlotKind::mat_phase, std::move(streams), s,
                                 "order-2 delivery S=" + subset_str(s));
    tail_obs.push_back(sb.whole_slot_observation(outside, slot));
  }
  for (int m = 0; m < 2; ++m) {
    std::vector<Quantity::Term> terms;
    for (int oid : tail_obs) terms.push_back({oid, true, Rational(1)});
    sb.add_slot(SlotKind::mat_phase, {{sb.mix(std::move(terms)), {}}}, {0, 1, 2},
                "order-3 delivery");
  }

  Schedule schedule = sb.finish();
  SchemeResult result = account(schedule);
  if (result.sum_dof() != Rational(24, 17))
    throw std::logic_error("alternating_order2_scheme: accounting mismatch");
  return SchemeOutput{std::move(schedule), std::move(result)};
}

SchemeOutput single_user_scheme(int k, int user, int slots) {
  if (k < 1 || user < 0 || user >= k)
    throw std::invalid_argument("single_user_scheme: user out of range");
  if (slots < 1) throw std::invalid_argument("single_user_scheme: slots >= 1");
  ScheduleBuilder sb(k);
  for (int t = 0; t < slots; ++t)
    sb.add_slot(SlotKind::single_user, {{sb.fresh_data({user}), {}}}, {user});
  Schedule schedule = sb.finish();
  SchemeResult result = account(schedule);
  return SchemeOutput{std::move(schedule), std::move(result)};
}

}  // namespace misodof
