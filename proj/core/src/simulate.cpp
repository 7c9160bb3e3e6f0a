#include "misodof/simulate.hpp"

#include <algorithm>
#include <armadillo>
#include <cmath>
#include <random>
#include <stdexcept>

namespace misodof {

namespace {

constexpr double kRankThreshold = 1e-6;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using cxd = std::complex<double>;

struct Rng {
  std::mt19937_64 gen;
  std::normal_distribution<double> normal{0.0, 1.0};

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  cxd gaussian() {  // CN(0, 1)
    const double re = normal(gen) / std::sqrt(2.0);
    const double im = normal(gen) / std::sqrt(2.0);
    return {re, im};
  }

  arma::cx_vec gaussian_vec(int n) {
    arma::cx_vec v(n);
    for (int i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }
};

// Rank against a common scale: singular values above
// kRankThreshold * sigma_ref count. sigma_ref is the largest singular
// value of the user's full equation system, so interference that was
// zero-forced down to rounding noise is rank zero.
int matrix_rank(const arma::cx_mat& x, double sigma_ref) {
  if (x.n_rows == 0 || x.n_cols == 0 || sigma_ref <= 0.0) return 0;
  arma::vec sv = arma::svd(x);
  const double cutoff = kRankThreshold * sigma_ref;
  return static_cast<int>(arma::sum(sv > cutoff));
}

double largest_sv(const arma::cx_mat& x) {
  if (x.n_rows == 0 || x.n_cols == 0) return 0.0;
  arma::vec sv = arma::svd(x);
  return sv.n_elem > 0 ? sv(0) : 0.0;
}

// One realized trial of a schedule: per-user observation rows over the
// data symbols.
struct TrialRealization {
  std::vector<arma::cx_mat> user_rows;  // K matrices, slots x symbols
  std::vector<std::vector<int>> own_cols;
  std::vector<std::vector<int>> other_cols;
};

TrialRealization realize(const Schedule& schedule, int antennas, std::uint64_t seed) {
  const int k = schedule.users;
  const int t_total = static_cast<int>(schedule.slots.size());
  const int n_sym = static_cast<int>(schedule.symbols.size());
  Rng rng(seed);

  // All channels first, in a fixed order: h[user](slot) in C^M.
  std::vector<std::vector<arma::cx_vec>> h(k);
  for (int u = 0; u < k; ++u) {
    h[u].reserve(t_total);
    for (int t = 0; t < t_total; ++t) h[u].push_back(rng.gaussian_vec(antennas));
  }

  // Protocol-random mix coefficients, in quantity/term order.
  std::vector<std::vector<cxd>> mix_coeffs(schedule.quantities.size());
  for (size_t q = 0; q < schedule.quantities.size(); ++q) {
    if (schedule.quantities[q].kind != Quantity::Kind::mix) continue;
    for (const auto& term : schedule.quantities[q].terms)
      mix_coeffs[q].push_back(term.random_coeff ? rng.gaussian()
                                                : cxd(term.coeff.to_double(), 0.0));
  }

  // Realize slots in order; every quantity becomes a coefficient row
  // over the data symbols.
  std::vector<arma::cx_rowvec> q_rows(schedule.quantities.size());
  std::vector<char> q_done(schedule.quantities.size(), 0);
  std::vector<std::vector<arma::cx_vec>> beams(t_total);
  std::vector<std::vector<int>> beam_quantity(t_total);

  auto quantity_row = [&](auto&& self, int id) -> const arma::cx_rowvec& {
    if (q_done[id]) return q_rows[id];
    const Quantity& q = schedule.quantities[id];
    arma::cx_rowvec row(n_sym, arma::fill::zeros);
    switch (q.kind) {
      case Quantity::Kind::data:
        row(q.symbol) = 1.0;
        break;
      case Quantity::Kind::observation: {
        if (q.slot < 0 || beams[q.slot].empty())
          throw std::invalid_argument("simulate: observation of an unrealized slot");
        for (int st : q.streams) {
          const cxd gain = arma::cdot(h[q.observer][q.slot], beams[q.slot][st]);
          row += gain * self(self, beam_quantity[q.slot][st]);
        }
        break;
      }
      case Quantity::Kind::mix: {
        for (size_t i = 0; i < q.terms.size(); ++i)
          row += mix_coeffs[id][i] * self(self, q.terms[i].quantity);
        break;
      }
    }
    q_rows[id] = std::move(row);
    q_done[id] = 1;
    return q_rows[id];
  };

  for (int t = 0; t < t_total; ++t) {
    for (const Stream& stream : schedule.slots[t].streams) {
      arma::cx_vec beam;
      if (stream.orth_users.empty()) {
        beam = rng.gaussian_vec(antennas);
      } else {
        arma::cx_mat constraint(stream.orth_users.size(), antennas);
        for (size_t i = 0; i < stream.orth_users.size(); ++i)
          constraint.row(i) = h[stream.orth_users[i]][t].t();
        arma::cx_mat basis = arma::null(constraint);
        if (basis.n_cols == 0)
          throw std::invalid_argument("simulate: no zero-forcing direction left (M too small)");
        beam = basis * rng.gaussian_vec(static_cast<int>(basis.n_cols));
      }
      beam /= arma::norm(beam);
      quantity_row(quantity_row, stream.quantity);
      beams[t].push_back(std::move(beam));
      beam_quantity[t].push_back(stream.quantity);
    }
  }

  TrialRealization out;
  out.user_rows.reserve(k);
  for (int u = 0; u < k; ++u) {
    arma::cx_mat rows(t_total, n_sym, arma::fill::zeros);
    for (int t = 0; t < t_total; ++t) {
      arma::cx_rowvec r(n_sym, arma::fill::zeros);
      for (size_t st = 0; st < beams[t].size(); ++st) {
        const cxd gain = arma::cdot(h[u][t], beams[t][st]);
        r += gain * q_rows[beam_quantity[t][st]];
      }
      rows.row(t) = r;
    }
    out.user_rows.push_back(std::move(rows));
  }

  out.own_cols.resize(k);
  out.other_cols.resize(k);
  for (int s = 0; s < n_sym; ++s) {
    const auto& owners = schedule.symbols[s].owners;
    for (int u = 0; u < k; ++u) {
      if (std::find(owners.begin(), owners.end(), u) != owners.end())
        out.own_cols[u].push_back(s);
      else
        out.other_cols[u].push_back(s);
    }
  }
  return out;
}

arma::cx_mat select_cols(const arma::cx_mat& m, const std::vector<int>& cols) {
  arma::cx_mat out(m.n_rows, cols.size());
  for (size_t i = 0; i < cols.size(); ++i) out.col(i) = m.col(cols[i]);
  return out;
}

// Interference-nulled own channel: project the user's equations onto the
// orthogonal complement of the interference column space, judged at the
// common scale sigma_ref.
arma::cx_mat effective_channel(const arma::cx_mat& own, const arma::cx_mat& other,
                               double sigma_ref) {
  if (other.n_cols == 0 || sigma_ref <= 0.0) return own;
  arma::cx_mat u, v;
  arma::vec sv;
  if (!arma::svd(u, sv, v, other))
    throw std::runtime_error("simulate: SVD failed");
  const double cutoff = kRankThreshold * sigma_ref;
  const arma::uword rank = arma::sum(sv > cutoff);
  if (rank >= u.n_cols) return arma::cx_mat(0, own.n_cols);
  const arma::cx_mat basis = u.cols(rank, u.n_cols - 1);
  return basis.t() * own;
}

}  // namespace

DecodingVerdict simulate_decode(const Schedule& schedule, const SchemeConfig& config) {
  config.validate(false);
  if (config.users != schedule.users)
    throw std::invalid_argument("simulate_decode: config user count mismatch");
  schedule.validate();

  const int k = schedule.users;
  DecodingVerdict verdict;
  verdict.trials = config.trials;
  verdict.decodable.assign(k, true);
  verdict.worst_rank_deficit.assign(k, 0);
  verdict.min_margin.assign(k, 1.0);

  for (int trial = 0; trial < config.trials; ++trial) {
    const auto r = realize(schedule, config.antennas,
                           splitmix64(config.seed + 0x5851f42d4c957f2dULL * trial));
    bool trial_failed = false;
    for (int u = 0; u < k; ++u) {
      const int n_own = static_cast<int>(r.own_cols[u].size());
      if (n_own == 0) continue;
      const arma::cx_mat own = select_cols(r.user_rows[u], r.own_cols[u]);
      const arma::cx_mat other = select_cols(r.user_rows[u], r.other_cols[u]);
      const double sigma_ref = largest_sv(arma::join_rows(own, other));
      const int rank_all = matrix_rank(arma::join_rows(own, other), sigma_ref);
      const int rank_other = matrix_rank(other, sigma_ref);
      const int deficit = n_own - (rank_all - rank_other);
      if (deficit > 0) {
        verdict.decodable[u] = false;
        verdict.worst_rank_deficit[u] = std::max(verdict.worst_rank_deficit[u], deficit);
        trial_failed = true;
      } else {
        const arma::cx_mat g = effective_channel(own, other, sigma_ref);
        arma::vec sv = arma::svd(g);
        if (sv.n_elem > 0 && sigma_ref > 0.0) {
          const double margin = sv(std::min<arma::uword>(n_own, sv.n_elem) - 1) / sigma_ref;
          verdict.min_margin[u] = std::min(verdict.min_margin[u], margin);
        }
      }
    }
    if (trial_failed) verdict.failed_trials.push_back(trial);
  }
  return verdict;
}

std::vector<std::vector<double>> mean_rates(const Schedule& schedule,
                                            const SchemeConfig& config) {
  config.validate(true);
  if (config.users != schedule.users)
    throw std::invalid_argument("mean_rates: config user count mismatch");
  schedule.validate();

  const int k = schedule.users;
  const int n_p = static_cast<int>(config.snr_powers.size());
  const double t_total = static_cast<double>(schedule.slots.size());

  std::vector<std::vector<double>> rate(n_p, std::vector<double>(k, 0.0));
  for (int trial = 0; trial < config.trials; ++trial) {
    const auto r = realize(schedule, config.antennas,
                           splitmix64(config.seed + 0x5851f42d4c957f2dULL * trial));
    for (int u = 0; u < k; ++u) {
      if (r.own_cols[u].empty()) continue;
      const arma::cx_mat own = select_cols(r.user_rows[u], r.own_cols[u]);
      const arma::cx_mat other = select_cols(r.user_rows[u], r.other_cols[u]);
      const double sigma_ref = largest_sv(arma::join_rows(own, other));
      const arma::cx_mat g = effective_channel(own, other, sigma_ref);
      if (g.n_rows == 0) continue;
      const arma::cx_mat gram = g.t() * g;  // n_own x n_own
      for (int ip = 0; ip < n_p; ++ip) {
        const arma::cx_mat m =
            arma::eye<arma::cx_mat>(gram.n_rows, gram.n_cols) +
            config.snr_powers[ip] * gram;
        arma::cx_double ld = arma::log_det(m);
        rate[ip][u] += ld.real() / std::log(2.0) / t_total / config.trials;
      }
    }
  }
  return rate;
}

std::vector<double> rate_slope(const Schedule& schedule, const SchemeConfig& config) {
  config.validate(true);
  if (config.snr_powers.size() < 2 ||
      std::log10(config.snr_powers.back() / config.snr_powers.front()) < 3.0)
    throw std::invalid_argument("rate_slope: SNR grid must span at least 3 decades");
  const auto rate = mean_rates(schedule, config);

  const int k = schedule.users;
  const int n_p = static_cast<int>(config.snr_powers.size());
  std::vector<double> x(n_p);
  double x_mean = 0.0;
  for (int ip = 0; ip < n_p; ++ip) {
    x[ip] = std::log2(config.snr_powers[ip]);
    x_mean += x[ip];
  }
  x_mean /= n_p;
  double sxx = 0.0;
  for (int ip = 0; ip < n_p; ++ip) sxx += (x[ip] - x_mean) * (x[ip] - x_mean);

  std::vector<double> slopes(k, 0.0);
  for (int u = 0; u < k; ++u) {
    double y_mean = 0.0;
    for (int ip = 0; ip < n_p; ++ip) y_mean += rate[ip][u];
    y_mean /= n_p;
    double sxy = 0.0;
    for (int ip = 0; ip < n_p; ++ip) sxy += (x[ip] - x_mean) * (rate[ip][u] - y_mean);
    slopes[u] = sxy / sxx;
  }
  return slopes;
}

}  // namespace misodof
