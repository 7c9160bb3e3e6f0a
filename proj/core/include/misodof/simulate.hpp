#pragma once

#include <vector>

#include "misodof/schedule.hpp"

namespace misodof {

// Noiseless generic-channel decodability check. Per trial, channels are
// drawn i.i.d. CN(0, I) per user and slot, the schedule's linear recipe
// is realized, and each user's received equations are split into its own
// symbols and interference. The user is decodable in a trial iff
// rank([own | interference]) - rank(interference) equals its symbol
// count (rank = singular values above 1e-6 of the largest). Verdicts
// require every trial to pass. Deterministic given (seed, trials).
DecodingVerdict simulate_decode(const Schedule& schedule, const SchemeConfig& config);

// Mean per-user achievable-rate proxy at each SNR grid point:
// log2 det(I + P G G^H) / slots with G the interference-nulled own
// channel, averaged over trials. Indexed [grid point][user].
std::vector<std::vector<double>> mean_rates(const Schedule& schedule,
                                            const SchemeConfig& config);

// Least-squares slope of the mean rate against log2 P over
// config.snr_powers. The grid must span at least three decades. Returns
// one slope per user.
std::vector<double> rate_slope(const Schedule& schedule, const SchemeConfig& config);

}  // namespace misodof
