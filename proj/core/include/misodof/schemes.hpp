#pragma once

#include <vector>

#include "misodof/rational.hpp"
#include "misodof/schedule.hpp"

namespace misodof {

struct SchemeOutput {
  Schedule schedule;
  SchemeResult result;
};

// ZFBF + fixed user scheduling, for the lambda_D = 0 corner points.
// lambda_P = a/b gives a b-slot schedule: a slots of zero-forcing to all
// K users (one symbol each), the rest single-user slots to
// favored_user. DoF: 1 at the favored user, lambda_P elsewhere.
SchemeOutput case_a_corner_scheme(int k, const Rational& lambda_p, int favored_user);

// The K-user MAT cascade starting from order-j messages, phases j..K
// with phase p repeated ((p-1)!(K-p)!)K times. Each slot of phase p
// sends K-p+1 order-p messages to a p-subset and demands delayed
// feedback from the K-p users outside it.
Schedule mat_schedule(int k, int start_order);

// Minimum delayed-CSIT probability for sending order-j symbols in the
// K-user MAT: 1 - (K-j+1) / (K sum_{i=j..K} 1/i). Equals the feedback
// census of mat_schedule(k, j).
Rational mat_min_delay(int k, int j);

// Fraction of delayed-feedback cells in the schedule's pattern:
// (#D cells) / (slots * users).
Rational delayed_census(const Schedule& schedule);

struct MatPhaseInfo {
  int phase = 0;
  long executions = 0;
  long slots = 0;
  long feedbacks = 0;       // total delayed feedbacks in this phase
  long inputs = 0;          // order-p messages consumed
  long outputs = 0;         // order-(p+1) messages produced
};
std::vector<MatPhaseInfo> mat_phase_breakdown(int k, int start_order);

// ZFBF over a lambda_P fraction of slots, then |S|-user MAT over the
// subset S. Needs lambda_N <= lambda_D / sum_{i=2..|S|} 1/i; throws
// InfeasibleSchemeError naming the failed inequality otherwise. DoF:
// (1 + lambda_P sum_{i=2..|S|} 1/i) / (sum_{i=1..|S|} 1/i) inside S,
// lambda_P outside.
SchemeOutput hybrid_corner_scheme(const Rational& lambda_p, const Rational& lambda_d,
                                  int k, std::vector<int> subset);

// Fixed 3-user, 3-slot example: slot 1 beamforms two private streams to
// each of users 1 and 2 (mutually zero-forced) plus one stream to user 3
// in the complement of both channels; slots 2 and 3 resend user 3's
// overheard mixes, which doubles as user 1's and 2's second equation.
// DoF (2/3, 2/3, 1/3), sum 5/3, pattern column (P,P,D) then all-N.
SchemeOutput overheard_retransmission_scheme();

// Fixed 3-user scheme on the staggered delayed-CSIT pattern (one user
// fed back per slot, cycling). Twelve pair slots create six order-2
// messages, delivered by a 5-slot MAT tail. 24 private symbols in 17
// slots: sum DoF 24/17.
SchemeOutput alternating_order2_scheme();

// Plain single-user transmission; needs no CSIT. DoF: 1 at `user`.
SchemeOutput single_user_scheme(int k, int user, int slots = 1);

}  // namespace misodof
