#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "misodof/pattern.hpp"
#include "misodof/rational.hpp"
#include "misodof/region.hpp"

namespace misodof {

// A transmitted data symbol. owners lists the users (sorted, 0-based)
// that must decode it; |owners| is the message order (1 = private
// stream).
struct DataSymbol {
  std::vector<int> owners;
};

// A quantity the transmitter can form at some point of the schedule.
// Every quantity is, at simulation time, a linear functional of the data
// symbols:
//   data        - one fresh symbol
//   observation - h_user(slot)^H applied to a subset of that slot's
//                 streams; requires the transmitter to know that channel
//                 (Perfect at the slot, or Delayed and used strictly
//                 later)
//   mix         - linear combination of earlier quantities, with exact
//                 rational or protocol-random coefficients
struct Quantity {
  enum class Kind { data, observation, mix };

  struct Term {
    int quantity = -1;
    bool random_coeff = false;
    Rational coeff = Rational(1);
  };

  Kind kind = Kind::data;
  int symbol = -1;             // data
  int observer = -1;           // observation
  int slot = -1;               // observation
  std::vector<int> streams;    // observation: stream indices within that slot
  std::vector<Term> terms;     // mix
};

// One beamformed stream: a quantity sent on a beam drawn uniformly at
// random in the orthogonal complement of the current channels of
// orth_users (random direction when orth_users is empty). A nonempty
// orth_users set demands Perfect CSIT of those users in this slot.
struct Stream {
  int quantity = -1;
  std::vector<int> orth_users;
};

enum class SlotKind { zf, single_user, mat_phase, resend };

std::string slot_kind_name(SlotKind k);

struct Slot {
  SlotKind kind = SlotKind::single_user;
  std::vector<Stream> streams;
  std::vector<int> targets;  // users served / MAT subset S
  std::string note;
};

// A complete transmission schedule with its symbol and feedback ledgers
// and the CSIT pattern it needs. Immutable value; validate() checks all
// ledger references, that delayed channels are fed back before use, and
// that no slot demands more CSIT than the pattern provides.
struct Schedule {
  int users = 0;
  std::vector<DataSymbol> symbols;
  std::vector<Quantity> quantities;
  std::vector<Slot> slots;
  CsitPattern pattern;
  std::vector<std::pair<int, int>> feedback;  // (user, slot) delayed feedbacks

  void validate() const;  // throws std::invalid_argument on any inconsistency

  // The schedule with slot `index` removed (pattern column dropped,
  // later observation references shifted). Quantities observing the
  // dropped slot become unusable; transmitting one afterwards fails
  // validation.
  Schedule without_slot(int index) const;

  long total_slots() const { return static_cast<long>(slots.size()); }
  std::vector<long> per_user_symbol_counts() const;

  std::string to_json() const;  // slots, ledgers and pattern, for inspection
};

// Exact DoF accounting of a schedule: decoded symbol counts per user and
// counts/slots as rationals, together with the realized pattern.
// message_order is the owner-set size of the data symbols (1 for private
// streams; region membership statements apply to order 1).
struct SchemeResult {
  std::vector<long> decoded;
  long slots = 0;
  DofPoint dof;
  CsitPattern realized;
  int message_order = 1;

  Rational sum_dof() const;
};

SchemeResult account(const Schedule& schedule);

// Monte Carlo simulator configuration. snr_powers are linear transmit
// powers (not dB); only rate_slope uses them.
struct SchemeConfig {
  int users = 0;
  int antennas = 0;  // M >= users (outer bound assumption)
  std::vector<double> snr_powers;
  int trials = 100;
  std::uint64_t seed = 7;

  void validate(bool need_snr_grid) const;
};

struct DecodingVerdict {
  std::vector<bool> decodable;        // per user, over all trials
  int trials = 0;
  std::vector<int> failed_trials;     // trial indices with any deficiency
  std::vector<int> worst_rank_deficit;  // per user, max over trials
  std::vector<double> min_margin;     // per user, min over trials of
                                      // sigma_min/sigma_max of the
                                      // interference-nulled own channel
  bool all_decodable() const;
};

}  // namespace misodof
