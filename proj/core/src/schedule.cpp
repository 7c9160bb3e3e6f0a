#include "misodof/schedule.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace misodof {

using nlohmann::json;

std::string slot_kind_name(SlotKind k) {
  switch (k) {
    case SlotKind::zf: return "zf";
    case SlotKind::single_user: return "single-user";
    case SlotKind::mat_phase: return "mat-phase";
    case SlotKind::resend: return "resend";
  }
  return "?";
}

namespace {

void fail(const std::string& what) { throw std::invalid_argument("Schedule: " + what); }

// Collects, transitively, every observation underneath a quantity.
void collect_observations(const std::vector<Quantity>& quantities, int id,
                          std::vector<int>& out) {
  const Quantity& q = quantities.at(id);
  switch (q.kind) {
    case Quantity::Kind::data:
      break;
    case Quantity::Kind::observation:
      out.push_back(id);
      break;
    case Quantity::Kind::mix:
      for (const auto& term : q.terms) collect_observations(quantities, term.quantity, out);
      break;
  }
}

}  // namespace

void Schedule::validate() const {
  if (users < 1) fail("no users");
  if (pattern.users() != users) fail("pattern user count mismatch");
  if (pattern.slots() != static_cast<int>(slots.size()))
    fail("pattern slot count mismatch");

  for (size_t s = 0; s < symbols.size(); ++s) {
    if (symbols[s].owners.empty()) fail("symbol " + std::to_string(s) + " has no owners");
    std::set<int> seen;
    for (int u : symbols[s].owners) {
      if (u < 0 || u >= users) fail("symbol owner out of range");
      if (!seen.insert(u).second) fail("duplicate symbol owner");
    }
  }

  for (size_t qi = 0; qi < quantities.size(); ++qi) {
    const Quantity& q = quantities[qi];
    switch (q.kind) {
      case Quantity::Kind::data:
        if (q.symbol < 0 || q.symbol >= static_cast<int>(symbols.size()))
          fail("data quantity with bad symbol id");
        break;
      case Quantity::Kind::observation: {
        if (q.observer < 0 || q.observer >= users) fail("observer out of range");
        // slot == -1 marks an observation orphaned by without_slot; it
        // is tolerated as long as nothing transmits it.
        if (q.slot < -1 || q.slot >= static_cast<int>(slots.size()))
          fail("observation of nonexistent slot");
        if (q.streams.empty()) fail("observation with no streams");
        if (q.slot >= 0) {
          for (int st : q.streams) {
            if (st < 0 || st >= static_cast<int>(slots[q.slot].streams.size()))
              fail("observation references bad stream index");
          }
        }
        break;
      }
      case Quantity::Kind::mix:
        if (q.terms.empty()) fail("mix with no terms");
        for (const auto& term : q.terms) {
          if (term.quantity < 0 || term.quantity >= static_cast<int>(qi))
            fail("mix term must reference an earlier quantity");
        }
        break;
    }
  }

  // CSIT demands against the declared pattern.
  for (size_t t = 0; t < slots.size(); ++t) {
    for (const Stream& stream : slots[t].streams) {
      if (stream.quantity < 0 || stream.quantity >= static_cast<int>(quantities.size()))
        fail("stream with bad quantity id");
      for (int u : stream.orth_users) {
        if (u < 0 || u >= users) fail("orthogonality target out of range");
        if (pattern.state(u, static_cast<int>(t)) != CsitState::Perfect)
          fail("slot " + std::to_string(t + 1) + " beamforms against user " +
               std::to_string(u + 1) + " without Perfect CSIT");
      }
      std::vector<int> obs;
      collect_observations(quantities, stream.quantity, obs);
      for (int oid : obs) {
        const Quantity& o = quantities[oid];
        if (o.slot < 0)
          fail("slot " + std::to_string(t + 1) +
               " transmits an observation of a removed slot");
        if (o.slot >= static_cast<int>(t))
          fail("slot " + std::to_string(t + 1) +
               " uses an observation of slot " + std::to_string(o.slot + 1) +
               " that is not in the past");
        const CsitState st = pattern.state(o.observer, o.slot);
        if (st == CsitState::None)
          fail("observation of user " + std::to_string(o.observer + 1) + " at slot " +
               std::to_string(o.slot + 1) + " but the pattern grants no CSIT there");
      }
    }
  }

  // The feedback ledger is exactly the set of Delayed cells.
  std::set<std::pair<int, int>> fb(feedback.begin(), feedback.end());
  if (fb.size() != feedback.size()) fail("duplicate feedback entry");
  for (int u = 0; u < users; ++u) {
    for (int t = 0; t < pattern.slots(); ++t) {
      const bool delayed = pattern.state(u, t) == CsitState::Delayed;
      const bool listed = fb.count({u, t}) != 0;
      if (delayed != listed)
        fail("feedback ledger does not match pattern at user " + std::to_string(u + 1) +
             ", slot " + std::to_string(t + 1));
    }
  }
}

Schedule Schedule::without_slot(int index) const {
  if (index < 0 || index >= static_cast<int>(slots.size()))
    throw std::invalid_argument("without_slot: index out of range");
  if (slots.size() == 1)
    throw std::invalid_argument("without_slot: cannot remove the only slot");

  Schedule out = *this;
  out.slots.erase(out.slots.begin() + index);
  for (auto& q : out.quantities) {
    if (q.kind == Quantity::Kind::observation) {
      if (q.slot == index) q.slot = -1;  // dangling; fails validation if used
      else if (q.slot > index) --q.slot;
    }
  }

  std::vector<CsitState> grid;
  for (int u = 0; u < users; ++u) {
    for (int t = 0; t < pattern.slots(); ++t) {
      if (t != index) grid.push_back(pattern.state(u, t));
    }
  }
  out.pattern = CsitPattern(users, pattern.slots() - 1, std::move(grid));

  out.feedback.clear();
  for (auto [u, t] : feedback) {
    if (t == index) continue;
    out.feedback.emplace_back(u, t > index ? t - 1 : t);
  }
  return out;
}

std::vector<long> Schedule::per_user_symbol_counts() const {
  std::vector<long> counts(users, 0);
  for (const auto& sym : symbols) {
    for (int u : sym.owners) ++counts[u];
  }
  return counts;
}

std::string Schedule::to_json() const {
  json doc;
  doc["users"] = users;
  doc["slots_total"] = slots.size();

  json syms = json::array();
  for (size_t i = 0; i < symbols.size(); ++i) {
    json s;
    s["id"] = i;
    json owners = json::array();
    for (int u : symbols[i].owners) owners.push_back(u + 1);
    s["owners"] = owners;
    syms.push_back(std::move(s));
  }
  doc["symbols"] = std::move(syms);

  json qs = json::array();
  for (size_t i = 0; i < quantities.size(); ++i) {
    const Quantity& q = quantities[i];
    json e;
    e["id"] = i;
    switch (q.kind) {
      case Quantity::Kind::data:
        e["kind"] = "data";
        e["symbol"] = q.symbol;
        break;
      case Quantity::Kind::observation:
        e["kind"] = "observation";
        e["observer"] = q.observer + 1;
        e["slot"] = q.slot + 1;
        e["streams"] = q.streams;
        break;
      case Quantity::Kind::mix: {
        e["kind"] = "mix";
        json terms = json::array();
        for (const auto& term : q.terms) {
          json t;
          t["quantity"] = term.quantity;
          if (term.random_coeff) t["coeff"] = "random";
          else t["coeff"] = term.coeff.str();
          terms.push_back(std::move(t));
        }
        e["terms"] = std::move(terms);
        break;
      }
    }
    qs.push_back(std::move(e));
  }
  doc["quantities"] = std::move(qs);

  json sl = json::array();
  for (size_t t = 0; t < slots.size(); ++t) {
    const Slot& slot = slots[t];
    json e;
    e["slot"] = t + 1;
    e["kind"] = slot_kind_name(slot.kind);
    if (!slot.note.empty()) e["note"] = slot.note;
    json targets = json::array();
    for (int u : slot.targets) targets.push_back(u + 1);
    e["targets"] = std::move(targets);
    json streams = json::array();
    for (const Stream& stream : slot.streams) {
      json s;
      s["quantity"] = stream.quantity;
      json orth = json::array();
      for (int u : stream.orth_users) orth.push_back(u + 1);
      s["orthogonal_to"] = std::move(orth);
      streams.push_back(std::move(s));
    }
    e["streams"] = std::move(streams);
    sl.push_back(std::move(e));
  }
  doc["slots"] = std::move(sl);

  json rows = json::array();
  for (int u = 0; u < users; ++u) {
    std::string row;
    for (int t = 0; t < pattern.slots(); ++t) row.push_back(to_char(pattern.state(u, t)));
    rows.push_back(row);
  }
  doc["pattern"] = std::move(rows);

  json fb = json::array();
  for (auto [u, t] : feedback) fb.push_back(json::array({u + 1, t + 1}));
  doc["feedback"] = std::move(fb);

  return doc.dump(2);
}

SchemeResult account(const Schedule& schedule) {
  SchemeResult r{schedule.per_user_symbol_counts(), schedule.total_slots(), DofPoint{},
                 schedule.pattern, 1};
  for (const auto& sym : schedule.symbols)
    r.message_order = std::max(r.message_order, static_cast<int>(sym.owners.size()));
  r.dof.reserve(schedule.users);
  for (int u = 0; u < schedule.users; ++u)
    r.dof.push_back(Rational(r.decoded[u], r.slots));
  return r;
}

Rational SchemeResult::sum_dof() const {
  Rational s;
  for (const auto& d : dof) s += d;
  return s;
}

void SchemeConfig::validate(bool need_snr_grid) const {
  if (users < 1) throw std::invalid_argument("SchemeConfig: users >= 1 required");
  if (antennas < users)
    throw std::invalid_argument("SchemeConfig: M >= K transmit antennas required");
  if (trials < 1) throw std::invalid_argument("SchemeConfig: trials >= 1 required");
  if (need_snr_grid) {
    if (snr_powers.size() < 2)
      throw std::invalid_argument("SchemeConfig: SNR grid needs at least two points");
    for (size_t i = 0; i + 1 < snr_powers.size(); ++i) {
      if (!(snr_powers[i] < snr_powers[i + 1]))
        throw std::invalid_argument("SchemeConfig: SNR grid must be strictly increasing");
    }
    if (snr_powers.front() <= 0)
      throw std::invalid_argument("SchemeConfig: SNR powers must be positive");
  }
}

bool DecodingVerdict::all_decodable() const {
  return std::all_of(decodable.begin(), decodable.end(), [](bool b) { return b; });
}

}  // namespace misodof
