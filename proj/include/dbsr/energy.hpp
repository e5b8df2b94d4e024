#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dbsr/world.hpp"

namespace dbsr {

struct RadioConstants {
  double e_elec = 50e-9;  // J/bit
  double e_fs = 10e-9;    // J/bit/m^2
  double e_da = 5e-9;     // J/bit/signal

  static RadioConstants from(const NetworkConfig& c) noexcept { return {c.e_elec, c.e_fs, c.e_da}; }
};

// First-order radio, free-space amplifier only.
inline double tx_cost(std::uint64_t bits, double d, const RadioConstants& rc) {
  if (bits == 0) throw std::invalid_argument("tx_cost: bits must be > 0");
  if (!(d >= 0.0)) throw std::invalid_argument("tx_cost: distance must be >= 0");
  const double k = static_cast<double>(bits);
  return rc.e_elec * k + rc.e_fs * k * d * d;
}

inline double rx_cost(std::uint64_t bits, const RadioConstants& rc) {
  if (bits == 0) throw std::invalid_argument("rx_cost: bits must be > 0");
  return rc.e_elec * static_cast<double>(bits);
}

inline double aggregation_cost(std::uint64_t bits, std::size_t signals, const RadioConstants& rc) noexcept {
  return rc.e_da * static_cast<double>(bits) * static_cast<double>(signals);
}

enum class Cause : std::size_t { Tx = 0, Rx, Aggregate, Report };

struct EnergyLedgerEntry {
  std::size_t node_id = 0;
  double amount = 0.0;
  Cause cause = Cause::Tx;
};

struct ChargeResult {
  NodeState node;
  EnergyLedgerEntry entry;
};

/// Debits `amount` from a live node, clamping at zero. A node that reaches
/// zero is dead for good. The entry records what was actually debited.
inline ChargeResult charge(const NodeState& node, double amount, Cause cause) {
  if (!node.alive) throw std::logic_error("charge: node " + std::to_string(node.id) + " is dead");
  if (!(amount > 0.0)) throw std::logic_error("charge: amount must be > 0");
  ChargeResult r{node, {node.id, std::min(amount, node.residual_energy), cause}};
  if (amount >= node.residual_energy) {
    r.node.residual_energy = 0.0;
    r.node.alive = false;
  } else {
    r.node.residual_energy = node.residual_energy - amount;
  }
  return r;
}

/// Running totals of every debit, per node and per cause.
///
/// Entries are folded into sums rather than stored; a lifetime run produces
/// hundreds of thousands of them and only the totals are ever audited.
class EnergyLedger {
 public:
  EnergyLedger() = default;
  explicit EnergyLedger(std::size_t node_count) : per_node_(node_count, 0.0) {}

  void record(const EnergyLedgerEntry& e) {
    if (e.node_id >= per_node_.size()) per_node_.resize(e.node_id + 1, 0.0);
    per_node_[e.node_id] += e.amount;
    per_cause_[static_cast<std::size_t>(e.cause)] += e.amount;
    ++entries_;
  }

  double total() const noexcept {
    double s = 0.0;
    for (double v : per_node_) s += v;
    return s;
  }

  double node_total(std::size_t id) const { return per_node_.at(id); }
  double cause_total(Cause c) const noexcept { return per_cause_[static_cast<std::size_t>(c)]; }
  std::size_t entry_count() const noexcept { return entries_; }

 private:
  std::vector<double> per_node_;
  std::array<double, 4> per_cause_{};
  std::size_t entries_ = 0;
};

// Applies charge() in place and records the debit. Returns false if the node
// died during this debit.
inline bool debit(NodeState& node, double amount, Cause cause, EnergyLedger& ledger) {
  auto r = charge(node, amount, cause);
  node = r.node;
  ledger.record(r.entry);
  return node.alive;
}

}  // namespace dbsr
