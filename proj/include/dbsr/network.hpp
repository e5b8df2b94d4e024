#pragma once

#include <cmath>
#include <vector>

#include "dbsr/energy.hpp"
#include "dbsr/world.hpp"

namespace dbsr {

// Ground truth for one run: sensors, base station and the debit ledger.
// Owned by exactly one simulation at a time.
struct World {
  NetworkConfig config;
  std::vector<NodeState> nodes;
  Position bs;
  EnergyLedger ledger;

  static World deployed(const NetworkConfig& config, Rng& rng) {
    World w;
    w.config = config;
    w.nodes = deploy(config, rng);
    w.bs = config.center();
    w.ledger = EnergyLedger(w.nodes.size());
    return w;
  }

  static World from_nodes(const NetworkConfig& config, std::vector<NodeState> nodes) {
    World w;
    w.config = config;
    w.nodes = std::move(nodes);
    w.bs = config.center();
    w.ledger = EnergyLedger(w.nodes.size());
    return w;
  }

  double total_residual() const noexcept {
    double s = 0.0;
    for (const auto& n : nodes) s += n.residual_energy;
    return s;
  }

  std::size_t alive_count() const noexcept {
    std::size_t c = 0;
    for (const auto& n : nodes) c += n.alive ? 1 : 0;
    return c;
  }

  double initial_total() const noexcept {
    return static_cast<double>(nodes.size()) * config.initial_energy;
  }

  // |debited + residual - initial| relative to the initial total.
  double conservation_error() const noexcept {
    const double initial = initial_total();
    return std::abs(ledger.total() + total_residual() - initial) / initial;
  }

  bool debit(std::size_t id, double amount, Cause cause) {
    return dbsr::debit(nodes.at(id), amount, cause, ledger);
  }
};

}  // namespace dbsr
