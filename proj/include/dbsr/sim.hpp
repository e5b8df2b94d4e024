#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

#include "dbsr/ga.hpp"
#include "dbsr/network.hpp"
#include "dbsr/protocols.hpp"
#include "dbsr/random.hpp"

namespace dbsr {

struct StaticPolicy {
  Position pos;
};

struct DbsrPolicy {
  GaParams ga;
};

using RepositionPolicy = std::variant<StaticPolicy, DbsrPolicy>;

inline bool is_dbsr(const RepositionPolicy& p) noexcept { return std::holds_alternative<DbsrPolicy>(p); }

struct RoundMetrics {
  std::size_t round = 0;  // 1-based
  Position bs_pos;
  double total_residual = 0.0;
  std::size_t alive_count = 0;
  double consumed_this_round = 0.0;
  std::size_t heads_count = 0;
};

struct LifetimeSummary {
  std::optional<std::size_t> fnd_round;
  std::optional<std::size_t> hna_round;
  std::size_t last_round = 0;
};

struct SimulationResult {
  std::vector<RoundMetrics> metrics;
  LifetimeSummary summary;
  double conservation_error = 0.0;
};

// Weighted sites from every live node's quantized residual energy.
inline std::vector<WeightedSite> weighted_sites(const World& world) {
  std::vector<WeightedSite> sites;
  sites.reserve(world.nodes.size());
  for (const auto& n : world.nodes)
    if (n.alive) sites.push_back({n.pos, weight_of(n.residual_energy, world.config.initial_energy)});
  return sites;
}

/// Chooses this round's base-station position.
///
/// Under DBSR every live node first reports its residual energy to the
/// current BS position (charged only when control_packet_bits > 0), then the
/// GA places the BS. The BS itself moves for free.
inline Position reposition(World& world, const RepositionPolicy& policy, Rng& ga_rng) {
  if (const auto* s = std::get_if<StaticPolicy>(&policy)) return s->pos;

  const auto& dbsr = std::get<DbsrPolicy>(policy);
  if (world.config.control_packet_bits > 0) {
    const auto rc = RadioConstants::from(world.config);
    for (auto& n : world.nodes)
      if (n.alive) world.debit(n.id, tx_cost(world.config.control_packet_bits, distance(n.pos, world.bs), rc), Cause::Report);
  }
  const auto sites = weighted_sites(world);
  if (sites.empty()) return world.bs;
  return run_ga(sites, dbsr.ga, world.config.field_width, world.config.field_height, ga_rng).position;
}

inline constexpr double kConservationTolerance = 1e-12;

/// Runs one network to max_rounds or until every node is dead.
///
/// FND is the first round after whose debits fewer than n nodes are alive;
/// HNA the first after which fewer than ceil(n/2) are.
inline SimulationResult simulate(const NetworkConfig& config, const ProtocolConfig& protocol,
                                 const RepositionPolicy& policy, std::size_t max_rounds) {
  config.validate();
  protocol.validate();
  if (const auto* s = std::get_if<StaticPolicy>(&policy); s && !config.contains(s->pos))
    throw ConfigError("static_bs", "must lie inside the field");
  if (const auto* d = std::get_if<DbsrPolicy>(&policy)) d->ga.validate();

  Rng deploy_rng = Rng::fork(config.seed, Stream::Deployment);
  Rng protocol_rng = Rng::fork(config.seed, Stream::Protocol);
  Rng ga_rng = Rng::fork(config.seed, Stream::Genetic);

  World world = World::deployed(config, deploy_rng);
  const std::size_t n = world.nodes.size();
  const std::size_t half = (n + 1) / 2;
  LeachEpoch epoch;

  SimulationResult result;
  result.metrics.reserve(max_rounds);
  for (std::size_t r = 1; r <= max_rounds && world.alive_count() > 0; ++r) {
    const double debited_before = world.ledger.total();
    world.bs = reposition(world, policy, ga_rng);

    RoundDelta delta;
    if (world.alive_count() > 0) {
      const ClusterAssignment assignment = protocol.kind == ProtocolKind::Leach
                                               ? elect_leach(world, protocol.leach, r - 1, epoch, protocol_rng)
                                               : elect_heed(world, protocol.heed, protocol_rng);
      delta = run_round(world, assignment, world.bs);
    }

    RoundMetrics m;
    m.round = r;
    m.bs_pos = world.bs;
    m.total_residual = world.total_residual();
    m.alive_count = world.alive_count();
    // includes this round's report debits, if any
    m.consumed_this_round = world.ledger.total() - debited_before;
    m.heads_count = delta.heads_count;
    result.metrics.push_back(m);

    if (!result.summary.fnd_round && m.alive_count < n) result.summary.fnd_round = r;
    if (!result.summary.hna_round && m.alive_count < half) result.summary.hna_round = r;
    result.summary.last_round = r;
  }

  result.conservation_error = world.conservation_error();
  if (!(result.conservation_error <= kConservationTolerance))
    throw std::logic_error("energy ledger out of balance: relative error " + std::to_string(result.conservation_error));
  return result;
}

struct BatchResult {
  std::vector<SimulationResult> runs;
  std::vector<double> mean_total_residual;  // per round, index 0 = round 1
  std::vector<double> mean_alive_count;
  std::optional<double> fnd_median;
  std::optional<double> hna_median;
  std::optional<double> fnd_mean;
  std::optional<double> hna_mean;
};

// Median and mean over the defined values only.
inline std::optional<double> median_of(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

inline std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline BatchResult summarize(std::vector<SimulationResult> runs) {
  BatchResult b;
  b.runs = std::move(runs);
  std::size_t horizon = 0;
  for (const auto& r : b.runs) horizon = std::max(horizon, r.metrics.size());
  b.mean_total_residual.assign(horizon, 0.0);
  b.mean_alive_count.assign(horizon, 0.0);
  std::vector<double> fnd, hna;
  for (const auto& r : b.runs) {
    // A run that stopped early (network dead) holds its last values.
    for (std::size_t i = 0; i < horizon; ++i) {
      const RoundMetrics& m = r.metrics.empty() ? RoundMetrics{} : r.metrics[std::min(i, r.metrics.size() - 1)];
      b.mean_total_residual[i] += m.total_residual;
      b.mean_alive_count[i] += static_cast<double>(m.alive_count);
    }
    if (r.summary.fnd_round) fnd.push_back(static_cast<double>(*r.summary.fnd_round));
    if (r.summary.hna_round) hna.push_back(static_cast<double>(*r.summary.hna_round));
  }
  const double k = static_cast<double>(b.runs.size());
  for (std::size_t i = 0; i < horizon; ++i) {
    b.mean_total_residual[i] /= k;
    b.mean_alive_count[i] /= k;
  }
  b.fnd_median = median_of(fnd);
  b.hna_median = median_of(hna);
  b.fnd_mean = mean_of(fnd);
  b.hna_mean = mean_of(hna);
  return b;
}

/// Runs seeds seed, seed+1, ... seed+runs-1, in parallel when threads > 1.
/// Results are ordered by run index regardless of scheduling.
inline BatchResult batch(const NetworkConfig& config, const ProtocolConfig& protocol, const RepositionPolicy& policy,
                         std::size_t runs, std::size_t max_rounds, std::size_t threads = 0) {
  if (runs < 1) throw ConfigError("runs", "must be >= 1");
  config.validate();
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, runs);

  std::vector<SimulationResult> results(runs);
  std::vector<std::exception_ptr> errors(runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs; i = next++) {
      try {
        NetworkConfig c = config;
        c.seed = config.seed + i;
        results[i] = simulate(c, protocol, policy, max_rounds);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return summarize(std::move(results));
}

}  // namespace dbsr
