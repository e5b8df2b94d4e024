#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dbsr/energy.hpp"
#include "dbsr/network.hpp"
#include "dbsr/random.hpp"

namespace dbsr {

enum class ProtocolKind { Leach, Heed };

inline std::string_view to_string(ProtocolKind k) noexcept { return k == ProtocolKind::Leach ? "LEACH" : "HEED"; }

struct LeachParams {
  double ch_fraction = 0.05;

  // Epoch length in rounds, ceil(1/p) with 1/p snapped when it is integral.
  std::size_t round_modulus() const noexcept {
    const double inv = 1.0 / ch_fraction;
    const double nearest = std::round(inv);
    return static_cast<std::size_t>(std::abs(inv - nearest) < 1e-9 ? nearest : std::ceil(inv));
  }

  void validate() const {
    if (!(ch_fraction > 0.0 && ch_fraction < 1.0)) throw ConfigError("leach_p", "must be in (0, 1)");
  }
};

struct HeedParams {
  double c_prob = 0.05;
  double p_min = 1e-4;
  std::size_t max_iterations = 20;
  double cluster_radius = 50.0;  // m, intra-cluster announcement range

  void validate() const {
    if (!(c_prob > 0.0 && c_prob < 1.0)) throw ConfigError("heed_c_prob", "must be in (0, 1)");
    if (!(p_min > 0.0 && p_min <= c_prob)) throw ConfigError("heed_p_min", "must be in (0, heed_c_prob]");
    if (max_iterations < 1) throw ConfigError("heed_max_iterations", "must be >= 1");
    if (!(cluster_radius > 0.0)) throw ConfigError("heed_cluster_radius", "must be > 0");
  }
};

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::Leach;
  LeachParams leach;
  HeedParams heed;

  void validate() const {
    leach.validate();
    heed.validate();
  }
};

struct ClusterAssignment {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> heads;    // ascending ids
  std::vector<std::size_t> head_of;  // per node id; kNone for heads, dead or direct nodes

  bool is_head(std::size_t id) const { return std::binary_search(heads.begin(), heads.end(), id); }
};

// Members join their nearest head; ties go to the lower head id. With no
// heads every alive node is left to transmit directly.
inline ClusterAssignment assign_members(const World& world, std::vector<std::size_t> heads) {
  std::sort(heads.begin(), heads.end());
  ClusterAssignment a;
  a.head_of.assign(world.nodes.size(), ClusterAssignment::kNone);
  for (const auto& n : world.nodes) {
    if (!n.alive || std::binary_search(heads.begin(), heads.end(), n.id)) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t h : heads) {
      const double d = distance_squared(n.pos, world.nodes[h].pos);
      if (d < best) {
        best = d;
        a.head_of[n.id] = h;
      }
    }
  }
  a.heads = std::move(heads);
  return a;
}

inline void apply_roles(World& world, const ClusterAssignment& a) {
  for (auto& n : world.nodes) n.role = Role::Member;
  for (std::size_t h : a.heads) world.nodes[h].role = Role::ClusterHead;
}

/// Per-run LEACH rotation memory: which nodes already served as head in the
/// current epoch of round_modulus() rounds.
struct LeachEpoch {
  std::vector<bool> served;
};

// Election threshold for a node still eligible in this epoch.
inline double leach_threshold(const LeachParams& params, std::size_t round_index) {
  const std::size_t m = params.round_modulus();
  const std::size_t phase = round_index % m;
  if (phase + 1 == m) return 1.0;
  const double denom = 1.0 - params.ch_fraction * static_cast<double>(phase);
  if (denom <= params.ch_fraction) return 1.0;
  return params.ch_fraction / denom;
}

inline ClusterAssignment elect_leach(World& world, const LeachParams& params, std::size_t round_index,
                                     LeachEpoch& epoch, Rng& rng) {
  if (epoch.served.size() != world.nodes.size() || round_index % params.round_modulus() == 0)
    epoch.served.assign(world.nodes.size(), false);

  const double t = leach_threshold(params, round_index);
  std::vector<std::size_t> heads;
  for (const auto& n : world.nodes) {
    if (!n.alive || epoch.served[n.id]) continue;
    if (rng.uniform01() < t) {
      heads.push_back(n.id);
      epoch.served[n.id] = true;
    }
  }
  auto a = assign_members(world, std::move(heads));
  apply_roles(world, a);
  return a;
}

// Initial head probability, floored at p_min.
inline double heed_initial_probability(const HeedParams& params, double residual, double initial) {
  return std::max(params.p_min, params.c_prob * residual / initial);
}

/// Simplified synchronous HEED.
///
/// Every iteration, nodes that are neither heads nor within cluster_radius of
/// an announced head become tentative heads with their current probability,
/// then double it; a node whose probability reached 1 finalizes as head.
/// Whatever is still uncovered after max_iterations heads its own cluster.
inline ClusterAssignment elect_heed(World& world, const HeedParams& params, Rng& rng) {
  enum class State : std::uint8_t { Undecided, Covered, Head };
  const std::size_t n = world.nodes.size();
  std::vector<State> state(n, State::Undecided);
  std::vector<double> prob(n, 0.0);
  for (const auto& node : world.nodes)
    if (node.alive) prob[node.id] = heed_initial_probability(params, node.residual_energy, world.config.initial_energy);

  const double r2 = params.cluster_radius * params.cluster_radius;
  std::vector<std::size_t> heads;
  for (std::size_t it = 0; it < params.max_iterations; ++it) {
    const std::size_t announced = heads.size();
    bool pending = false;
    for (const auto& node : world.nodes) {
      if (!node.alive || state[node.id] != State::Undecided) continue;
      const bool covered = std::any_of(heads.begin(), heads.begin() + static_cast<std::ptrdiff_t>(announced),
                                       [&](std::size_t h) { return distance_squared(node.pos, world.nodes[h].pos) <= r2; });
      if (covered) {
        state[node.id] = State::Covered;
        continue;
      }
      if (prob[node.id] >= 1.0 || rng.uniform01() < prob[node.id]) {
        state[node.id] = State::Head;
        heads.push_back(node.id);
        continue;
      }
      prob[node.id] = std::min(1.0, 2.0 * prob[node.id]);
      pending = true;
    }
    if (!pending) break;
  }
  for (const auto& node : world.nodes)
    if (node.alive && state[node.id] == State::Undecided) heads.push_back(node.id);

  auto a = assign_members(world, std::move(heads));
  apply_roles(world, a);
  return a;
}

struct RoundDelta {
  double consumed = 0.0;
  std::size_t heads_count = 0;
  std::size_t packets_at_bs = 0;  // packets (fused or direct) that reached the BS
};

/// Charges one round of data delivery.
///
/// Members send to their head, heads receive, fuse (members + own reading)
/// and forward one packet to the BS; headless nodes send straight to the BS.
/// An action a node cannot fully afford drains it and the packet is lost.
inline RoundDelta run_round(World& world, const ClusterAssignment& assignment, const Position& bs) {
  const auto rc = RadioConstants::from(world.config);
  const std::uint64_t bits = world.config.data_packet_bits;
  const double before = world.ledger.total();
  RoundDelta delta;
  delta.heads_count = assignment.heads.size();

  // Sends `amount` from `id`; true iff the full cost was affordable.
  auto send = [&](std::size_t id, double amount, Cause cause) {
    NodeState& node = world.nodes[id];
    if (!node.alive) return false;
    const bool affordable = amount <= node.residual_energy;
    world.debit(id, amount, cause);
    return affordable;
  };

  std::vector<std::size_t> received(world.nodes.size(), 0);
  for (const auto& node : world.nodes) {
    const std::size_t h = assignment.head_of[node.id];
    if (!node.alive || h == ClusterAssignment::kNone) continue;
    const double d = distance(node.pos, world.nodes[h].pos);
    if (send(node.id, tx_cost(bits, d, rc), Cause::Tx) && send(h, rx_cost(bits, rc), Cause::Rx)) ++received[h];
  }

  for (std::size_t h : assignment.heads) {
    if (!world.nodes[h].alive) continue;
    const double fuse = aggregation_cost(bits, received[h] + 1, rc);
    if (fuse > 0.0 && !send(h, fuse, Cause::Aggregate)) continue;
    if (send(h, tx_cost(bits, distance(world.nodes[h].pos, bs), rc), Cause::Tx)) ++delta.packets_at_bs;
  }

  for (const auto& node : world.nodes) {
    if (!node.alive || assignment.head_of[node.id] != ClusterAssignment::kNone || assignment.is_head(node.id)) continue;
    if (send(node.id, tx_cost(bits, distance(node.pos, bs), rc), Cause::Tx)) ++delta.packets_at_bs;
  }

  delta.consumed = world.ledger.total() - before;
  return delta;
}

}  // namespace dbsr
