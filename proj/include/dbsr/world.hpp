#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbsr/random.hpp"

namespace dbsr {

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(const Position& a, const Position& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline double distance_squared(const Position& a, const Position& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

enum class Role { Member, ClusterHead };

struct NodeState {
  std::size_t id = 0;
  Position pos;
  double residual_energy = 0.0;  // J
  bool alive = false;
  Role role = Role::Member;
};

/// A configuration value outside its accepted range. `key()` names the
/// offending field so front ends can report it verbatim.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct NetworkConfig {
  double field_width = 200.0;   // m
  double field_height = 200.0;  // m
  std::size_t node_count = 200;
  double initial_energy = 1.0;         // J
  std::uint64_t data_packet_bits = 1600;  // 200 bytes
  std::uint64_t control_packet_bits = 0;  // 0: reports piggyback on data
  double sensing_radius = 15.0;           // m, carried but not used
  double e_elec = 50e-9;                  // J/bit
  double e_fs = 10e-9;                    // J/bit/m^2
  double e_da = 5e-9;                     // J/bit/signal
  std::uint64_t seed = 1;

  void validate() const {
    auto positive = [](const char* key, double v) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be > 0");
    };
    positive("field_width", field_width);
    positive("field_height", field_height);
    if (node_count < 1) throw ConfigError("node_count", "must be >= 1");
    positive("initial_energy", initial_energy);
    if (data_packet_bits < 1) throw ConfigError("data_packet_bits", "must be >= 1");
    positive("sensing_radius", sensing_radius);
    positive("e_elec", e_elec);
    positive("e_fs", e_fs);
    if (!(e_da >= 0.0) || !std::isfinite(e_da)) throw ConfigError("e_da", "must be >= 0");
  }

  Position center() const noexcept { return {field_width / 2.0, field_height / 2.0}; }

  bool contains(const Position& p) const noexcept {
    return p.x >= 0.0 && p.x <= field_width && p.y >= 0.0 && p.y <= field_height;
  }
};

// Uniform i.i.d. placement over the field; every node starts alive at full charge.
inline std::vector<NodeState> deploy(const NetworkConfig& config, Rng& rng) {
  std::vector<NodeState> nodes;
  nodes.reserve(config.node_count);
  for (std::size_t i = 0; i < config.node_count; ++i) {
    NodeState n;
    n.id = i;
    n.pos.x = rng.uniform01() * config.field_width;
    n.pos.y = rng.uniform01() * config.field_height;
    n.residual_energy = config.initial_energy;
    n.alive = true;
    n.role = Role::Member;
    nodes.push_back(n);
  }
  return nodes;
}

}  // namespace dbsr
