#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dbsr/ga.hpp"
#include "dbsr/protocols.hpp"
#include "dbsr/sim.hpp"
#include "dbsr/world.hpp"

namespace dbsr {

using Setting = std::pair<std::string, std::string>;

/// Everything one invocation needs: network, protocol, placement policy,
/// GA settings, repetition counts and the output path.
struct RunSpec {
  NetworkConfig network;
  ProtocolConfig protocol;
  bool dbsr = false;
  std::optional<double> static_x;  // static BS; each axis defaults to the field center
  std::optional<double> static_y;
  GaParams ga;
  bool ga_population_set = false;
  bool ga_generations_set = false;
  std::size_t runs = 1;
  std::size_t rounds = 20;
  std::size_t threads = 0;  // 0: one per hardware thread
  bool compare = false;
  std::string out;  // empty: stdout

  // Effective GA settings; population and generations follow node_count
  // unless given explicitly.
  GaParams ga_params() const {
    GaParams p = ga;
    if (!ga_population_set) p.population_size = network.node_count;
    if (!ga_generations_set) p.generations = network.node_count;
    if (!(p.big_m > 0.0))
      p.big_m = GaParams::default_big_m(network.node_count, network.field_width, network.field_height);
    return p;
  }

  Position static_position() const {
    const Position c = network.center();
    return {static_x.value_or(c.x), static_y.value_or(c.y)};
  }

  RepositionPolicy policy(bool use_dbsr) const {
    if (use_dbsr) return DbsrPolicy{ga_params()};
    return StaticPolicy{static_position()};
  }

  RepositionPolicy policy() const { return policy(dbsr); }

  void validate() const {
    network.validate();
    protocol.validate();
    ga_params().validate();
    if (!network.contains(static_position())) throw ConfigError("static_x/static_y", "static BS must lie inside the field");
    if (runs < 1) throw ConfigError("runs", "must be >= 1");
    if (!out.empty()) {
      const auto parent = std::filesystem::path(out).parent_path();
      if (!parent.empty() && !std::filesystem::is_directory(parent))
        throw ConfigError("out", "directory '" + parent.string() + "' does not exist");
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value, const char* what) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  if (!value.empty() && value.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || value.empty())
    throw ConfigError(key, std::string("expected ") + what + ", got '" + value + "'");
  return out;
}

inline double parse_real(const std::string& key, const std::string& value) {
  return parse_number<double>(key, value, "a real number");
}

inline std::size_t parse_count(const std::string& key, const std::string& value, const char* range) {
  if (!value.empty() && value.front() == '-') throw ConfigError(key, std::string("must be ") + range);
  return parse_number<std::size_t>(key, value, "a non-negative integer");
}

inline double parse_rate(const std::string& key, const std::string& value) {
  const double v = parse_real(key, value);
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(key, "must be in [0, 1]");
  return v;
}

inline double parse_positive(const std::string& key, const std::string& value) {
  const double v = parse_real(key, value);
  if (!(v > 0.0)) throw ConfigError(key, "must be > 0");
  return v;
}

inline bool parse_switch(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected on|off, got '" + value + "'");
}

}  // namespace detail

// Applies one key/value pair. Unknown keys and out-of-range values throw
// ConfigError naming the key.
inline void apply_setting(RunSpec& spec, const std::string& key, const std::string& value) {
  using namespace detail;
  auto& net = spec.network;
  if (key == "field_width") {
    net.field_width = parse_positive(key, value);
  } else if (key == "field_height") {
    net.field_height = parse_positive(key, value);
  } else if (key == "area") {
    const auto x = lower(value).find('x');
    if (x == std::string::npos) throw ConfigError(key, "expected WxH, got '" + value + "'");
    net.field_width = parse_positive(key, trim(value.substr(0, x)));
    net.field_height = parse_positive(key, trim(value.substr(x + 1)));
  } else if (key == "node_count") {
    net.node_count = parse_count(key, value, ">= 1");
    if (net.node_count < 1) throw ConfigError(key, "must be >= 1");
  } else if (key == "initial_energy") {
    net.initial_energy = parse_positive(key, value);
  } else if (key == "data_packet_bits") {
    net.data_packet_bits = parse_count(key, value, ">= 1");
    if (net.data_packet_bits < 1) throw ConfigError(key, "must be >= 1");
  } else if (key == "control_packet_bits") {
    net.control_packet_bits = parse_count(key, value, ">= 0");
  } else if (key == "sensing_radius") {
    net.sensing_radius = parse_positive(key, value);
  } else if (key == "e_elec") {
    net.e_elec = parse_positive(key, value);
  } else if (key == "e_fs") {
    net.e_fs = parse_positive(key, value);
  } else if (key == "e_da") {
    net.e_da = parse_real(key, value);
    if (!(net.e_da >= 0.0)) throw ConfigError(key, "must be >= 0");
  } else if (key == "seed") {
    net.seed = parse_number<std::uint64_t>(key, value, "an unsigned 64-bit integer");
  } else if (key == "protocol") {
    const std::string v = lower(value);
    if (v == "leach") spec.protocol.kind = ProtocolKind::Leach;
    else if (v == "heed") spec.protocol.kind = ProtocolKind::Heed;
    else throw ConfigError(key, "expected leach|heed, got '" + value + "'");
  } else if (key == "dbsr") {
    spec.dbsr = parse_switch(key, value);
  } else if (key == "compare") {
    spec.compare = parse_switch(key, value);
  } else if (key == "static_x" || key == "static_y") {
    const double v = parse_real(key, value);
    if (!(v >= 0.0)) throw ConfigError(key, "must be >= 0 and inside the field");
    (key == "static_x" ? spec.static_x : spec.static_y) = v;
  } else if (key == "rounds") {
    spec.rounds = parse_count(key, value, ">= 0");
  } else if (key == "runs") {
    spec.runs = parse_count(key, value, ">= 1");
    if (spec.runs < 1) throw ConfigError(key, "must be >= 1");
  } else if (key == "threads") {
    spec.threads = parse_count(key, value, ">= 0");
  } else if (key == "ga_population") {
    spec.ga.population_size = parse_count(key, value, ">= 2");
    if (spec.ga.population_size < 2) throw ConfigError(key, "must be >= 2");
    spec.ga_population_set = true;
  } else if (key == "ga_generations") {
    spec.ga.generations = parse_count(key, value, ">= 0");
    spec.ga_generations_set = true;
  } else if (key == "ga_crossover") {
    spec.ga.crossover_rate = parse_rate(key, value);
  } else if (key == "ga_mutation") {
    spec.ga.mutation_rate = parse_rate(key, value);
  } else if (key == "ga_elitism") {
    spec.ga.elitism = parse_count(key, value, ">= 0");
  } else if (key == "ga_big_m") {
    spec.ga.big_m = parse_positive(key, value);
  } else if (key == "ga_roulette_probability") {
    spec.ga.roulette_probability = parse_rate(key, value);
  } else if (key == "leach_p") {
    spec.protocol.leach.ch_fraction = parse_real(key, value);
    spec.protocol.leach.validate();
  } else if (key == "heed_c_prob") {
    spec.protocol.heed.c_prob = parse_real(key, value);
    if (!(spec.protocol.heed.c_prob > 0.0 && spec.protocol.heed.c_prob < 1.0))
      throw ConfigError(key, "must be in (0, 1)");
  } else if (key == "heed_p_min") {
    spec.protocol.heed.p_min = parse_real(key, value);
    if (!(spec.protocol.heed.p_min > 0.0 && spec.protocol.heed.p_min < 1.0))
      throw ConfigError(key, "must be in (0, 1)");
  } else if (key == "heed_max_iterations") {
    spec.protocol.heed.max_iterations = parse_count(key, value, ">= 1");
    if (spec.protocol.heed.max_iterations < 1) throw ConfigError(key, "must be >= 1");
  } else if (key == "heed_cluster_radius") {
    spec.protocol.heed.cluster_radius = parse_positive(key, value);
  } else if (key == "out") {
    spec.out = value;
  } else {
    throw ConfigError(key, "unknown key");
  }
}

/// Reads `key = value` lines; `#` starts a comment, blank lines are ignored.
inline std::vector<Setting> parse_config_text(std::string_view text) {
  std::vector<Setting> settings;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = detail::trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value', got '" + content + "'");
    std::string key = detail::trim(std::string_view(content).substr(0, eq));
    std::string value = detail::trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "missing key");
    settings.emplace_back(std::move(key), std::move(value));
  }
  return settings;
}

inline std::vector<Setting> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// File settings first, then overrides (flags) on top; the result is validated.
inline RunSpec parse_config(const std::optional<std::filesystem::path>& file,
                            const std::vector<Setting>& overrides = {}) {
  RunSpec spec;
  if (file)
    for (const auto& [k, v] : read_config_file(*file)) apply_setting(spec, k, v);
  for (const auto& [k, v] : overrides) apply_setting(spec, k, v);
  spec.validate();
  return spec;
}

}  // namespace dbsr
