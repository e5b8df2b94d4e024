#pragma once

#include <algorithm>
#include <bitset>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dbsr/random.hpp"
#include "dbsr/world.hpp"

namespace dbsr {

/// 16-bit base-station genome. Bit positions 0..7 hold X and 8..15 hold Y,
/// most-significant bit first in each half, so position 0 is the top bit of
/// the underlying word.
class Chromosome {
 public:
  static constexpr std::size_t kBits = 16;
  static constexpr std::size_t kHalf = 8;

  constexpr Chromosome() = default;
  constexpr explicit Chromosome(std::uint16_t genome) : genome_(genome) {}

  static constexpr Chromosome encode(std::uint8_t x, std::uint8_t y) {
    return Chromosome(static_cast<std::uint16_t>((std::uint16_t{x} << 8) | y));
  }

  // Accepts "1010101001101101" or "10101010|01101101"; separators '|' and ' ' are skipped.
  static Chromosome from_string(std::string_view s) {
    std::uint16_t g = 0;
    std::size_t n = 0;
    for (char ch : s) {
      if (ch == '|' || ch == ' ') continue;
      if (ch != '0' && ch != '1') throw std::invalid_argument("chromosome: bad digit");
      if (++n > kBits) throw std::invalid_argument("chromosome: more than 16 bits");
      g = static_cast<std::uint16_t>((g << 1) | (ch == '1'));
    }
    if (n != kBits) throw std::invalid_argument("chromosome: need exactly 16 bits");
    return Chromosome(g);
  }

  constexpr std::uint16_t genome() const noexcept { return genome_; }
  constexpr std::uint8_t raw_x() const noexcept { return static_cast<std::uint8_t>(genome_ >> 8); }
  constexpr std::uint8_t raw_y() const noexcept { return static_cast<std::uint8_t>(genome_ & 0xFF); }

  constexpr bool bit(std::size_t pos) const noexcept { return (genome_ >> (kBits - 1 - pos)) & 1U; }

  constexpr Chromosome flipped(std::size_t pos) const noexcept {
    return Chromosome(static_cast<std::uint16_t>(genome_ ^ (1U << (kBits - 1 - pos))));
  }

  std::string to_string() const {
    std::string s = std::bitset<16>(genome_).to_string();
    s.insert(kHalf, 1, '|');
    return s;
  }

  friend constexpr bool operator==(Chromosome, Chromosome) = default;

 private:
  std::uint16_t genome_ = 0;
};

inline int hamming_distance(Chromosome a, Chromosome b) noexcept {
  return static_cast<int>(std::bitset<16>(a.genome() ^ b.genome()).count());
}

// Raw 8-bit values are clamped to the field, so every genome decodes to a
// valid position.
inline Position decode(Chromosome c, double field_width, double field_height) noexcept {
  return {std::min<double>(c.raw_x(), field_width), std::min<double>(c.raw_y(), field_height)};
}

struct GaParams {
  std::size_t population_size = 200;
  std::size_t generations = 200;
  double crossover_rate = 0.80;
  double mutation_rate = 0.09;
  // <= 0 means "derive from the site count and field" at run time.
  double big_m = 0.0;
  std::size_t elitism = 1;
  // Listed with the other GA settings in the original experiments; standard
  // roulette selection has no use for it.
  double roulette_probability = 0.90;

  static double default_big_m(std::size_t site_count, double field_width, double field_height) noexcept {
    return static_cast<double>(site_count) * std::sqrt(2.0) * std::max(field_width, field_height) + 1.0;
  }

  // Population and generation count track the node count.
  static GaParams defaults_for(std::size_t node_count, double field_width, double field_height) {
    GaParams p;
    p.population_size = node_count;
    p.generations = node_count;
    p.big_m = default_big_m(node_count, field_width, field_height);
    return p;
  }

  void validate() const {
    if (population_size < 2) throw ConfigError("ga_population", "must be >= 2");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw ConfigError("ga_crossover", "must be in [0, 1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ConfigError("ga_mutation", "must be in [0, 1]");
    if (!(roulette_probability >= 0.0 && roulette_probability <= 1.0))
      throw ConfigError("ga_roulette_probability", "must be in [0, 1]");
    if (elitism > population_size) throw ConfigError("ga_elitism", "must be in [0, ga_population]");
    if (!std::isfinite(big_m)) throw ConfigError("ga_big_m", "must be finite");
  }
};

struct WeightedSite {
  Position pos;
  int w = 10;  // 1..10, inverse residual-energy level
};

// Quantizes a live node's residual energy onto 1..10.
inline int weight_of(double residual_energy, double initial_energy) {
  if (!(initial_energy > 0.0)) throw std::invalid_argument("weight_of: initial energy must be > 0");
  const double level = std::ceil(10.0 * residual_energy / initial_energy);
  return static_cast<int>(std::clamp(level, 1.0, 10.0));
}

inline double abf(const Position& candidate, std::span<const WeightedSite> sites) {
  if (sites.empty()) throw std::invalid_argument("abf: no sites (no live nodes)");
  double sum = 0.0;
  for (const auto& s : sites) {
    if (s.w < 1 || s.w > 10) throw std::invalid_argument("abf: site weight outside [1, 10]");
    sum += distance(candidate, s.pos) / static_cast<double>(s.w);
  }
  return sum;
}

inline double fitness(const Position& candidate, std::span<const WeightedSite> sites, double big_m) {
  return big_m - abf(candidate, sites);
}

inline std::vector<double> selection_probabilities(std::span<const double> fitnesses) {
  if (fitnesses.empty()) throw std::invalid_argument("selection_probabilities: empty population");
  double total = 0.0;
  for (double f : fitnesses) {
    if (!(f > 0.0) || !std::isfinite(f))
      throw std::invalid_argument("selection_probabilities: fitness must be positive");
    total += f;
  }
  std::vector<double> probs;
  probs.reserve(fitnesses.size());
  for (double f : fitnesses) probs.push_back(f / total);
  return probs;
}

/// Fitness-proportionate wheel built once per generation; each spin inverts
/// the cumulative distribution at a single uniform draw.
class RouletteWheel {
 public:
  explicit RouletteWheel(std::span<const double> probs) : cumulative_(probs.size()) {
    if (probs.empty()) throw std::invalid_argument("roulette: empty wheel");
    std::partial_sum(probs.begin(), probs.end(), cumulative_.begin());
  }

  std::size_t spin(Rng& rng) const {
    const double u = rng.uniform01() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

inline std::size_t roulette_select(std::span<const double> probs, Rng& rng) {
  return RouletteWheel(probs).spin(rng);
}

// Exchanges the X suffix starting at bit cut_x and the Y suffix starting at
// bit 8 + cut_y. Cuts are in 1..7.
inline std::pair<Chromosome, Chromosome> crossover_at(Chromosome a, Chromosome b, std::size_t cut_x,
                                                      std::size_t cut_y) {
  if (cut_x < 1 || cut_x > 7 || cut_y < 1 || cut_y > 7) throw std::invalid_argument("crossover: cut outside 1..7");
  const std::uint16_t x_tail = static_cast<std::uint16_t>((0xFFU >> cut_x) << 8);
  const std::uint16_t y_tail = static_cast<std::uint16_t>(0xFFU >> cut_y);
  const std::uint16_t swap = x_tail | y_tail;
  const std::uint16_t ga = a.genome();
  const std::uint16_t gb = b.genome();
  return {Chromosome(static_cast<std::uint16_t>((ga & ~swap) | (gb & swap))),
          Chromosome(static_cast<std::uint16_t>((gb & ~swap) | (ga & swap)))};
}

inline std::pair<Chromosome, Chromosome> crossover(Chromosome a, Chromosome b, Rng& rng) {
  const auto cut_x = static_cast<std::size_t>(rng.uniform_int(1, 7));
  const auto cut_y = static_cast<std::size_t>(rng.uniform_int(1, 7));
  return crossover_at(a, b, cut_x, cut_y);
}

// Flips one bit in the X half (x_pos in 0..7) and one in the Y half (y_pos in 8..15).
inline Chromosome mutate_at(Chromosome c, std::size_t x_pos, std::size_t y_pos) {
  if (x_pos > 7 || y_pos < 8 || y_pos > 15) throw std::invalid_argument("mutate: flip position outside its half");
  return c.flipped(x_pos).flipped(y_pos);
}

inline Chromosome mutate(Chromosome c, Rng& rng) {
  const auto x_pos = static_cast<std::size_t>(rng.uniform_int(0, 7));
  const auto y_pos = static_cast<std::size_t>(rng.uniform_int(8, 15));
  return mutate_at(c, x_pos, y_pos);
}

struct GaResult {
  Position position;
  double best_abf = 0.0;
  Chromosome best;
  // Best-ever abf after initialization (index 0) and after each generation.
  std::vector<double> best_history;
};

namespace detail {

// abf memoized per genome; populations revisit the same genomes constantly.
class AbfCache {
 public:
  AbfCache(std::span<const WeightedSite> sites, double w, double h)
      : sites_(sites), width_(w), height_(h), values_(std::size_t{1} << 16, kUnset) {}

  double operator()(Chromosome c) {
    double& v = values_[c.genome()];
    if (std::isnan(v)) v = abf(decode(c, width_, height_), sites_);
    return v;
  }

 private:
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
  std::span<const WeightedSite> sites_;
  double width_;
  double height_;
  std::vector<double> values_;
};

}  // namespace detail

/// Generational GA over base-station genomes.
///
/// Each generation: the `elitism` best survive unchanged, the rest are bred
/// from roulette-selected parent pairs, crossed with probability
/// `crossover_rate` (cloned otherwise) and each child mutated with
/// probability `mutation_rate`. Returns the best genome ever evaluated.
inline GaResult run_ga(std::span<const WeightedSite> sites, const GaParams& params, double field_width,
                       double field_height, Rng& rng) {
  if (sites.empty()) throw std::invalid_argument("abf: no sites (no live nodes)");
  params.validate();
  const double big_m =
      params.big_m > 0.0 ? params.big_m : GaParams::default_big_m(sites.size(), field_width, field_height);

  detail::AbfCache cost(sites, field_width, field_height);
  const std::size_t pop_size = params.population_size;

  std::vector<Chromosome> population(pop_size);
  for (auto& c : population) c = Chromosome(static_cast<std::uint16_t>(rng.uniform_int(0, 0xFFFF)));

  std::vector<double> costs(pop_size);
  std::vector<double> fitnesses(pop_size);
  GaResult result;
  result.best_abf = std::numeric_limits<double>::infinity();
  result.best_history.reserve(params.generations + 1);

  auto evaluate = [&] {
    for (std::size_t i = 0; i < pop_size; ++i) {
      costs[i] = cost(population[i]);
      fitnesses[i] = big_m - costs[i];
      if (costs[i] < result.best_abf) {
        result.best_abf = costs[i];
        result.best = population[i];
      }
    }
    result.best_history.push_back(result.best_abf);
  };

  evaluate();

  std::vector<std::size_t> order(pop_size);
  std::vector<Chromosome> next;
  next.reserve(pop_size + 1);
  for (std::size_t gen = 0; gen < params.generations; ++gen) {
    next.clear();
    if (params.elitism > 0) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
      for (std::size_t e = 0; e < params.elitism; ++e) next.push_back(population[order[e]]);
    }

    const RouletteWheel wheel(selection_probabilities(fitnesses));
    while (next.size() < pop_size) {
      const Chromosome a = population[wheel.spin(rng)];
      const Chromosome b = population[wheel.spin(rng)];
      auto [c1, c2] = rng.bernoulli(params.crossover_rate) ? crossover(a, b, rng) : std::pair{a, b};
      if (rng.bernoulli(params.mutation_rate)) c1 = mutate(c1, rng);
      if (rng.bernoulli(params.mutation_rate)) c2 = mutate(c2, rng);
      next.push_back(c1);
      if (next.size() < pop_size) next.push_back(c2);
    }
    population.swap(next);
    evaluate();
  }

  result.position = decode(result.best, field_width, field_height);
  return result;
}

struct OracleResult {
  Position position;
  double abf = 0.0;
};

// Global minimum of abf over every decodable genome. Genomes are scanned in
// ascending order, so the first strict minimum has the smallest X, then Y.
inline OracleResult exhaustive_oracle(std::span<const WeightedSite> sites, double field_width, double field_height) {
  OracleResult best{{}, std::numeric_limits<double>::infinity()};
  for (std::uint32_t g = 0; g <= 0xFFFF; ++g) {
    const Position p = decode(Chromosome(static_cast<std::uint16_t>(g)), field_width, field_height);
    const double v = abf(p, sites);
    if (v < best.abf) best = {p, v};
  }
  return best;
}

}  // namespace dbsr
