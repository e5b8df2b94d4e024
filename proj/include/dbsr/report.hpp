#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbsr/config.hpp"
#include "dbsr/sim.hpp"

namespace dbsr {

struct Scenario {
  std::string name;
  ProtocolKind protocol = ProtocolKind::Leach;
  bool dbsr = false;
};

inline std::string scenario_name(ProtocolKind protocol, bool dbsr) {
  return std::string(to_string(protocol)) + (dbsr ? "-DBSR" : "");
}

inline std::vector<Scenario> comparison_scenarios() {
  std::vector<Scenario> out;
  for (ProtocolKind k : {ProtocolKind::Leach, ProtocolKind::Heed})
    for (bool d : {false, true}) out.push_back({scenario_name(k, d), k, d});
  return out;
}

struct ScenarioResult {
  Scenario scenario;
  BatchResult batch;
  // Only set on DBSR scenarios of a comparison that also ran the baseline.
  std::optional<double> improvement_fnd_pct;
  std::optional<double> improvement_hna_pct;
};

struct Report {
  std::vector<ScenarioResult> scenarios;
  bool comparison = false;
};

// (variant - base) / base * 100; undefined when the base is missing or zero.
inline std::optional<double> improvement_pct(const std::optional<double>& base, const std::optional<double>& variant) {
  if (!base || !variant || *base == 0.0) return std::nullopt;
  return (*variant - *base) / *base * 100.0;
}

inline ScenarioResult run_scenario(const RunSpec& spec, const Scenario& scenario) {
  ProtocolConfig protocol = spec.protocol;
  protocol.kind = scenario.protocol;
  ScenarioResult r;
  r.scenario = scenario;
  r.batch = batch(spec.network, protocol, spec.policy(scenario.dbsr), spec.runs, spec.rounds, spec.threads);
  return r;
}

/// Runs every scenario on the same seeds and reports each DBSR variant's
/// median FND/HNA gain over the static scenario of the same protocol.
inline Report compare(const RunSpec& spec, const std::vector<Scenario>& scenarios) {
  Report report;
  report.comparison = true;
  for (const auto& s : scenarios) report.scenarios.push_back(run_scenario(spec, s));
  for (auto& v : report.scenarios) {
    if (!v.scenario.dbsr) continue;
    for (const auto& b : report.scenarios) {
      if (b.scenario.dbsr || b.scenario.protocol != v.scenario.protocol) continue;
      v.improvement_fnd_pct = improvement_pct(b.batch.fnd_median, v.batch.fnd_median);
      v.improvement_hna_pct = improvement_pct(b.batch.hna_median, v.batch.hna_median);
      break;
    }
  }
  return report;
}

inline Report run(const RunSpec& spec) {
  if (spec.compare) return compare(spec, comparison_scenarios());
  Report report;
  report.scenarios.push_back(run_scenario(spec, {scenario_name(spec.protocol.kind, spec.dbsr), spec.protocol.kind, spec.dbsr}));
  return report;
}

inline constexpr const char* kCsvHeader =
    "scenario,run,round,bs_x,bs_y,total_residual_j,alive_count,consumed_j,heads_count";

// 9 significant digits; undefined values print as NA.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string format_number(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

inline void emit_csv(const Report& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& s : report.scenarios) {
    for (std::size_t run = 0; run < s.batch.runs.size(); ++run) {
      for (const auto& m : s.batch.runs[run].metrics) {
        out << s.scenario.name << ',' << run << ',' << m.round << ',' << format_number(m.bs_pos.x) << ','
            << format_number(m.bs_pos.y) << ',' << format_number(m.total_residual) << ',' << m.alive_count << ','
            << format_number(m.consumed_this_round) << ',' << m.heads_count << '\n';
      }
    }
  }
  out << '\n' << "scenario,metric,value\n";
  for (const auto& s : report.scenarios) {
    auto row = [&](const char* metric, const std::optional<double>& v) {
      out << s.scenario.name << ',' << metric << ',' << format_number(v) << '\n';
    };
    row("fnd_median", s.batch.fnd_median);
    row("hna_median", s.batch.hna_median);
    row("fnd_mean", s.batch.fnd_mean);
    row("hna_mean", s.batch.hna_mean);
    if (report.comparison && s.scenario.dbsr) {
      row("improvement_fnd_pct", s.improvement_fnd_pct);
      row("improvement_hna_pct", s.improvement_hna_pct);
    }
  }
}

inline void write_csv(const Report& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_csv(report, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace dbsr
