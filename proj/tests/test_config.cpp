#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dbsr/config.hpp"
#include "dbsr/report.hpp"

using namespace dbsr;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("dbsr_test_" + name);
  std::ofstream(path) << contents;
  return path;
}

std::string key_of(const std::vector<Setting>& overrides) {
  try {
    parse_config(std::nullopt, overrides);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

std::string csv_of(const Report& r) {
  std::ostringstream out;
  emit_csv(r, out);
  return out.str();
}

}  // namespace

TEST(ParseConfig, EmptyConfigGivesTableDefaults) {
  const RunSpec s = parse_config(std::nullopt);
  EXPECT_EQ(s.network.field_width, 200.0);
  EXPECT_EQ(s.network.field_height, 200.0);
  EXPECT_EQ(s.network.node_count, 200u);
  EXPECT_EQ(s.network.initial_energy, 1.0);
  EXPECT_EQ(s.network.data_packet_bits, 1600u);
  EXPECT_EQ(s.network.e_elec, 50e-9);
  EXPECT_EQ(s.network.e_fs, 10e-9);
  EXPECT_EQ(s.network.sensing_radius, 15.0);
  const GaParams ga = s.ga_params();
  EXPECT_EQ(ga.population_size, 200u);
  EXPECT_EQ(ga.generations, 200u);
  EXPECT_EQ(ga.crossover_rate, 0.80);
  EXPECT_EQ(ga.mutation_rate, 0.09);
  EXPECT_EQ(ga.roulette_probability, 0.90);
  EXPECT_EQ(s.protocol.kind, ProtocolKind::Leach);
  EXPECT_FALSE(s.dbsr);
  EXPECT_EQ(s.static_position(), (Position{100, 100}));
}

TEST(ParseConfig, GaSizeFollowsNodeCountUnlessSet) {
  EXPECT_EQ(parse_config(std::nullopt, {{"node_count", "50"}}).ga_params().population_size, 50u);
  const RunSpec s = parse_config(std::nullopt, {{"node_count", "50"}, {"ga_generations", "7"}});
  EXPECT_EQ(s.ga_params().generations, 7u);
  EXPECT_EQ(s.ga_params().population_size, 50u);
}

TEST(ParseConfig, FileThenFlags) {
  const auto path = temp_file("precedence.cfg",
                              "# experiment\n"
                              "protocol = leach\n"
                              "node_count = 120   # trailing comment\n"
                              "\n"
                              "area = 150x90\n"
                              "dbsr = on\n");
  const RunSpec from_file = parse_config(path);
  EXPECT_EQ(from_file.protocol.kind, ProtocolKind::Leach);
  EXPECT_EQ(from_file.network.node_count, 120u);
  EXPECT_EQ(from_file.network.field_width, 150.0);
  EXPECT_EQ(from_file.network.field_height, 90.0);
  EXPECT_TRUE(from_file.dbsr);

  const RunSpec flagged = parse_config(path, {{"protocol", "heed"}});
  EXPECT_EQ(flagged.protocol.kind, ProtocolKind::Heed);
  std::filesystem::remove(path);
}

TEST(ParseConfig, ErrorsNameTheKey) {
  EXPECT_EQ(key_of({{"node_count", "0"}}), "node_count");
  EXPECT_EQ(key_of({{"node_count", "-3"}}), "node_count");
  EXPECT_EQ(key_of({{"ga_mutation", "1.5"}}), "ga_mutation");
  EXPECT_EQ(key_of({{"ga_crossover", "abc"}}), "ga_crossover");
  EXPECT_EQ(key_of({{"protocol", "aodv"}}), "protocol");
  EXPECT_EQ(key_of({{"area", "200"}}), "area");
  EXPECT_EQ(key_of({{"initial_energy", "0"}}), "initial_energy");
  EXPECT_EQ(key_of({{"bogus", "1"}}), "bogus");
  EXPECT_EQ(key_of({{"runs", "0"}}), "runs");
  EXPECT_EQ(key_of({{"ga_population", "1"}}), "ga_population");
  EXPECT_EQ(key_of({{"out", "/no/such/dir/x.csv"}}), "out");
  EXPECT_EQ(key_of({{"static_x", "250"}}), "static_x/static_y");
  EXPECT_EQ(key_of({{"heed_p_min", "0.5"}}), "heed_p_min");

  try {
    parse_config(std::nullopt, {{"node_count", "0"}});
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(">= 1"), std::string::npos);
  }
}

TEST(ParseConfig, MalformedFile) {
  const auto path = temp_file("malformed.cfg", "node_count 5\n");
  EXPECT_THROW(parse_config(path), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW(parse_config(std::filesystem::path("/nonexistent/dbsr.cfg")), ConfigError);
  const auto unknown = temp_file("unknown.cfg", "colour = blue\n");
  EXPECT_EQ([&] {
    try {
      parse_config(unknown);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string();
  }(), "colour");
  std::filesystem::remove(unknown);
}

TEST(Report, ImprovementPercent) {
  EXPECT_EQ(improvement_pct(100.0, 135.0), 35.0);
  EXPECT_EQ(improvement_pct(10.0, 10.0), 0.0);
  EXPECT_FALSE(improvement_pct(std::nullopt, 3.0));
  EXPECT_FALSE(improvement_pct(0.0, 3.0));
}

TEST(Report, SelfComparisonIsZero) {
  RunSpec s = parse_config(std::nullopt, {{"node_count", "30"}, {"initial_energy", "0.02"}, {"rounds", "400"},
                                          {"runs", "3"}, {"ga_population", "30"}, {"ga_generations", "20"}});
  const Report r = compare(s, {{"A", ProtocolKind::Leach, false}, {"B", ProtocolKind::Leach, true},
                               {"C", ProtocolKind::Leach, true}});
  ASSERT_EQ(r.scenarios.size(), 3u);
  EXPECT_EQ(r.scenarios[1].batch.fnd_median, r.scenarios[2].batch.fnd_median);
  const auto self = improvement_pct(r.scenarios[1].batch.fnd_median, r.scenarios[2].batch.fnd_median);
  ASSERT_TRUE(self);
  EXPECT_EQ(*self, 0.0);
  EXPECT_EQ(r.scenarios[1].improvement_fnd_pct, r.scenarios[2].improvement_fnd_pct);
  EXPECT_FALSE(r.scenarios[0].improvement_fnd_pct);
}

TEST(Report, ZeroRoundsCsvIsHeaderPlusSummary) {
  const RunSpec s = parse_config(std::nullopt, {{"rounds", "0"}, {"node_count", "10"}});
  const std::string csv = csv_of(run(s));
  EXPECT_EQ(csv,
            "scenario,run,round,bs_x,bs_y,total_residual_j,alive_count,consumed_j,heads_count\n"
            "\n"
            "scenario,metric,value\n"
            "LEACH,fnd_median,NA\n"
            "LEACH,hna_median,NA\n"
            "LEACH,fnd_mean,NA\n"
            "LEACH,hna_mean,NA\n");
}

TEST(Report, CsvRowsAndComparisonRows) {
  const RunSpec s = parse_config(std::nullopt, {{"rounds", "3"}, {"node_count", "20"}, {"compare", "on"},
                                                {"runs", "2"}, {"ga_population", "20"}, {"ga_generations", "10"}});
  const std::string csv = csv_of(run(s));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  int rows = 0;
  std::string last_scenario;
  while (std::getline(in, line) && !line.empty()) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
  }
  EXPECT_EQ(rows, 4 * 2 * 3);
  for (const char* name : {"LEACH,", "LEACH-DBSR,", "HEED,", "HEED-DBSR,"})
    EXPECT_NE(csv.find(std::string("\n") + name + "0,1,"), std::string::npos) << name;
  EXPECT_NE(csv.find("LEACH-DBSR,improvement_fnd_pct,"), std::string::npos);
  EXPECT_NE(csv.find("HEED-DBSR,improvement_hna_pct,"), std::string::npos);
  EXPECT_EQ(csv.find("LEACH,improvement_fnd_pct"), std::string::npos);
}

TEST(Report, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(199.99999999), "200");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(std::optional<double>{}), "NA");
}

TEST(Report, WriteFailureNamesPath) {
  const RunSpec s = parse_config(std::nullopt, {{"rounds", "0"}, {"node_count", "5"}});
  try {
    write_csv(run(s), "/nonexistent-dir/out.csv");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/out.csv"), std::string::npos);
  }
}

TEST(Report, SameSpecSameBytes) {
  const RunSpec s = parse_config(std::nullopt, {{"rounds", "5"}, {"node_count", "30"}, {"dbsr", "on"}, {"runs", "2"},
                                                {"ga_population", "30"}, {"ga_generations", "15"}});
  EXPECT_EQ(csv_of(run(s)), csv_of(run(s)));
}
