#include <gtest/gtest.h>

#include "dbsr/energy.hpp"

using namespace dbsr;

namespace {

const RadioConstants kTable{50e-9, 10e-9, 5e-9};

NodeState node_with(double energy) {
  NodeState n;
  n.id = 4;
  n.residual_energy = energy;
  n.alive = true;
  return n;
}

}  // namespace

TEST(RadioModel, TransmitCost) {
  // 50e-9*1600 + 10e-9*1600*10^2
  EXPECT_NEAR(tx_cost(1600, 10.0, kTable), 1.68e-3, 1e-15);
  EXPECT_NEAR(tx_cost(1600, 0.0, kTable), 8.0e-5, 1e-18);
  EXPECT_THROW(tx_cost(0, 5.0, kTable), std::invalid_argument);
}

TEST(RadioModel, ReceiveCost) {
  EXPECT_NEAR(rx_cost(1600, kTable), 8.0e-5, 1e-18);
  EXPECT_NEAR(rx_cost(1, kTable), 5.0e-8, 1e-22);
  EXPECT_THROW(rx_cost(0, kTable), std::invalid_argument);
  for (std::uint64_t k : {1ULL, 8ULL, 1600ULL, 123457ULL}) EXPECT_EQ(rx_cost(k, kTable), tx_cost(k, 0.0, kTable));
}

TEST(RadioModel, Monotone) {
  for (std::uint64_t k = 1; k < 5000; k += 97) {
    double prev = 0.0;
    for (double d = 0.0; d <= 300.0; d += 7.5) {
      const double c = tx_cost(k, d, kTable);
      EXPECT_GE(c, prev);
      EXPECT_GE(c, rx_cost(k, kTable));
      EXPECT_LE(tx_cost(k, d, kTable), tx_cost(k + 1, d, kTable));
      prev = c;
    }
    EXPECT_LE(rx_cost(k, kTable), rx_cost(k + 1, kTable));
  }
}

TEST(Charge, PartialDebit) {
  const auto r = charge(node_with(1.0), 0.3, Cause::Tx);
  EXPECT_DOUBLE_EQ(r.node.residual_energy, 0.7);
  EXPECT_TRUE(r.node.alive);
  EXPECT_DOUBLE_EQ(r.entry.amount, 0.3);
  EXPECT_EQ(r.entry.node_id, 4u);
}

TEST(Charge, ClampsAtZeroAndKills) {
  const auto r = charge(node_with(0.2), 0.5, Cause::Rx);
  EXPECT_EQ(r.node.residual_energy, 0.0);
  EXPECT_FALSE(r.node.alive);
  EXPECT_DOUBLE_EQ(r.entry.amount, 0.2);
  EXPECT_EQ(r.entry.cause, Cause::Rx);
}

TEST(Charge, ExactDrainKills) {
  const auto r = charge(node_with(0.25), 0.25, Cause::Tx);
  EXPECT_EQ(r.node.residual_energy, 0.0);
  EXPECT_FALSE(r.node.alive);
}

TEST(Charge, DeadNodeFailsLoudly) {
  NodeState dead = node_with(0.0);
  dead.alive = false;
  EXPECT_THROW(charge(dead, 0.1, Cause::Tx), std::logic_error);
  EXPECT_THROW(charge(node_with(1.0), 0.0, Cause::Tx), std::logic_error);
}

TEST(Ledger, ConservationOverRandomDebits) {
  Rng rng(17);
  std::vector<NodeState> nodes(50);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = node_with(1.0);
    nodes[i].id = i;
  }
  EnergyLedger ledger(nodes.size());
  for (int step = 0; step < 20000; ++step) {
    auto& n = nodes[rng.uniform_int(0, nodes.size() - 1)];
    if (!n.alive) continue;
    debit(n, rng.uniform(1e-6, 0.05), static_cast<Cause>(rng.uniform_int(0, 3)), ledger);
  }
  double residual = 0.0;
  for (const auto& n : nodes) {
    residual += n.residual_energy;
    EXPECT_GE(n.residual_energy, 0.0);
    EXPECT_EQ(n.alive, n.residual_energy > 0.0);
  }
  EXPECT_NEAR((ledger.total() + residual) / 50.0, 1.0, 1e-12);
  const double by_cause = ledger.cause_total(Cause::Tx) + ledger.cause_total(Cause::Rx) +
                          ledger.cause_total(Cause::Aggregate) + ledger.cause_total(Cause::Report);
  EXPECT_NEAR(by_cause, ledger.total(), 1e-9);
}
