#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "relgame/reliability.hpp"

namespace relgame {
namespace {

using fixtures::A;
using fixtures::B;
using fixtures::C;
using fixtures::D;
using fixtures::E;

TEST(AlphaTest, Examples) {
  const std::vector<double> ones{1.0, 1.0, 1.0};
  EXPECT_EQ(alpha(ones, Coalition(3, {0, 2}), Coalition(3, {0, 2})), 1.0);
  const std::vector<double> half{0.5, 0.5};
  EXPECT_DOUBLE_EQ(alpha(half, Coalition(2, {0}), Coalition(2, {0, 1})), 0.25);
  EXPECT_THROW(alpha(half, Coalition(2, {0, 1}), Coalition(2, {0})), UsageError);
}

TEST(AlphaTest, SumsToOneOverSubcoalitions) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 10;
    const auto r = oracle::random_survival(rng, n);
    std::uniform_int_distribution<Mask> pick(0, (Mask{1} << n) - 1);
    const Coalition c(n, pick(rng));
    double total = 0.0;
    for_each_submask(c.bits(), [&](Mask s) { total += alpha(r, Coalition(n, s), c); });
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ExactValueTest, BridgeNetworkValues) {
  const auto g = fixtures::bridge_game();
  EXPECT_NEAR(exact_value(g, Coalition(5, {A, B})), 0.05, 1e-12);
  EXPECT_NEAR(exact_value(g, Coalition(5, {C, D})), 0.05, 1e-12);
  EXPECT_NEAR(exact_value(g, Coalition(5, {A, D, E})), 0.125, 1e-12);
  EXPECT_NEAR(exact_value(g, Coalition(5, {A, B, C, D})), 0.0975, 1e-12);
  EXPECT_NEAR(exact_value(g, Coalition::grand(5)), 0.19875, 1e-12);
}

TEST(ExactValueTest, SerialExample) {
  const ReliabilityGame g(fixtures::serial_network(), {0.5, 0.5, 0.5, 0.5});
  EXPECT_NEAR(exact_value(g, Coalition(4, {0, 1, 2})), 1.0 / 8.0, 1e-12);
  EXPECT_NEAR(exact_value(g, Coalition::grand(4)), 1.0 - (7.0 / 8.0) * 0.5, 1e-12);
}

TEST(ExactValueTest, CertainSurvivalGivesBaseGame) {
  const ReliabilityGame g(fixtures::bridge_network(), std::vector<double>(5, 1.0));
  for (Mask m = 0; m < 32; ++m) {
    EXPECT_EQ(exact_value(g, Coalition(5, m)), g.base.wins(m) ? 1.0 : 0.0);
  }
}

TEST(ExactValueTest, ErrorsAndCaps) {
  const auto g = fixtures::bridge_game();
  EXPECT_THROW(exact_value(g, Coalition(4)), UsageError);
  EXPECT_THROW(exact_value(g, Coalition::grand(5), 4), Refusal);
  EXPECT_THROW(ReliabilityGame(fixtures::bridge_network(), {0.5}), UsageError);
  EXPECT_THROW(ReliabilityGame(fixtures::single_edge(), {1.2}), UsageError);
}

TEST(ExactValueTest, MatchesOracleAndTableOnRandomGames) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + trial % 10;
    const ReliabilityGame g(oracle::random_explicit_game(rng, n, 1 + trial % 4),
                            oracle::random_survival(rng, n));
    const auto table = reliability_table(g);
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
      const double expected = oracle::extension_value(g, m);
      EXPECT_NEAR(exact_value(g, Coalition(n, m)), expected, 1e-12);
      EXPECT_NEAR(table[m], expected, 1e-12);
    }
  }
}

TEST(ReliabilityProperties, BoundaryCollapse) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial;
    const auto base = oracle::random_explicit_game(rng, n, 3);
    const ReliabilityGame sure(base, std::vector<double>(n, 1.0));
    const ReliabilityGame dead(base, std::vector<double>(n, 0.0));
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
      EXPECT_EQ(exact_value(sure, Coalition(n, m)), base.wins(m) ? 1.0 : 0.0);
      EXPECT_EQ(exact_value(dead, Coalition(n, m)), 0.0);
    }
  }
}

TEST(ReliabilityProperties, MonotoneBasePreservedAndRangeIsUnitInterval) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 1 + trial % 10;
    const ReliabilityGame g(oracle::random_explicit_game(rng, n, 3), oracle::random_survival(rng, n));
    const auto v = reliability_table(g);
    EXPECT_EQ(v[0], 0.0);
    for (Mask m = 0; m < v.size(); ++m) {
      EXPECT_GE(v[m], 0.0);
      EXPECT_LE(v[m], 1.0 + 1e-15);
      for (int i = 0; i < n; ++i) {
        if (m & (Mask{1} << i)) {
          EXPECT_LE(v[m & ~(Mask{1} << i)], v[m] + 1e-15);
        }
      }
    }
  }
}

TEST(ReliabilityProperties, RaisingSurvivalNeverLowersValue) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 10;
    const auto base = oracle::random_explicit_game(rng, n, 3);
    auto r = oracle::random_survival(rng, n);
    const int i = static_cast<int>(rng() % n);
    const ReliabilityGame low(base, r);
    r[i] = r[i] + (1.0 - r[i]) * u(rng);
    const ReliabilityGame high(base, r);
    const auto vl = reliability_table(low);
    const auto vh = reliability_table(high);
    for (Mask m = 0; m < vl.size(); ++m) {
      if (m & (Mask{1} << i)) {
        EXPECT_GE(vh[m], vl[m] - 1e-15);
      }
    }
  }
}

TEST(SurvivorPmfTest, Examples) {
  EXPECT_EQ(survivor_pmf(0, 0.3), (std::vector<double>{1.0}));
  const auto fair = survivor_pmf(2, 0.5);
  ASSERT_EQ(fair.size(), 3u);
  EXPECT_DOUBLE_EQ(fair[0], 0.25);
  EXPECT_DOUBLE_EQ(fair[1], 0.5);
  EXPECT_DOUBLE_EQ(fair[2], 0.25);
  const auto pmf = survivor_pmf(4, 0.1);
  const auto expected = oracle::pmf_by_enumeration(4, 0.1);
  for (int w = 0; w <= 4; ++w) EXPECT_NEAR(pmf[w], expected[w], 1e-15);
  EXPECT_THROW(survivor_pmf(3, -0.1), UsageError);
}

TEST(SurvivorPmfTest, SumsToOne) {
  for (int q = 0; q <= 60; q += 3) {
    for (double r : {0.0, 0.01, 0.37, 0.5, 0.99, 1.0}) {
      double s = 0.0;
      for (double x : survivor_pmf(q, r)) s += x;
      EXPECT_NEAR(s, 1.0, 1e-12) << q << " " << r;
    }
  }
}

TEST(TypedValueTest, Examples) {
  const auto unanimity = TypedGame::threshold({3}, {0.5}, {1.0}, 3.0);
  EXPECT_NEAR(typed_value(unanimity, std::vector<int>{3}), 0.125, 1e-15);
  const auto majority = TypedGame::threshold({3}, {0.5}, {1.0}, 2.0);
  EXPECT_NEAR(typed_value(majority, std::vector<int>{3}), 3 * 0.125 + 0.125, 1e-15);
  EXPECT_THROW(typed_value(majority, std::vector<int>{4}), UsageError);
  EXPECT_THROW(typed_value(majority, std::vector<int>{1, 1}), UsageError);
}

TEST(TypedValueTest, MatchesEnumerationOnExpansion) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + trial % 3;
    std::vector<int> counts(k);
    int total = 0;
    for (int& c : counts) {
      c = static_cast<int>(rng() % 4);
      total += c;
    }
    if (total > 10) continue;
    std::bernoulli_distribution bit(0.5);
    const TypedGame tg = TypedGame::from_rule(counts, oracle::random_survival(rng, k),
                                              [&](std::span<const int> q) {
                                                int s = 0;
                                                for (int x : q) s += x;
                                                return s > 0 && bit(rng);
                                              });
    const auto ex = expand_typed(tg);
    const ReliabilityGame g(ex.game, ex.survival);
    const auto* typed = ex.game.as<ExpandedTypedGame>();
    const auto table = typed_value_table(tg);
    for (Mask m = 0; m < (Mask{1} << total); ++m) {
      const auto q = typed->profile_of(m);
      const double expected = oracle::extension_value(g, m);
      EXPECT_NEAR(typed_value(tg, q), expected, 1e-12);
      EXPECT_NEAR(table[tg.profile_index(q)], expected, 1e-12);
    }
  }
}

TEST(TypedValueTest, TableRefusesAboveProfileCap) {
  const auto tg = TypedGame::threshold({9, 9}, {0.5, 0.5}, {1.0, 1.0}, 3.0);
  EXPECT_THROW(typed_value_table(tg, 99), Refusal);
  EXPECT_NO_THROW(typed_value_table(tg, 100));
}

}  // namespace
}  // namespace relgame
