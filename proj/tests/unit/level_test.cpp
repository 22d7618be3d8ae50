#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "rhfluid/errors.hpp"
#include "rhfluid/fluid.hpp"

using namespace rhfluid;

namespace {

// Random non-increasing tails of depth k with s_k = u_k = 0 and s_1 + u_1 <= 1.
std::pair<Tail, Tail> random_tails(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double s1 = 0.3 + 0.6 * unit(rng);
  const double u1 = (1.0 - s1) * unit(rng) * 0.9;
  Tail s(k), u(k);
  s[1] = s1;
  u[1] = u1;
  for (std::size_t i = 2; i < k; ++i) {
    s[i] = s[i - 1] * (0.3 + 0.7 * unit(rng));
    u[i] = u[i - 1] * (0.3 + 0.7 * unit(rng));
  }
  return {s, u};
}

// Direct simulation of the hand-key age chain in the tombstone regime.
// State 0 is "just completed an insertion, a deletion follows"; state j >= 1
// is the age of the key in hand. From j the next cell is:
//   live of age >= j or tombstone of age > j  -> j + 1
//   live of age k < j                          -> k + 1 (swap)
//   empty or tombstone of age <= j             -> 0
std::vector<double> simulate_chain(const Tail& s, const Tail& u, std::uint64_t steps,
                                   std::uint64_t seed) {
  const std::size_t k = s.depth();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> time(k + 2, 0.0);
  std::size_t state = 1;
  for (std::uint64_t n = 0; n < steps; ++n) {
    time[state] += 1.0;
    if (state == 0) {
      state = 1;
      continue;
    }
    const std::size_t j = state;
    const double x = unit(rng);
    const double advance = s(j) + u(j + 1);
    if (x < advance) {
      state = j + 1;
      continue;
    }
    // Swap with a live key of age k < j, chosen with weight s_k - s_{k+1}.
    double acc = advance;
    std::size_t next = 0;
    for (std::size_t a = 1; a < j; ++a) {
      acc += s(a) - s(a + 1);
      if (x < acc) {
        next = a + 1;
        break;
      }
    }
    state = next;
  }
  for (auto& t : time) t /= static_cast<double>(steps);
  return time;
}

}  // namespace

TEST(LevelInsertOnly, ZeroTail) {
  const LevelDistribution p = level_insert_only(Tail(5));
  EXPECT_EQ(p.at(1), 1.0);
  for (std::size_t i = 2; i <= 6; ++i) EXPECT_EQ(p.at(i), 0.0);
  EXPECT_EQ(p.q, 0.0);
}

TEST(LevelInsertOnly, Products) {
  const LevelDistribution p = level_insert_only(Tail::of({0.5, 0.25}));
  ASSERT_EQ(p.p.size(), 3u);
  EXPECT_DOUBLE_EQ(p.at(1), 1.0);
  EXPECT_DOUBLE_EQ(p.at(2), 0.5);
  EXPECT_DOUBLE_EQ(p.at(3), 0.125);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Tail s(10);
  s[1] = unit(rng);
  for (std::size_t i = 2; i <= 10; ++i) s[i] = s[i - 1] * unit(rng);
  const LevelDistribution q = level_insert_only(s);
  for (std::size_t i = 1; i <= 11; ++i) {
    double prod = 1.0;
    for (std::size_t j = 1; j < i; ++j) prod *= s(j);
    EXPECT_DOUBLE_EQ(q.at(i), prod);
  }
}

TEST(LevelNoTombstone, ClosedForm) {
  const NoTombstoneLevel l = no_tombstone_level(0.9);
  EXPECT_NEAR(l.q, 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(l.p1, 10.0 / 11.0, 1e-15);
  EXPECT_DOUBLE_EQ(l.p1 + l.q, 1.0);
  EXPECT_NEAR(no_tombstone_level(1e-9).q, 0.5, 1e-9);
  EXPECT_THROW(no_tombstone_level(1.0), InvalidArgument);
  EXPECT_THROW(no_tombstone_level(0.0), InvalidArgument);
}

TEST(LevelNoTombstone, TwoStateChainOracle) {
  // States: placing, or the deletion state. A placing step finishes with
  // probability 1 - alpha; the deletion state always returns to placing.
  constexpr double alpha = 0.9;
  constexpr std::uint64_t steps = 10'000'000;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool deleting = false;
  std::uint64_t inDeletion = 0;
  for (std::uint64_t n = 0; n < steps; ++n) {
    if (deleting) {
      ++inDeletion;
      deleting = false;
    } else {
      deleting = unit(rng) < 1.0 - alpha;
    }
  }
  EXPECT_NEAR(static_cast<double>(inDeletion) / steps, no_tombstone_level(alpha).q, 1e-3);
}

TEST(LevelTombstone, ReducesToNoTombstone) {
  for (const double alpha : {0.3, 0.7, 0.9}) {
    Tail s = no_tombstone_equilibrium(alpha, 40);
    const LevelDistribution l = tombstone_level_equilibrium(s, Tail(40));
    EXPECT_NEAR(l.q, (1 - alpha) / (2 - alpha), 1e-12);
    EXPECT_NEAR(l.at(1), 1 / (2 - alpha), 1e-12);
    // And p_i = p_{i-1} s_{i-1}.
    for (std::size_t i = 2; i <= 10; ++i) {
      EXPECT_NEAR(l.at(i), l.at(i - 1) * s(i - 1), 1e-12);
    }
  }
}

TEST(LevelTombstone, EmptyTable) {
  const LevelDistribution l = tombstone_level_equilibrium(Tail(8), Tail(8));
  EXPECT_NEAR(l.q, 0.5, 1e-15);
  EXPECT_NEAR(l.at(1), 0.5, 1e-15);
  for (std::size_t i = 2; i <= 8; ++i) EXPECT_EQ(l.at(i), 0.0);
}

TEST(LevelTombstone, ResidualBelowTolerance) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [s, u] = random_tails(rng, 8 + trial % 30);
    const LevelDistribution l = tombstone_level_equilibrium(s, u);
    EXPECT_LT(tombstone_level_residual(l, s, u), 1e-12);
    EXPECT_NEAR(l.q + l.at(1), 1.0, 1e-12);
    for (std::size_t i = 1; i < l.p.size(); ++i) EXPECT_GE(l.at(i), l.at(i + 1) - 1e-15);
  }
}

TEST(LevelTombstone, MapIsIdentityAtFixedPoint) {
  std::mt19937_64 rng(70);
  const auto [s, u] = random_tails(rng, 12);
  const LevelDistribution l = tombstone_level_equilibrium(s, u);
  const LevelDistribution m = tombstone_level_map(l, s, u);
  EXPECT_NEAR(m.q, l.q, 1e-13);
  for (std::size_t i = 1; i <= 12; ++i) EXPECT_NEAR(m.at(i), l.at(i), 1e-13);
}

TEST(LevelTombstone, ChainOracle) {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 3; ++trial) {
    const auto [s, u] = random_tails(rng, 8);
    const LevelDistribution l = tombstone_level_equilibrium(s, u);
    const std::vector<double> freq = simulate_chain(s, u, 10'000'000, 100 + trial);
    EXPECT_NEAR(freq[0], l.q, 1e-3);
    double tail = 0.0;
    for (std::size_t i = 8; i >= 1; --i) {
      tail += freq[i];
      EXPECT_NEAR(tail, l.at(i), 1e-3) << "p_" << i;
    }
  }
}

TEST(LevelTombstone, RejectsOverfullTails) {
  EXPECT_THROW(tombstone_level_equilibrium(Tail::of({0.8, 0.1}), Tail::of({0.3, 0.0})),
               InvalidArgument);
}
