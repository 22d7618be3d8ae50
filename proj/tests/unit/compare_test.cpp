#include <gtest/gtest.h>

#include <cmath>

#include "rhfluid/compare.hpp"
#include "rhfluid/errors.hpp"
#include "rhfluid/fluid.hpp"

using namespace rhfluid;

TEST(KeyFractions, SingleAge) {
  const auto f = tails_to_key_fractions(Tail::of({0.5, 0.0}), 0.5);
  EXPECT_EQ(f.at(1), 1.0);
  EXPECT_EQ(f.at(2), 0.0);
}

TEST(KeyFractions, Telescopes) {
  const Tail s = celis_tails(0.8);
  const auto f = tails_to_key_fractions(s, 0.7);
  double total = 0.0;
  for (const auto& [age, v] : f) total += v;
  EXPECT_NEAR(total, s(1) / 0.7, 1e-15);
}

TEST(KeyFractions, RoundTrip) {
  const Tail s = insert_only_evolve(0.9, SolverConfig{.dt = 1e-4}).s;
  const Tail back = key_fractions_to_tails(tails_to_key_fractions(s, 0.9), 0.9);
  for (std::size_t i = 1; i <= s.depth(); ++i) EXPECT_NEAR(back(i), s(i), 1e-15);
}

TEST(KeyFractions, Errors) {
  EXPECT_THROW(tails_to_key_fractions(Tail(3), 0.0), InvalidArgument);
}

TEST(Compare, IdenticalInputs) {
  const AgeFractions theory{{1, 0.25}, {2, 0.75}};
  SimStats sim;
  sim.trialCount = 10;
  sim.perAge[1] = {0.25, 0.01};
  sim.perAge[2] = {0.75, 0.01};
  const ComparisonReport r = compare(theory, sim);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.absDiff, 0.0);
    ASSERT_TRUE(row.z.has_value());
    EXPECT_EQ(*row.z, 0.0);
  }
  EXPECT_EQ(r.maxAbsDiff, 0.0);
  EXPECT_EQ(r.maxAbsZ, 0.0);
}

TEST(Compare, DisjointSupports) {
  const AgeFractions theory{{1, 1.0}};
  SimStats sim;
  sim.trialCount = 4;
  sim.perAge[2] = {1.0, 0.0};
  const ComparisonReport r = compare(theory, sim);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].simMean, 0.0);
  EXPECT_EQ(r.rows[1].theory, 0.0);
  EXPECT_FALSE(r.rows[1].z.has_value());
  EXPECT_EQ(r.maxAbsDiff, 1.0);
}

TEST(Compare, ZScoreUsesStandardError) {
  const AgeFractions theory{{1, 0.5}};
  SimStats sim;
  sim.trialCount = 100;
  sim.perAge[1] = {0.52, 0.1};
  const ComparisonReport r = compare(theory, sim);
  EXPECT_NEAR(*r.rows[0].z, 2.0, 1e-12);
  EXPECT_NEAR(r.maxAbsZ, 2.0, 1e-12);
}

TEST(Compare, NegligibleAgesIgnoredInMaxZ) {
  const AgeFractions theory{{1, 1.0}, {2, 1e-12}};
  SimStats sim;
  sim.trialCount = 9;
  sim.perAge[1] = {1.0, 0.3};
  sim.perAge[2] = {0.0, 0.0};
  EXPECT_EQ(compare(theory, sim).maxAbsZ, 0.0);
}

TEST(Compare, SymmetricAbsDiff) {
  const AgeFractions a{{1, 0.2}, {2, 0.8}};
  const AgeFractions b{{1, 0.3}, {2, 0.7}};
  std::map<std::uint32_t, MeanStd> as, bs;
  for (const auto& [k, v] : a) as[k] = {v, 0.0};
  for (const auto& [k, v] : b) bs[k] = {v, 0.0};
  const auto ab = compare(a, bs, 5);
  const auto ba = compare(b, as, 5);
  for (std::size_t i = 0; i < ab.rows.size(); ++i) {
    EXPECT_DOUBLE_EQ(ab.rows[i].absDiff, ba.rows[i].absDiff);
  }
}
