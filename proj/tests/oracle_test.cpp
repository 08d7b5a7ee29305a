#include <gtest/gtest.h>

#include <cmath>

#include "itervote/oracle.hpp"

namespace itervote {
namespace {

TEST(EnumerationTest, Counts) {
  EXPECT_EQ(ProfileEnumerator(2, 3).total(), 8u);
  EXPECT_EQ(ProfileEnumerator(3, 5).total(), 7776u);
  EXPECT_EQ(ProfileEnumerator(4, 4).total(), 331776u);

  std::uint64_t seen = 0;
  for_each_profile(2, 3, [&](const Profile&) { ++seen; });
  EXPECT_EQ(seen, 8u);
}

TEST(EnumerationTest, LexicographicAndDistinct) {
  ProfileEnumerator e(3, 2);
  std::vector<std::vector<Alternative>> flat;
  while (auto p = e.next()) {
    std::vector<Alternative> row;
    for (int j = 0; j < 2; ++j) {
      auto r = p->order(j);
      row.insert(row.end(), r.begin(), r.end());
    }
    flat.push_back(std::move(row));
  }
  ASSERT_EQ(flat.size(), 36u);
  EXPECT_TRUE(std::is_sorted(flat.begin(), flat.end()));
  EXPECT_EQ(std::adjacent_find(flat.begin(), flat.end()), flat.end());
  EXPECT_EQ(flat.front(), (std::vector<Alternative>{1, 2, 3, 1, 2, 3}));
  EXPECT_EQ(flat.back(), (std::vector<Alternative>{3, 2, 1, 3, 2, 1}));
}

TEST(EnumerationTest, RejectsOverCap) {
  EXPECT_THROW(ProfileEnumerator(4, 6), ValidationError);
  EXPECT_THROW(ProfileEnumerator(3, 3, 100), ValidationError);
  EXPECT_NO_THROW(ProfileEnumerator(3, 3, 216));
}

TEST(ExactTest, SingleAgentIsZero) {
  const EnumerationReport r = exact_eadpoa(3, 1, UtilityVector({2, 1, 0}));
  EXPECT_EQ(r.total_profiles, 6u);
  EXPECT_EQ(r.exact_eadpoa, 0.0);
  // A lone vote for a leaves every b < a one vote behind, so |PW| = a, but
  // the agent already has its favourite and never moves.
  EXPECT_EQ(r.class_counts[0], 2u);
  EXPECT_EQ(r.class_counts[1], 2u);
  EXPECT_EQ(r.class_counts[2], 2u);
  EXPECT_EQ(r.max_loss, 0.0);
}

TEST(ExactTest, TwoAlternativesResolveByPairwiseMajority) {
  for (int n = 1; n <= 9; ++n) {
    const EnumerationReport r = exact_eadpoa(2, n, UtilityVector({1, 0}));
    EXPECT_EQ(r.mismatch_count, 0u) << n;
    EXPECT_TRUE(r.ew_within_pw);
    EXPECT_EQ(r.class_counts[2] + r.class_counts[3], 0u);
  }
}

TEST(ExactTest, M3N4) {
  const EnumerationReport r = exact_eadpoa(3, 4, UtilityVector({2, 1, 0}));
  EXPECT_EQ(r.total_profiles, 1296u);
  EXPECT_EQ(r.mismatch_count, 0u);
  EXPECT_TRUE(r.ew_within_pw);
  EXPECT_LE(r.max_depth, 12);
  std::uint64_t total = 0;
  for (auto c : r.class_counts) total += c;
  EXPECT_EQ(total, 1296u);
}

TEST(Claim1Test, SmallCaseAndRange) {
  // n = 4, p = 2: 6*0 + 4*(-2) + 1*(-4) = -12 = -2*C(4,2).
  const Claim1Result small = check_claim1(4);
  EXPECT_TRUE(small.holds);
  EXPECT_EQ(small.cases_checked, 15u);

  const Claim1Result r = check_claim1(30);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.cases_checked, 31u * 32u / 2u);
  EXPECT_FALSE(r.violation.has_value());

  // Far beyond 64-bit binomials.
  EXPECT_TRUE(check_claim1(120).holds);
  EXPECT_THROW(check_claim1(0), ValidationError);
}

TEST(StirlingTest, ExactNumeratorAndBand) {
  const auto points = check_stirling_ratio(200);
  ASSERT_EQ(points.size(), 197u);
  EXPECT_EQ(points.front().u, 4);
  EXPECT_EQ(points.front().numerator, 12);
  EXPECT_DOUBLE_EQ(points.front().ratio, 12.0 / (2.0 * 16.0));
  // u = 5: v = 2, 3 * C(5,3) = 30.
  EXPECT_EQ(points[1].numerator, 30);
  for (const auto& p : points) ASSERT_GT(p.ratio, 0.0);

  const StirlingVerdict v = evaluate_stirling(points);
  EXPECT_TRUE(v.in_band);
  EXPECT_TRUE(v.converging);
  EXPECT_NEAR(v.limit_estimate, 1.0 / std::sqrt(2.0 * M_PI), 5e-3);
  EXPECT_THROW(check_stirling_ratio(3), ValidationError);
}

}  // namespace
}  // namespace itervote
