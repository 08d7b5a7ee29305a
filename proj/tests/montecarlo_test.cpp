#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "itervote/montecarlo.hpp"

namespace itervote {
namespace {

TEST(SampleRngTest, DeterministicPerStream) {
  SampleRng a(5, 17);
  SampleRng b(5, 17);
  SampleRng c(5, 18);
  SampleRng d(6, 17);
  const std::uint64_t x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
}

TEST(SampleRngTest, UniformBelowRange) {
  SampleRng rng(1, 0);
  EXPECT_EQ(rng.uniform_below(1), 0u);
  for (int i = 0; i < 10'000; ++i) ASSERT_LT(rng.uniform_below(7), 7u);
}

TEST(SampleRngTest, RankingsAreUniform) {
  // Chi-square over the 24 rankings of m = 4; 23 degrees of freedom, the
  // 0.999 quantile is about 49.7.
  std::map<std::vector<Alternative>, int> counts;
  const int draws = 48'000;
  for (int i = 0; i < draws; ++i) {
    SampleRng rng(99, static_cast<std::uint64_t>(i));
    const Profile p = sample_ic_profile(4, 1, rng);
    auto row = p.order(0);
    ++counts[std::vector<Alternative>(row.begin(), row.end())];
  }
  ASSERT_EQ(counts.size(), 24u);
  const double expected = draws / 24.0;
  double chi2 = 0;
  for (const auto& [ranking, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 49.7);
}

TEST(SampleRngTest, TopMarginals) {
  SampleRng rng(3, 0);
  const Profile p = sample_ic_profile(5, 50'000, rng);
  const ScoreTable s = plurality_scores(p);
  for (Alternative a = 1; a <= 5; ++a) {
    EXPECT_NEAR(s[a] / 50'000.0, 0.2, 0.01);
  }
}

TEST(MomentAccumulatorTest, MergeMatchesSequential) {
  MomentAccumulator all, left, right;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i) * 3 + i % 7;
    all.add(x);
    (i < 37 ? left : right).add(x);
  }
  left.merge(right);
  EXPECT_EQ(left.count, all.count);
  EXPECT_NEAR(left.mean, all.mean, 1e-12);
  EXPECT_NEAR(left.m2, all.m2, 1e-9);

  MomentAccumulator one;
  one.add(4);
  EXPECT_EQ(one.ci95_halfwidth(), 0.0);
  MomentAccumulator two;
  two.add(0);
  two.add(2);
  EXPECT_NEAR(two.ci95_halfwidth(), 1.96 * std::sqrt(2.0) / std::sqrt(2.0), 1e-12);
}

std::string csv_of(const RunSummary& s) {
  std::ostringstream out;
  write_summary_csv_rows(out, s);
  return out.str();
}

TEST(EstimateTest, WorkerCountDoesNotChangeResults) {
  SamplerConfig config;
  config.m = 4;
  config.n = 12;
  config.samples = 9'000;
  config.master_seed = 2024;
  const UtilityVector u = UtilityVector::borda(4);
  config.workers = 1;
  const std::string one = csv_of(estimate_eadpoa(config, u));
  config.workers = 2;
  EXPECT_EQ(csv_of(estimate_eadpoa(config, u)), one);
  config.workers = 8;
  EXPECT_EQ(csv_of(estimate_eadpoa(config, u)), one);
  config.master_seed = 2025;
  EXPECT_NE(csv_of(estimate_eadpoa(config, u)), one);
}

TEST(EstimateTest, SummaryInvariants) {
  SamplerConfig config;
  config.m = 3;
  config.n = 7;
  config.samples = 5'000;
  config.master_seed = 8;
  const RunSummary s = estimate_eadpoa(config, UtilityVector({2, 1, 0}));
  std::uint64_t total = 0;
  double prob = 0;
  double weighted = 0;
  for (const ClassSummary& c : s.by_class) {
    total += c.count;
    prob += c.probability;
    weighted += c.mean_loss * static_cast<double>(c.count);
  }
  EXPECT_EQ(total, 5'000u);
  EXPECT_EQ(s.overall.count, 5'000u);
  EXPECT_NEAR(prob, 1.0, 1e-12);
  EXPECT_NEAR(weighted / 5'000.0, s.overall.mean_loss, 1e-12);
  // No strategic change without a tie.
  EXPECT_EQ(s.by_class[0].mean_loss, 0.0);
  EXPECT_EQ(s.by_class[0].ci95, 0.0);
  EXPECT_EQ(s.budget_failures, 0u);
}

TEST(EstimateTest, SingleSample) {
  SamplerConfig config;
  config.m = 3;
  config.n = 4;
  config.samples = 1;
  const RunSummary s = estimate_eadpoa(config, UtilityVector::borda(3));
  EXPECT_EQ(s.overall.count, 1u);
  EXPECT_EQ(s.overall.ci95, 0.0);
}

TEST(EstimateTest, BudgetFailuresAreCountedNotAveraged) {
  SamplerConfig config;
  config.m = 4;
  config.n = 30;
  config.samples = 3'000;
  config.master_seed = 5;
  ExplorationOptions tiny;
  tiny.state_budget = 1;
  const RunSummary s = estimate_eadpoa(config, UtilityVector::borda(4), tiny);
  EXPECT_GT(s.budget_failures, 0u);
  EXPECT_EQ(s.overall.count + s.budget_failures, 3'000u);
}

TEST(EstimateTest, RejectsBadConfig) {
  SamplerConfig config;
  config.samples = 0;
  EXPECT_THROW(estimate_eadpoa(config, UtilityVector::borda(4)), ValidationError);
  config.samples = 10;
  config.workers = 0;
  EXPECT_THROW(estimate_eadpoa(config, UtilityVector::borda(4)), ValidationError);
  config.workers = 1;
  EXPECT_THROW(estimate_eadpoa(config, UtilityVector::borda(3)), ValidationError);
}

TEST(TieStatisticsTest, ProbabilitiesSumToOne) {
  SamplerConfig config;
  config.m = 3;
  config.n = 50;
  config.samples = 20'000;
  config.master_seed = 1;
  const TieStatistics t = tie_statistics(config);
  double sum = 0;
  std::uint64_t count = 0;
  for (int c = 0; c < kTieClasses; ++c) {
    sum += t.probability[c];
    count += t.counts[c];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(count, 20'000u);
  EXPECT_EQ(t.counts[3], 0u);  // m = 3 cannot have four potential winners
  EXPECT_GT(t.probability[1], t.probability[2]);
}

TEST(CsvTest, RowsAndLabels) {
  SamplerConfig config;
  config.m = 3;
  config.n = 5;
  config.samples = 100;
  const std::string csv = csv_of(estimate_eadpoa(config, UtilityVector({2, 1, 0})));
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0].rfind("5,1,", 0), 0u);
  EXPECT_EQ(lines[3].rfind("5,4+,", 0), 0u);
  EXPECT_EQ(lines[4].rfind("5,overall,100,", 0), 0u);
  EXPECT_EQ(tie_class_label(2), "3");
  EXPECT_EQ(format_number(0.1), "0.1");
}

}  // namespace
}  // namespace itervote
