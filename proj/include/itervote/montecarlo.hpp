#pragma once

// Impartial Culture Monte Carlo estimation of the expected adversarial loss.
//
// Sample i is drawn from its own RNG stream keyed by (master_seed, i) and
// samples are reduced in fixed-size blocks merged in block order, so results
// are bit-identical for any worker count.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "itervote/core.hpp"
#include "itervote/dynamics.hpp"

namespace itervote {

// SplitMix64 stream whose starting point is a hash of (seed, stream index).
class SampleRng {
 public:
  SampleRng(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next();
  // Uniform integer in [0, bound), bound >= 1, without modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// n independent uniform rankings over m alternatives (Fisher-Yates).
Profile sample_ic_profile(int m, int n, SampleRng& rng);

struct SamplerConfig {
  int m = 4;
  int n = 100;
  std::uint64_t samples = 100'000;
  std::uint64_t master_seed = 0;
  int workers = 1;
};

// Tie classes by |PW(P)|: 1, 2, 3 and 4 or more.
inline constexpr int kTieClasses = 4;
inline int tie_class_index(int pw_size) {
  return pw_size >= kTieClasses ? kTieClasses - 1 : pw_size - 1;
}
std::string tie_class_label(int index);

// Running mean and sum of squared deviations; merge() is Chan's update.
struct MomentAccumulator {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const MomentAccumulator& other);
  // Normal-approximation 95% half-width, 1.96 s / sqrt(count); 0 if count < 2.
  double ci95_halfwidth() const;
};

struct ClassSummary {
  std::uint64_t count = 0;
  double mean_loss = 0.0;
  double ci95 = 0.0;
  double probability = 0.0;  // count / samples
};

struct RunSummary {
  int m = 0;
  int n = 0;
  std::uint64_t samples = 0;
  std::array<ClassSummary, kTieClasses> by_class{};
  ClassSummary overall;  // the expected-loss estimate over non-failed samples
  std::uint64_t budget_failures = 0;
};

// Throws ValidationError on invalid configs (m < 2, n < 1, samples < 1,
// workers < 1) or a utility vector of the wrong length. Samples whose
// exploration exceeds the budget are counted in budget_failures and left out
// of every mean.
RunSummary estimate_eadpoa(const SamplerConfig& config, const UtilityVector& u,
                           const ExplorationOptions& options = {});

struct TieStatistics {
  std::uint64_t samples = 0;
  std::array<std::uint64_t, kTieClasses> counts{};
  std::array<double, kTieClasses> probability{};
};

TieStatistics tie_statistics(const SamplerConfig& config);

// CSV with columns n,alpha,count,mean_loss,ci95,probability,budget_failures;
// one row per tie class plus an "overall" row. Numbers use 10 significant
// digits.
inline constexpr const char* kCsvHeader =
    "n,alpha,count,mean_loss,ci95,probability,budget_failures";
void write_summary_csv_rows(std::ostream& out, const RunSummary& summary);
std::string format_number(double value);

}  // namespace itervote
