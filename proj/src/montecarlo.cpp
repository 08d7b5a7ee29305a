#include "itervote/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <thread>
#include <vector>

#include "itervote/welfare.hpp"

namespace itervote {
namespace {

__extension__ using uint128 = unsigned __int128;

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kBlockSize = 4096;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void validate(const SamplerConfig& config) {
  if (config.m < 2 || config.m > kMaxAlternatives) {
    throw ValidationError("m must be in [2, " +
                          std::to_string(kMaxAlternatives) + "]");
  }
  if (config.n < 1) throw ValidationError("n must be >= 1");
  if (config.samples < 1) throw ValidationError("samples must be >= 1");
  if (config.workers < 1) throw ValidationError("workers must be >= 1");
}

// Runs `work(first, last, acc)` over fixed blocks of sample indices and
// returns the per-block accumulators in block order.
template <typename Acc, typename Work>
std::vector<Acc> run_blocks(std::uint64_t samples, int workers, Work work) {
  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> partial(blocks);
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&] {
    for (std::uint64_t b; (b = next_block.fetch_add(1)) < blocks;) {
      const std::uint64_t first = b * kBlockSize;
      const std::uint64_t last = std::min(samples, first + kBlockSize);
      work(first, last, partial[b]);
    }
  };
  const int threads =
      static_cast<int>(std::min<std::uint64_t>(workers, blocks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return partial;
}

struct LossAccumulator {
  std::array<MomentAccumulator, kTieClasses> by_class{};
  std::uint64_t budget_failures = 0;
};

ClassSummary summarize(const MomentAccumulator& acc, std::uint64_t samples) {
  ClassSummary out;
  out.count = acc.count;
  out.mean_loss = acc.mean;
  out.ci95 = acc.ci95_halfwidth();
  out.probability = static_cast<double>(acc.count) / static_cast<double>(samples);
  return out;
}

}  // namespace

SampleRng::SampleRng(std::uint64_t master_seed, std::uint64_t stream_index)
    : state_(mix64(mix64(master_seed) ^ (stream_index * kGolden + kGolden))) {}

std::uint64_t SampleRng::next() {
  state_ += kGolden;
  return mix64(state_);
}

std::uint64_t SampleRng::uniform_below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection of the biased low range.
  uint128 product = static_cast<uint128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<uint128>(next()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

Profile sample_ic_profile(int m, int n, SampleRng& rng) {
  if (m < 2 || n < 1) throw ValidationError("sampling needs m >= 2 and n >= 1");
  std::vector<Alternative> order(static_cast<std::size_t>(m) * n);
  for (int j = 0; j < n; ++j) {
    Alternative* row = order.data() + static_cast<std::size_t>(j) * m;
    std::iota(row, row + m, 1);
    for (int i = m - 1; i > 0; --i) {
      const auto pick = static_cast<int>(rng.uniform_below(i + 1));
      std::swap(row[i], row[pick]);
    }
  }
  return Profile(m, std::move(order));
}

std::string tie_class_label(int index) {
  return index == kTieClasses - 1 ? std::to_string(kTieClasses) + "+"
                                  : std::to_string(index + 1);
}

void MomentAccumulator::add(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count + other.count);
  const double delta = other.mean - mean;
  mean += delta * static_cast<double>(other.count) / total;
  m2 += other.m2 + delta * delta * static_cast<double>(count) *
                       static_cast<double>(other.count) / total;
  count += other.count;
}

double MomentAccumulator::ci95_halfwidth() const {
  if (count < 2) return 0.0;
  const double variance = m2 / static_cast<double>(count - 1);
  return 1.96 * std::sqrt(variance / static_cast<double>(count));
}

RunSummary estimate_eadpoa(const SamplerConfig& config, const UtilityVector& u,
                           const ExplorationOptions& options) {
  validate(config);
  if (u.size() != config.m) {
    throw ValidationError("utility vector must have m entries");
  }
  auto partial = run_blocks<LossAccumulator>(
      config.samples, config.workers,
      [&](std::uint64_t first, std::uint64_t last, LossAccumulator& acc) {
        for (std::uint64_t i = first; i < last; ++i) {
          SampleRng rng(config.master_seed, i);
          const Profile profile = sample_ic_profile(config.m, config.n, rng);
          const int cls = tie_class_index(potential_winners(profile).size());
          if (cls == 0) {
            acc.by_class[0].add(0.0);
            continue;
          }
          try {
            acc.by_class[cls].add(adversarial_loss(profile, u, options).loss);
          } catch (const BudgetExceeded&) {
            ++acc.budget_failures;
          }
        }
      });

  LossAccumulator total;
  for (const auto& block : partial) {
    for (int c = 0; c < kTieClasses; ++c) total.by_class[c].merge(block.by_class[c]);
    total.budget_failures += block.budget_failures;
  }
  MomentAccumulator overall;
  for (const auto& cls : total.by_class) overall.merge(cls);

  RunSummary summary;
  summary.m = config.m;
  summary.n = config.n;
  summary.samples = config.samples;
  for (int c = 0; c < kTieClasses; ++c) {
    summary.by_class[c] = summarize(total.by_class[c], config.samples);
  }
  summary.overall = summarize(overall, config.samples);
  summary.budget_failures = total.budget_failures;
  return summary;
}

TieStatistics tie_statistics(const SamplerConfig& config) {
  validate(config);
  using Counts = std::array<std::uint64_t, kTieClasses>;
  auto partial = run_blocks<Counts>(
      config.samples, config.workers,
      [&](std::uint64_t first, std::uint64_t last, Counts& acc) {
        for (std::uint64_t i = first; i < last; ++i) {
          SampleRng rng(config.master_seed, i);
          const Profile profile = sample_ic_profile(config.m, config.n, rng);
          ++acc[tie_class_index(potential_winners(profile).size())];
        }
      });
  TieStatistics stats;
  stats.samples = config.samples;
  for (const auto& block : partial) {
    for (int c = 0; c < kTieClasses; ++c) stats.counts[c] += block[c];
  }
  for (int c = 0; c < kTieClasses; ++c) {
    stats.probability[c] = static_cast<double>(stats.counts[c]) /
                           static_cast<double>(stats.samples);
  }
  return stats;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void write_summary_csv_rows(std::ostream& out, const RunSummary& summary) {
  auto row = [&](const std::string& alpha, const ClassSummary& c) {
    out << summary.n << ',' << alpha << ',' << c.count << ','
        << format_number(c.mean_loss) << ',' << format_number(c.ci95) << ','
        << format_number(c.probability) << ',' << summary.budget_failures
        << '\n';
  };
  for (int c = 0; c < kTieClasses; ++c) row(tie_class_label(c), summary.by_class[c]);
  row("overall", summary.overall);
}

}  // namespace itervote
