#include "itervote/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "itervote/welfare.hpp"

namespace itervote {

using boost::multiprecision::cpp_int;

std::vector<Ranking> all_rankings(int m) {
  if (m < 2 || m > 10) throw ValidationError("all_rankings supports 2 <= m <= 10");
  std::vector<Alternative> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 1);
  std::vector<Ranking> out;
  do {
    out.emplace_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

ProfileEnumerator::ProfileEnumerator(int m, int n, std::uint64_t cap)
    : m_(m), n_(n) {
  if (n < 1) throw ValidationError("enumeration needs n >= 1");
  if (m < 2 || m > 10) throw ValidationError("enumeration supports 2 <= m <= 10");
  std::uint64_t factorial = 1;
  for (int i = 2; i <= m; ++i) factorial *= static_cast<std::uint64_t>(i);
  for (int j = 0; j < n; ++j) {
    if (total_ > cap / factorial) {
      throw ValidationError("enumerating (" + std::to_string(m) + "!)^" +
                            std::to_string(n) + " profiles exceeds the cap of " +
                            std::to_string(cap));
    }
    total_ *= factorial;
  }
  for (const Ranking& r : all_rankings(m)) {
    rankings_.emplace_back(r.order().begin(), r.order().end());
  }
  digits_.assign(static_cast<std::size_t>(n), 0);
}

std::optional<Profile> ProfileEnumerator::next() {
  if (exhausted_) return std::nullopt;
  std::vector<Alternative> order;
  order.reserve(static_cast<std::size_t>(m_) * n_);
  for (int d : digits_) {
    order.insert(order.end(), rankings_[d].begin(), rankings_[d].end());
  }
  // Advance the last agent fastest.
  int j = n_ - 1;
  while (j >= 0 && ++digits_[j] == static_cast<int>(rankings_.size())) {
    digits_[j] = 0;
    --j;
  }
  if (j < 0) exhausted_ = true;
  return Profile(m_, std::move(order));
}

void for_each_profile(int m, int n,
                      const std::function<void(const Profile&)>& visit,
                      std::uint64_t cap) {
  ProfileEnumerator profiles(m, n, cap);
  while (auto p = profiles.next()) visit(*p);
}

EnumerationReport exact_eadpoa(int m, int n, const UtilityVector& u,
                               const OracleOptions& options) {
  if (u.size() != m) throw ValidationError("utility vector must have m entries");
  EnumerationReport report;
  report.m = m;
  report.n = n;
  std::array<long double, kTieClasses> class_sum{};
  bool have_max = false;

  auto record = [&](const Profile& p, const char* check, AlternativeSet fast,
                    AlternativeSet oracle) {
    ++report.mismatch_count;
    if (report.mismatches.size() < options.max_recorded_mismatches) {
      report.mismatches.push_back({p, check, fast, oracle});
    }
  };

  for_each_profile(
      m, n,
      [&](const Profile& p) {
        const AlternativeSet pw = potential_winners(p);
        const EquilibriumResult oracle =
            equilibrium_winners_exhaustive(p, options.exploration);
        const EquilibriumResult fast = equilibrium_winners(p, options.exploration);
        if (fast.winners != oracle.winners) {
          record(p, "dispatcher", fast.winners, oracle.winners);
        }
        if (pw.size() == 2) {
          const AlternativeSet pairwise{two_way_tiebreak(p)};
          if (pairwise != oracle.winners) record(p, "two_way_tiebreak", pairwise, oracle.winners);
        }
        report.ew_within_pw = report.ew_within_pw && oracle.winners.is_subset_of(pw);
        report.max_depth = std::max(report.max_depth, oracle.max_depth);

        const double loss = adversarial_loss(p, u, oracle.winners).loss;
        const int cls = tie_class_index(pw.size());
        ++report.class_counts[cls];
        class_sum[cls] += loss;
        if (!have_max || loss > report.max_loss) {
          report.max_loss = loss;
          report.worst_profile = p;
          have_max = true;
        }
        ++report.total_profiles;
      },
      options.enumeration_cap);

  long double total = 0;
  for (int c = 0; c < kTieClasses; ++c) {
    total += class_sum[c];
    const auto count = static_cast<long double>(report.class_counts[c]);
    report.class_probability[c] =
        static_cast<double>(count / static_cast<long double>(report.total_profiles));
    report.class_mean_loss[c] =
        count > 0 ? static_cast<double>(class_sum[c] / count) : 0.0;
  }
  report.exact_eadpoa =
      static_cast<double>(total / static_cast<long double>(report.total_profiles));
  return report;
}

Claim1Result check_claim1(int n_max) {
  if (n_max < 1) throw ValidationError("check_claim1 needs n_max >= 1");
  Claim1Result result;
  std::vector<cpp_int> row{1};  // Pascal row for the current n
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      std::vector<cpp_int> next(static_cast<std::size_t>(n) + 1, 1);
      for (int k = 1; k < n; ++k) next[k] = row[k - 1] + row[k];
      row = std::move(next);
    }
    // Tail sums from k = n down to p.
    cpp_int tail = 0;
    for (int p = n; p >= 0; --p) {
      tail += row[p] * (n - 2 * p);
      ++result.cases_checked;
      if (tail != -cpp_int(p) * row[p]) {
        result.holds = false;
        result.violation = std::pair{n, p};
        return result;
      }
    }
  }
  return result;
}

std::vector<StirlingPoint> check_stirling_ratio(int u_max) {
  if (u_max < 4) throw ValidationError("check_stirling_ratio needs u_max >= 4");
  using Float = boost::multiprecision::cpp_bin_float_50;
  std::vector<StirlingPoint> points;
  // C(u, j) for the current u, built by Pascal's rule.
  std::vector<cpp_int> row{1};
  for (int u = 1; u <= u_max; ++u) {
    std::vector<cpp_int> next(static_cast<std::size_t>(u) + 1, 1);
    for (int j = 1; j < u; ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
    if (u < 4) continue;
    const int v = u / 2;
    StirlingPoint point;
    point.u = u;
    point.numerator = cpp_int(v + 1) * row[v + 1];
    Float scaled = ldexp(Float(point.numerator), -u);
    point.ratio = static_cast<double>(scaled / sqrt(Float(u)));
    points.push_back(std::move(point));
  }
  return points;
}

StirlingVerdict evaluate_stirling(const std::vector<StirlingPoint>& points) {
  StirlingVerdict verdict;
  double last_gap = INFINITY;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = points[i].ratio;
    verdict.in_band = verdict.in_band && r >= 0.1 && r <= 1.0;
    if (i > 0) {
      const double gap = std::abs(r - points[i - 1].ratio);
      verdict.converging = verdict.converging && gap <= last_gap;
      last_gap = gap;
    }
  }
  // Odd and even u approach the limit from opposite sides.
  if (points.size() >= 2) {
    verdict.limit_estimate =
        0.5 * (points[points.size() - 1].ratio + points[points.size() - 2].ratio);
  } else if (!points.empty()) {
    verdict.limit_estimate = points.back().ratio;
  }
  return verdict;
}

}  // namespace itervote
