#pragma once

// Brute-force references and exact-arithmetic identity checks used to
// validate the fast paths.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "itervote/core.hpp"
#include "itervote/dynamics.hpp"
#include "itervote/montecarlo.hpp"

namespace itervote {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// All m! rankings in lexicographic order.
std::vector<Ranking> all_rankings(int m);

// Streams every profile in L(A)^n exactly once, lexicographically (agent 1 is
// the most significant digit). Throws ValidationError when (m!)^n > cap.
class ProfileEnumerator {
 public:
  ProfileEnumerator(int m, int n, std::uint64_t cap = kDefaultEnumerationCap);

  std::uint64_t total() const { return total_; }
  std::optional<Profile> next();

 private:
  int m_;
  int n_;
  std::uint64_t total_ = 1;
  std::vector<std::vector<Alternative>> rankings_;
  std::vector<int> digits_;
  bool exhausted_ = false;
};

void for_each_profile(int m, int n,
                      const std::function<void(const Profile&)>& visit,
                      std::uint64_t cap = kDefaultEnumerationCap);

struct OracleOptions {
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  ExplorationOptions exploration;
  std::size_t max_recorded_mismatches = 16;
};

struct Mismatch {
  Profile profile;
  std::string check;  // "dispatcher" or "two_way_tiebreak"
  AlternativeSet fast_result;
  AlternativeSet oracle_result;
};

struct EnumerationReport {
  int m = 0;
  int n = 0;
  std::uint64_t total_profiles = 0;
  // Uniform average of the adversarial loss, with EW from exhaustive search.
  double exact_eadpoa = 0.0;
  std::array<std::uint64_t, kTieClasses> class_counts{};
  std::array<double, kTieClasses> class_probability{};
  std::array<double, kTieClasses> class_mean_loss{};
  double max_loss = 0.0;
  std::optional<Profile> worst_profile;
  int max_depth = 0;  // longest BR sequence over all profiles
  bool ew_within_pw = true;
  std::uint64_t mismatch_count = 0;
  std::vector<Mismatch> mismatches;  // the first max_recorded_mismatches
};

// Exact expectation under IC by full enumeration. Every profile is also run
// through the dispatcher (and two_way_tiebreak when |PW| = 2) and compared
// against the exhaustive search.
EnumerationReport exact_eadpoa(int m, int n, const UtilityVector& u,
                               const OracleOptions& options = {});

struct Claim1Result {
  bool holds = true;
  std::uint64_t cases_checked = 0;
  // First violating (n, p), if any.
  std::optional<std::pair<int, int>> violation;
};

// sum_{k=p}^{n} C(n,k)(n - 2k) == -p C(n,p) for all 0 <= p <= n <= n_max.
Claim1Result check_claim1(int n_max);

struct StirlingPoint {
  int u = 0;
  boost::multiprecision::cpp_int numerator;  // (v+1) C(u, v+1), v = floor(u/2)
  double ratio = 0.0;                        // numerator / (sqrt(u) 2^u)
};

// One point per u in [4, u_max]. Throws ValidationError when u_max < 4.
std::vector<StirlingPoint> check_stirling_ratio(int u_max);

struct StirlingVerdict {
  bool in_band = true;     // every ratio in [0.1, 1.0]
  bool converging = true;  // |r(u+1) - r(u)| nonincreasing
  double limit_estimate = 0.0;
};

StirlingVerdict evaluate_stirling(const std::vector<StirlingPoint>& points);

}  // namespace itervote
