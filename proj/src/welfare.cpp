#include "itervote/welfare.hpp"

#include <algorithm>
#include <stdexcept>

namespace itervote {
namespace {

void require_matching(const Profile& profile, const UtilityVector& u) {
  if (u.size() != profile.num_alternatives()) {
    throw ValidationError("utility vector has " + std::to_string(u.size()) +
                          " entries but the profile has " +
                          std::to_string(profile.num_alternatives()) +
                          " alternatives");
  }
}

// Ranking from fixed (position -> alternative) assignments; remaining
// positions take the unused alternatives in increasing order.
std::vector<Alternative> fill_ranking(
    int m, const std::vector<std::pair<int, Alternative>>& fixed) {
  std::vector<Alternative> order(static_cast<std::size_t>(m), 0);
  std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
  for (auto [position, a] : fixed) {
    order[position] = a;
    used[a] = true;
  }
  Alternative next = 1;
  for (auto& slot : order) {
    if (slot != 0) continue;
    while (used[next]) ++next;
    slot = next;
    used[next] = true;
  }
  return order;
}

}  // namespace

double social_welfare(const Profile& profile, const UtilityVector& u,
                      Alternative a) {
  require_matching(profile, u);
  double sw = 0.0;
  for (int j = 0; j < profile.num_agents(); ++j) {
    sw += u[profile.position_of(j, a) + 1];
  }
  return sw;
}

std::vector<double> welfare_table(const Profile& profile,
                                  const UtilityVector& u) {
  require_matching(profile, u);
  const int m = profile.num_alternatives();
  std::vector<double> sw(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < profile.num_agents(); ++j) {
    auto row = profile.order(j);
    for (int i = 0; i < m; ++i) sw[row[i] - 1] += u[i + 1];
  }
  return sw;
}

LossReport adversarial_loss(const Profile& profile, const UtilityVector& u,
                            AlternativeSet equilibrium_winners) {
  if (equilibrium_winners.empty()) {
    throw ValidationError("equilibrium winner set is empty");
  }
  const std::vector<double> sw = welfare_table(profile, u);
  LossReport report;
  report.truthful_winner = plurality_winner(plurality_scores(profile));
  report.equilibrium_winners = equilibrium_winners;
  report.truthful_sw = sw[report.truthful_winner - 1];
  report.worst_equilibrium_sw = sw[equilibrium_winners.min() - 1];
  for (Alternative a : equilibrium_winners.to_vector()) {
    report.worst_equilibrium_sw = std::min(report.worst_equilibrium_sw, sw[a - 1]);
  }
  report.loss = report.truthful_sw - report.worst_equilibrium_sw;
  return report;
}

LossReport adversarial_loss(const Profile& profile, const UtilityVector& u,
                            const ExplorationOptions& options) {
  require_matching(profile, u);
  return adversarial_loss(profile, u,
                          equilibrium_winners(profile, options).winners);
}

WorstCaseConstruction build_theorem1_profile(int m, int n,
                                             const UtilityVector& u) {
  if (m < 3) throw ValidationError("construction needs m >= 3");
  if (u.size() != m) {
    throw ValidationError("utility vector must have m entries");
  }
  if (n <= 0 || n % 2 != 0) {
    throw ValidationError("construction needs a positive even n, got " +
                          std::to_string(n));
  }
  if ((n + m - 2) % m != 0) {
    throw ValidationError("construction needs (n + m - 2) divisible by m; "
                          "n = " + std::to_string(n) +
                          ", m = " + std::to_string(m));
  }
  const int alpha = (n + m - 2) / m;
  const int beta = (alpha - 1) * (m - 2);
  if (beta % 2 != 0 || beta / 2 < 1) {
    throw ValidationError("construction needs beta = (alpha - 1)(m - 2) even "
                          "with beta / 2 >= 1; alpha = " +
                          std::to_string(alpha) +
                          ", beta = " + std::to_string(beta));
  }

  int k = 2;
  for (int r = 3; r <= m - 1; ++r) {
    if (u[r] - u[r + 1] < u[k] - u[k + 1]) k = r;
  }

  std::vector<Ranking> rankings;
  rankings.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < alpha; ++i) {
    rankings.emplace_back(fill_ranking(m, {{0, 1}, {m - 1, 2}}));
  }
  for (int i = 0; i < alpha; ++i) {
    rankings.emplace_back(fill_ranking(m, {{0, 2}, {1, 1}}));
  }
  Alternative next_top = 3;
  auto take_top = [&] {
    const Alternative c = next_top;
    next_top = next_top == m ? 3 : next_top + 1;
    return c;
  };
  for (int i = 0; i < beta / 2 - 1; ++i) {
    rankings.emplace_back(fill_ranking(m, {{0, take_top()}, {1, 1}, {m - 1, 2}}));
  }
  for (int i = 0; i < beta / 2 + 1; ++i) {
    rankings.emplace_back(fill_ranking(m, {{0, take_top()}, {k - 1, 2}, {k, 1}}));
  }

  WorstCaseConstruction out{Profile(rankings), alpha, beta, k};

  const ScoreTable scores = plurality_scores(out.profile);
  bool ok = out.profile.num_agents() == n && scores[1] == alpha &&
            scores[2] == alpha;
  for (Alternative c = 3; c <= m; ++c) ok = ok && scores[c] == alpha - 1;
  ok = ok && potential_winners(scores) == AlternativeSet{1, 2} &&
       pairwise_count(out.profile, 2, 1) == alpha + beta / 2 + 1 &&
       pairwise_count(out.profile, 1, 2) == alpha + beta / 2 - 1 &&
       two_way_tiebreak(out.profile) == 2;
  if (!ok) throw std::logic_error("worst-case construction invariants failed");
  return out;
}

double worst_case_lower_bound(int m, int n, const UtilityVector& u) {
  return (u[2] - u[m]) * (static_cast<double>(n) / m - 2.0);
}

}  // namespace itervote
