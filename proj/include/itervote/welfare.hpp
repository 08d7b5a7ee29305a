#pragma once

// Rank-based social welfare and the adversarial welfare loss of iterative
// plurality, plus the worst-case profile family showing that loss grows
// linearly in n.

#include <vector>

#include "itervote/core.hpp"
#include "itervote/dynamics.hpp"

namespace itervote {

// Sum over agents of u_i, where `a` sits at rank i of the agent's true ranking.
double social_welfare(const Profile& profile, const UtilityVector& u,
                      Alternative a);

// social_welfare for every alternative; entry a-1 belongs to alternative a.
std::vector<double> welfare_table(const Profile& profile,
                                  const UtilityVector& u);

struct LossReport {
  Alternative truthful_winner = 0;
  AlternativeSet equilibrium_winners;
  double truthful_sw = 0.0;
  double worst_equilibrium_sw = 0.0;
  // truthful_sw - worst_equilibrium_sw. Negative when iteration helps.
  double loss = 0.0;
};

// Loss given an already computed EW(P).
LossReport adversarial_loss(const Profile& profile, const UtilityVector& u,
                            AlternativeSet equilibrium_winners);

// Computes EW(P) with the pruned dispatcher. Propagates BudgetExceeded.
LossReport adversarial_loss(const Profile& profile, const UtilityVector& u,
                            const ExplorationOptions& options = {});

// Profile realising the linear lower bound on the worst-case loss.
struct WorstCaseConstruction {
  Profile profile;
  int alpha = 0;  // s(1) = s(2) = alpha
  int beta = 0;   // third-party agents; s(c) = alpha - 1 for every c > 2
  int k = 0;      // rank with the smallest utility drop u_k - u_{k+1}
};

// Builds the worst-case profile for m >= 3 and even n with
// alpha = (n + m - 2) / m integral, beta = (alpha - 1)(m - 2) even and
// beta / 2 >= 1. Groups:
//   alpha agents            1 first, 2 last
//   alpha agents            2 first, 1 second
//   beta/2 - 1 agents       1 second, 2 last
//   beta/2 + 1 agents       2 at rank k, 1 at rank k + 1
// Tops of the last two groups cycle through 3..m; all other positions are
// filled with the unused alternatives in increasing order. Throws
// ValidationError outside the validity window. The score pattern and
// EW = {2} are checked before returning (std::logic_error on failure).
WorstCaseConstruction build_theorem1_profile(int m, int n,
                                             const UtilityVector& u);

// (u_2 - u_m)(n/m - 2).
double worst_case_lower_bound(int m, int n, const UtilityVector& u);

}  // namespace itervote
