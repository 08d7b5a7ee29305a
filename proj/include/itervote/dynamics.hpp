#pragma once

// Iterative plurality voting under best-response dynamics started from the
// truthful profile.
//
// A reported profile is represented only by each agent's reported top: the
// plurality winner and every best-response step depend on the reported tops
// and the agents' true rankings, never on lower reported positions.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "itervote/core.hpp"

namespace itervote {

inline constexpr std::uint64_t kDefaultStateBudget = 5'000'000;

// Exploration visited more distinct states than the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t budget)
      : std::runtime_error("exploration state budget of " +
                           std::to_string(budget) + " states exceeded"),
        budget_(budget) {}
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t budget_;
};

// A Type-1 best response: `agent` (0-based) switches its reported top to
// `new_top`, which becomes the winner.
struct BRStep {
  int agent = 0;
  Alternative new_top = 0;
  Alternative new_winner = 0;

  friend bool operator==(const BRStep&, const BRStep&) = default;
};

class DynamicsState {
 public:
  // The truthful starting state: every agent reports its true top.
  explicit DynamicsState(std::shared_ptr<const Profile> truthful);
  explicit DynamicsState(Profile truthful)
      : DynamicsState(std::make_shared<const Profile>(std::move(truthful))) {}

  // Arbitrary reported tops, one per agent. Throws ValidationError on size or
  // range mismatch.
  DynamicsState(std::shared_ptr<const Profile> truthful,
                std::vector<Alternative> tops);

  const Profile& truthful() const { return *truthful_; }
  const std::shared_ptr<const Profile>& truthful_ptr() const {
    return truthful_;
  }
  std::span<const Alternative> tops() const { return tops_; }
  const ScoreTable& scores() const { return scores_; }
  Alternative winner() const { return plurality_winner(scores_); }
  AlternativeSet potential_winners() const {
    return itervote::potential_winners(scores_);
  }

  // Compact rendering of the tops, e.g. "111222333" (digits are separated by
  // spaces once m >= 10).
  std::string tops_string() const;

  friend bool operator==(const DynamicsState& x, const DynamicsState& y) {
    return *x.truthful_ == *y.truthful_ && x.tops_ == y.tops_;
  }

 private:
  std::shared_ptr<const Profile> truthful_;
  std::vector<Alternative> tops_;
  ScoreTable scores_;
};

// The best response available to one agent, if any.
std::optional<BRStep> best_response_for(const DynamicsState& state, int agent);

// All agents' best responses, in agent order. Empty iff the state is a Nash
// equilibrium.
std::vector<BRStep> best_response_steps(const DynamicsState& state);

// Throws ValidationError unless `step` is currently a valid best response.
DynamicsState apply_step(const DynamicsState& state, const BRStep& step);

struct ExplorationOptions {
  std::uint64_t state_budget = kDefaultStateBudget;
};

struct EquilibriumResult {
  AlternativeSet winners;
  // Number of distinct maximal BR sequences. Only the exhaustive search
  // enumerates them; saturates at UINT64_MAX.
  std::optional<std::uint64_t> sequence_count;
  // Longest explored BR sequence. For the pruned search this stops at states
  // resolved in closed form.
  int max_depth = 0;
  std::uint64_t states_visited = 0;
};

// EW(P) by depth-first search over every BR sequence from the truthful
// profile, memoized on the tops vector. Throws BudgetExceeded when more than
// `options.state_budget` distinct states are needed, and std::logic_error if
// a sequence longer than n*m is ever found.
EquilibriumResult equilibrium_winners_exhaustive(
    const Profile& profile, const ExplorationOptions& options = {});

// The unique equilibrium winner when |PW(P)| = 2: with PW = {a, b} and a < b,
// returns a if P[a > b] >= P[b > a] and b otherwise. Throws ValidationError
// when |PW| != 2.
Alternative two_way_tiebreak(const Profile& profile);

// EW(P) by dispatch on |PW(P)|: 1 -> the truthful winner, 2 -> two-way
// tiebreak, otherwise a pruned search that resolves every state whose
// potential-winner set has shrunk to two alternatives in closed form.
// Agents with identical true ranking and identical report are merged, so the
// search state is a (ranking type, report) count table.
EquilibriumResult equilibrium_winners(const Profile& profile,
                                      const ExplorationOptions& options = {});

}  // namespace itervote
