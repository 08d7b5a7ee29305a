#include "itervote/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_map>

namespace itervote {
namespace {

std::uint64_t saturating_add(std::uint64_t x, std::uint64_t y) {
  const std::uint64_t sum = x + y;
  return sum < x ? std::numeric_limits<std::uint64_t>::max() : sum;
}

Alternative winner_of(std::span<const int> scores) {
  return static_cast<Alternative>(
             std::max_element(scores.begin(), scores.end()) - scores.begin()) +
         1;
}

// Would `target` win if one voter moved from `report` to `target`?
bool wins_after_switch(std::span<const int> scores, Alternative report,
                       Alternative target) {
  const int target_score = scores[target - 1] + 1;
  const int m = static_cast<int>(scores.size());
  for (Alternative c = 1; c <= m; ++c) {
    if (c == target) continue;
    const int s = scores[c - 1] - (c == report ? 1 : 0);
    if (c < target ? s >= target_score : s > target_score) return false;
  }
  return true;
}

// Best-response target of a voter with true ranking `order` currently
// reporting `report`, or 0 if it has none. The first alternative (in true
// preference order) the voter can make win is its best response; it only
// counts if it is strictly preferred to the current winner. A voter whose
// report already wins never moves.
Alternative best_response_target(std::span<const Alternative> order,
                                 Alternative report,
                                 std::span<const int> scores,
                                 Alternative winner) {
  if (report == winner) return 0;
  for (Alternative a : order) {
    if (a == winner) return 0;
    if (a == report) continue;
    if (wins_after_switch(scores, report, a)) return a;
  }
  return 0;
}

[[noreturn]] void depth_bound_violated(int depth, int bound) {
  throw std::logic_error("BR sequence of length " + std::to_string(depth) +
                         " exceeds the n*m bound of " + std::to_string(bound));
}

struct Node {
  AlternativeSet winners;
  std::uint64_t paths = 0;
  int height = 0;
};

// Exhaustive search keyed on the tops vector.
class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const Profile& profile, const ExplorationOptions& options)
      : profile_(profile),
        budget_(options.state_budget),
        depth_bound_(profile.num_agents() * profile.num_alternatives()),
        tops_(static_cast<std::size_t>(profile.num_agents()), '\0'),
        scores_(static_cast<std::size_t>(profile.num_alternatives()), 0) {
    for (int j = 0; j < profile.num_agents(); ++j) {
      tops_[j] = static_cast<char>(profile.top(j));
      ++scores_[profile.top(j) - 1];
    }
  }

  EquilibriumResult run() {
    const Node root = visit(0);
    EquilibriumResult result;
    result.winners = root.winners;
    result.sequence_count = root.paths;
    result.max_depth = root.height;
    result.states_visited = memo_.size();
    return result;
  }

 private:
  Node visit(int depth) {
    if (depth > depth_bound_) depth_bound_violated(depth, depth_bound_);
    if (auto it = memo_.find(tops_); it != memo_.end()) {
      if (depth + it->second.height > depth_bound_) {
        depth_bound_violated(depth + it->second.height, depth_bound_);
      }
      return it->second;
    }
    if (memo_.size() >= budget_) throw BudgetExceeded(budget_);

    const Alternative winner = winner_of(scores_);
    Node node;
    bool any_step = false;
    for (int j = 0; j < profile_.num_agents(); ++j) {
      const Alternative report = tops_[j];
      const Alternative target =
          best_response_target(profile_.order(j), report, scores_, winner);
      if (target == 0) continue;
      any_step = true;
      tops_[j] = static_cast<char>(target);
      --scores_[report - 1];
      ++scores_[target - 1];
      const Node child = visit(depth + 1);
      ++scores_[report - 1];
      --scores_[target - 1];
      tops_[j] = static_cast<char>(report);

      node.winners |= child.winners;
      node.paths = saturating_add(node.paths, child.paths);
      node.height = std::max(node.height, child.height + 1);
    }
    if (!any_step) {
      node.winners = AlternativeSet{winner};
      node.paths = 1;
    }
    memo_.emplace(tops_, node);
    return node;
  }

  const Profile& profile_;
  std::uint64_t budget_;
  int depth_bound_;
  std::string tops_;
  std::vector<int> scores_;
  std::unordered_map<std::string, Node> memo_;
};

// Pruned search over (ranking type, report) counts.
//
// With W the current potential-winner set, a voter's best response depends
// only on its true ranking restricted to W and on which member of W it
// reports (or that it reports none of them): every achievable target lies in
// W, and reports outside W never block a target. States are therefore
// memoized on that projection, and only one voter per projected class is
// tried as the mover.
class PrunedSearch {
 public:
  PrunedSearch(const Profile& profile, const ExplorationOptions& options)
      : m_(profile.num_alternatives()),
        budget_(options.state_budget),
        depth_bound_(profile.num_agents() * profile.num_alternatives()),
        scores_(static_cast<std::size_t>(m_), 0) {
    std::map<std::vector<Alternative>, int> type_index;
    std::vector<int> multiplicity;
    for (int j = 0; j < profile.num_agents(); ++j) {
      auto row = profile.order(j);
      std::vector<Alternative> key(row.begin(), row.end());
      auto [it, inserted] =
          type_index.emplace(std::move(key), static_cast<int>(orders_.size()));
      if (inserted) {
        orders_.push_back(it->first);
        multiplicity.push_back(0);
      }
      ++multiplicity[it->second];
      ++scores_[profile.top(j) - 1];
    }
    num_types_ = static_cast<int>(orders_.size());
    counts_.assign(static_cast<std::size_t>(num_types_) * m_, 0);
    for (int k = 0; k < num_types_; ++k) {
      cell(k, orders_[k].front()) = multiplicity[k];
    }
  }

  EquilibriumResult run() {
    const Node root = visit(0);
    EquilibriumResult result;
    result.winners = root.winners;
    result.max_depth = root.height;
    result.states_visited = memo_.size();
    return result;
  }

 private:
  // Types grouped by their ranking restricted to one potential-winner set.
  struct Projection {
    int slots = 0;                  // |W| + 1; the last slot is "outside W"
    std::vector<int> slot_of;       // alternative - 1 -> slot
    std::vector<int> class_of;      // type -> class
    int num_classes = 0;
  };

  int& cell(int type, Alternative report) {
    return counts_[static_cast<std::size_t>(type) * m_ + (report - 1)];
  }
  int count(int type, Alternative report) const {
    return counts_[static_cast<std::size_t>(type) * m_ + (report - 1)];
  }

  const Projection& projection(AlternativeSet pw) {
    auto [it, inserted] = projections_.try_emplace(pw.mask());
    Projection& p = it->second;
    if (!inserted) return p;
    const auto members = pw.to_vector();
    p.slots = static_cast<int>(members.size()) + 1;
    p.slot_of.assign(static_cast<std::size_t>(m_), p.slots - 1);
    for (std::size_t s = 0; s < members.size(); ++s) {
      p.slot_of[members[s] - 1] = static_cast<int>(s);
    }
    std::map<std::vector<Alternative>, int> class_index;
    p.class_of.resize(static_cast<std::size_t>(num_types_));
    for (int k = 0; k < num_types_; ++k) {
      std::vector<Alternative> restricted;
      for (Alternative a : orders_[k]) {
        if (pw.contains(a)) restricted.push_back(a);
      }
      auto [c, fresh] = class_index.emplace(std::move(restricted), p.num_classes);
      if (fresh) ++p.num_classes;
      p.class_of[k] = c->second;
    }
    return p;
  }

  // Closed-form outcome once PW = {a, b}, a < b. Every later step alternates
  // the winner between a and b and is taken by a voter reporting neither, so
  // a wins iff s(a) plus such voters preferring a is at least s(b) plus such
  // voters preferring b.
  Alternative resolve_pair(Alternative a, Alternative b) const {
    long for_a = scores_[a - 1];
    long for_b = scores_[b - 1];
    for (int k = 0; k < num_types_; ++k) {
      const auto& order = orders_[k];
      const bool prefers_a =
          std::find(order.begin(), order.end(), a) <
          std::find(order.begin(), order.end(), b);
      long third_party = 0;
      for (Alternative c = 1; c <= m_; ++c) {
        if (c != a && c != b) third_party += count(k, c);
      }
      (prefers_a ? for_a : for_b) += third_party;
    }
    return for_a >= for_b ? a : b;
  }

  // PW computed straight from the score buffer.
  AlternativeSet current_potential_winners() const {
    const Alternative winner = winner_of(scores_);
    const int best = scores_[winner - 1];
    AlternativeSet pw{winner};
    for (Alternative a = 1; a <= m_; ++a) {
      const int s = scores_[a - 1];
      if ((a < winner && s == best - 1) || (a > winner && s == best)) pw.insert(a);
    }
    return pw;
  }

  Node visit(int depth) {
    if (depth > depth_bound_) depth_bound_violated(depth, depth_bound_);

    const AlternativeSet pw = current_potential_winners();
    Node node;
    if (pw.size() == 1) {
      node.winners = pw;
      return node;
    }
    if (pw.size() == 2) {
      node.winners = AlternativeSet{resolve_pair(pw.min(), pw.max())};
      return node;
    }

    // Key: the W mask followed by the projected count table.
    const Projection& proj = projection(pw);
    const std::size_t cells =
        static_cast<std::size_t>(proj.num_classes) * proj.slots;
    std::u32string& key = key_buffer_;
    key.assign(2 + cells, 0);
    key[0] = static_cast<char32_t>(pw.mask() & 0xffffffffu);
    key[1] = static_cast<char32_t>(pw.mask() >> 32);
    for (int k = 0; k < num_types_; ++k) {
      const std::size_t row = static_cast<std::size_t>(proj.class_of[k]) * proj.slots;
      for (Alternative c = 1; c <= m_; ++c) {
        key[2 + row + proj.slot_of[c - 1]] += static_cast<char32_t>(count(k, c));
      }
    }
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (depth + it->second.height > depth_bound_) {
        depth_bound_violated(depth + it->second.height, depth_bound_);
      }
      return it->second;
    }
    if (memo_.size() >= budget_) throw BudgetExceeded(budget_);
    std::u32string own_key = key;

    // One concrete (type, report) mover per non-empty projected cell.
    std::vector<std::pair<int, Alternative>> movers;
    std::vector<bool> seen(cells, false);
    for (int k = 0; k < num_types_; ++k) {
      const std::size_t row = static_cast<std::size_t>(proj.class_of[k]) * proj.slots;
      for (Alternative c = 1; c <= m_; ++c) {
        const std::size_t idx = row + proj.slot_of[c - 1];
        if (count(k, c) == 0 || seen[idx]) continue;
        seen[idx] = true;
        movers.emplace_back(k, c);
      }
    }

    const Alternative winner = winner_of(scores_);
    bool any_step = false;
    for (const auto& [k, report] : movers) {
      const Alternative target =
          best_response_target(orders_[k], report, scores_, winner);
      if (target == 0) continue;
      any_step = true;
      --cell(k, report);
      ++cell(k, target);
      --scores_[report - 1];
      ++scores_[target - 1];
      const Node child = visit(depth + 1);
      ++scores_[report - 1];
      --scores_[target - 1];
      ++cell(k, report);
      --cell(k, target);
      node.winners |= child.winners;
      node.height = std::max(node.height, child.height + 1);
    }
    if (!any_step) node.winners = AlternativeSet{winner};
    memo_.emplace(std::move(own_key), node);
    return node;
  }

  int m_;
  std::uint64_t budget_;
  int depth_bound_;
  int num_types_ = 0;
  std::vector<std::vector<Alternative>> orders_;
  std::vector<int> scores_;
  // Row k holds how many voters of ranking type k report each alternative.
  std::vector<int> counts_;
  std::unordered_map<std::uint64_t, Projection> projections_;
  // A u32string doubles as a hashable count vector.
  std::unordered_map<std::u32string, Node> memo_;
  std::u32string key_buffer_;
};

}  // namespace

DynamicsState::DynamicsState(std::shared_ptr<const Profile> truthful)
    : truthful_(std::move(truthful)),
      scores_(truthful_->num_alternatives()) {
  tops_.reserve(static_cast<std::size_t>(truthful_->num_agents()));
  for (int j = 0; j < truthful_->num_agents(); ++j) {
    tops_.push_back(truthful_->top(j));
    ++scores_[truthful_->top(j)];
  }
}

DynamicsState::DynamicsState(std::shared_ptr<const Profile> truthful,
                             std::vector<Alternative> tops)
    : truthful_(std::move(truthful)),
      tops_(std::move(tops)),
      scores_(truthful_->num_alternatives()) {
  if (static_cast<int>(tops_.size()) != truthful_->num_agents()) {
    throw ValidationError("tops vector length must equal the number of agents");
  }
  for (Alternative a : tops_) {
    if (a < 1 || a > truthful_->num_alternatives()) {
      throw ValidationError("reported top out of range");
    }
    ++scores_[a];
  }
}

std::string DynamicsState::tops_string() const {
  const bool wide = truthful_->num_alternatives() >= 10;
  std::string out;
  for (std::size_t j = 0; j < tops_.size(); ++j) {
    if (wide && j > 0) out += ' ';
    out += std::to_string(tops_[j]);
  }
  return out;
}

std::optional<BRStep> best_response_for(const DynamicsState& state,
                                        int agent) {
  const Alternative winner = state.winner();
  const Alternative target =
      best_response_target(state.truthful().order(agent), state.tops()[agent],
                           state.scores().values(), winner);
  if (target == 0) return std::nullopt;
  return BRStep{agent, target, target};
}

std::vector<BRStep> best_response_steps(const DynamicsState& state) {
  std::vector<BRStep> steps;
  for (int j = 0; j < state.truthful().num_agents(); ++j) {
    if (auto step = best_response_for(state, j)) steps.push_back(*step);
  }
  return steps;
}

DynamicsState apply_step(const DynamicsState& state, const BRStep& step) {
  if (step.agent < 0 || step.agent >= state.truthful().num_agents()) {
    throw ValidationError("BR step agent out of range");
  }
  const auto valid = best_response_for(state, step.agent);
  if (!valid || *valid != step) {
    throw ValidationError("agent " + std::to_string(step.agent + 1) +
                          " has no best response to " +
                          std::to_string(step.new_top) + " in state " +
                          state.tops_string());
  }
  std::vector<Alternative> tops(state.tops().begin(), state.tops().end());
  tops[step.agent] = step.new_top;
  return DynamicsState(state.truthful_ptr(), std::move(tops));
}

EquilibriumResult equilibrium_winners_exhaustive(
    const Profile& profile, const ExplorationOptions& options) {
  return ExhaustiveSearch(profile, options).run();
}

Alternative two_way_tiebreak(const Profile& profile) {
  const AlternativeSet pw = potential_winners(profile);
  if (pw.size() != 2) {
    throw ValidationError("two_way_tiebreak needs exactly two potential "
                          "winners, found " + pw.to_string());
  }
  const Alternative a = pw.min();
  const Alternative b = pw.max();
  return pairwise_count(profile, a, b) >= pairwise_count(profile, b, a) ? a : b;
}

EquilibriumResult equilibrium_winners(const Profile& profile,
                                      const ExplorationOptions& options) {
  const AlternativeSet pw = potential_winners(profile);
  EquilibriumResult result;
  if (pw.size() == 1) {
    result.winners = pw;
    result.states_visited = 1;
    return result;
  }
  if (pw.size() == 2) {
    result.winners = AlternativeSet{two_way_tiebreak(profile)};
    result.states_visited = 1;
    return result;
  }
  return PrunedSearch(profile, options).run();
}

}  // namespace itervote
