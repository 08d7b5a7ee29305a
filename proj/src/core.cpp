#include "itervote/core.hpp"

#include <algorithm>

namespace itervote {
namespace {

// Fills `position` (size m) with the inverse of `order` or reports why the
// row is not a permutation of 1..m.
bool invert_permutation(std::span<const Alternative> order,
                        std::span<int> position, std::string* why) {
  const int m = static_cast<int>(order.size());
  std::fill(position.begin(), position.end(), -1);
  for (int i = 0; i < m; ++i) {
    const Alternative a = order[i];
    if (a < 1 || a > m) {
      *why = "alternative " + std::to_string(a) + " out of range [1, " +
             std::to_string(m) + "]";
      return false;
    }
    if (position[a - 1] != -1) {
      *why = "alternative " + std::to_string(a) + " repeated";
      return false;
    }
    position[a - 1] = i;
  }
  return true;
}

}  // namespace

std::vector<Alternative> AlternativeSet::to_vector() const {
  std::vector<Alternative> out;
  for (std::uint64_t rest = mask_; rest != 0; rest &= rest - 1) {
    out.push_back(std::countr_zero(rest) + 1);
  }
  return out;
}

std::string AlternativeSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (Alternative a : to_vector()) {
    if (!first) out += ',';
    out += std::to_string(a);
    first = false;
  }
  return out + "}";
}

Ranking::Ranking(std::vector<Alternative> order) : order_(std::move(order)) {
  if (order_.size() < 2 ||
      order_.size() > static_cast<std::size_t>(kMaxAlternatives)) {
    throw ValidationError("ranking must have between 2 and " +
                          std::to_string(kMaxAlternatives) + " alternatives");
  }
  position_.resize(order_.size());
  std::string why;
  if (!invert_permutation(order_, position_, &why)) {
    throw ValidationError("ranking is not a permutation: " + why);
  }
}

Profile::Profile(const std::vector<Ranking>& rankings) {
  if (rankings.empty()) throw ValidationError("profile needs at least one agent");
  n_ = static_cast<int>(rankings.size());
  m_ = rankings.front().size();
  order_.reserve(static_cast<std::size_t>(n_) * m_);
  for (int j = 0; j < n_; ++j) {
    if (rankings[j].size() != m_) {
      throw ValidationError("agent " + std::to_string(j + 1) + " ranks " +
                            std::to_string(rankings[j].size()) +
                            " alternatives, expected " + std::to_string(m_));
    }
    auto row = rankings[j].order();
    order_.insert(order_.end(), row.begin(), row.end());
  }
  position_.resize(order_.size());
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < m_; ++i) {
      position_[static_cast<std::size_t>(j) * m_ + (order_[j * m_ + i] - 1)] = i;
    }
  }
}

Profile::Profile(int m, std::vector<Alternative> order)
    : m_(m), order_(std::move(order)) {
  if (m < 2 || m > kMaxAlternatives) {
    throw ValidationError("m must be in [2, " +
                          std::to_string(kMaxAlternatives) + "]");
  }
  if (order_.empty() || order_.size() % static_cast<std::size_t>(m) != 0) {
    throw ValidationError("flat profile size must be a positive multiple of m");
  }
  n_ = static_cast<int>(order_.size() / m);
  build_positions();
}

void Profile::build_positions() {
  position_.resize(order_.size());
  std::string why;
  for (int j = 0; j < n_; ++j) {
    const std::size_t off = static_cast<std::size_t>(j) * m_;
    if (!invert_permutation(
            std::span<const Alternative>(order_.data() + off, m_),
            std::span<int>(position_.data() + off, m_), &why)) {
      throw ValidationError("agent " + std::to_string(j + 1) + ": " + why);
    }
  }
}

Ranking Profile::ranking(int agent) const {
  auto row = order(agent);
  return Ranking(std::vector<Alternative>(row.begin(), row.end()));
}

int ScoreTable::total() const {
  int sum = 0;
  for (int s : scores_) sum += s;
  return sum;
}

UtilityVector::UtilityVector(std::vector<double> u) : u_(std::move(u)) {
  if (u_.size() < 2) throw ValidationError("utility vector needs m >= 2 entries");
  for (std::size_t i = 0; i < u_.size(); ++i) {
    if (!(u_[i] >= 0.0)) {
      throw ValidationError("utilities must be nonnegative");
    }
    if (i > 0 && u_[i] > u_[i - 1]) {
      throw ValidationError("utilities must be nonincreasing in rank");
    }
  }
  if (!(u_.front() > u_.back())) {
    throw ValidationError("utility vector must satisfy u_1 > u_m");
  }
}

UtilityVector UtilityVector::borda(int m) {
  std::vector<double> u(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) u[i] = m - 1 - i;
  return UtilityVector(std::move(u));
}

UtilityVector UtilityVector::plurality(int m) {
  std::vector<double> u(static_cast<std::size_t>(m), 0.0);
  if (m >= 1) u[0] = 1.0;
  return UtilityVector(std::move(u));
}

ScoreTable plurality_scores(const Profile& profile) {
  ScoreTable scores(profile.num_alternatives());
  for (int j = 0; j < profile.num_agents(); ++j) ++scores[profile.top(j)];
  return scores;
}

Alternative plurality_winner(const ScoreTable& scores) {
  auto values = scores.values();
  // max_element returns the first maximum, i.e. the smallest index.
  return static_cast<Alternative>(
             std::max_element(values.begin(), values.end()) - values.begin()) +
         1;
}

AlternativeSet potential_winners(const ScoreTable& scores) {
  const Alternative winner = plurality_winner(scores);
  const int best = scores[winner];
  AlternativeSet pw{winner};
  for (Alternative a = 1; a <= scores.num_alternatives(); ++a) {
    if (a < winner && scores[a] == best - 1) pw.insert(a);
    if (a > winner && scores[a] == best) pw.insert(a);
  }
  return pw;
}

AlternativeSet potential_winners(const Profile& profile) {
  return potential_winners(plurality_scores(profile));
}

int pairwise_count(const Profile& profile, Alternative a, Alternative b) {
  if (a == b) throw ValidationError("pairwise_count requires a != b");
  const int m = profile.num_alternatives();
  if (a < 1 || a > m || b < 1 || b > m) {
    throw ValidationError("pairwise_count alternative out of range");
  }
  int count = 0;
  for (int j = 0; j < profile.num_agents(); ++j) {
    if (profile.prefers(j, a, b)) ++count;
  }
  return count;
}

}  // namespace itervote
