#pragma once

// Domain types for plurality elections: rankings, profiles, plurality scores,
// lexicographic winners and potential winners.
//
// Alternatives are 1-based integers. Index order is the tie-breaking order
// everywhere in the library: the smallest index wins among equal scores.

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace itervote {

using Alternative = int;

// Largest supported number of alternatives (AlternativeSet is a 64-bit mask).
inline constexpr int kMaxAlternatives = 64;

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Small set of alternatives backed by a bitmask.
class AlternativeSet {
 public:
  constexpr AlternativeSet() = default;
  AlternativeSet(std::initializer_list<Alternative> alts) {
    for (Alternative a : alts) insert(a);
  }

  static constexpr AlternativeSet from_mask(std::uint64_t mask) {
    AlternativeSet s;
    s.mask_ = mask;
    return s;
  }

  void insert(Alternative a) { mask_ |= bit(a); }
  void erase(Alternative a) { mask_ &= ~bit(a); }
  bool contains(Alternative a) const { return (mask_ & bit(a)) != 0; }
  int size() const { return std::popcount(mask_); }
  bool empty() const { return mask_ == 0; }
  std::uint64_t mask() const { return mask_; }

  // Smallest / largest member. Undefined on an empty set.
  Alternative min() const { return std::countr_zero(mask_) + 1; }
  Alternative max() const { return 64 - std::countl_zero(mask_); }

  bool is_subset_of(AlternativeSet other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  AlternativeSet& operator|=(AlternativeSet other) {
    mask_ |= other.mask_;
    return *this;
  }
  friend AlternativeSet operator|(AlternativeSet a, AlternativeSet b) {
    return a |= b;
  }
  friend bool operator==(AlternativeSet, AlternativeSet) = default;

  // Members in increasing index order.
  std::vector<Alternative> to_vector() const;
  // "{1,2,3}"
  std::string to_string() const;

 private:
  static std::uint64_t bit(Alternative a) {
    return std::uint64_t{1} << (a - 1);
  }
  std::uint64_t mask_ = 0;
};

// A strict linear order over {1, ..., m}, most preferred first.
class Ranking {
 public:
  // Throws ValidationError unless `order` is a permutation of 1..m.
  explicit Ranking(std::vector<Alternative> order);
  Ranking(std::initializer_list<Alternative> order)
      : Ranking(std::vector<Alternative>(order)) {}

  int size() const { return static_cast<int>(order_.size()); }
  Alternative top() const { return order_.front(); }
  Alternative at(int position) const { return order_[position]; }
  // 0-based position of `a` (0 = top).
  int position_of(Alternative a) const { return position_[a - 1]; }
  bool prefers(Alternative a, Alternative b) const {
    return position_of(a) < position_of(b);
  }
  std::span<const Alternative> order() const { return order_; }

  friend bool operator==(const Ranking& x, const Ranking& y) {
    return x.order_ == y.order_;
  }
  friend auto operator<=>(const Ranking& x, const Ranking& y) {
    return x.order_ <=> y.order_;
  }

 private:
  std::vector<Alternative> order_;
  std::vector<int> position_;
};

// An ordered sequence of n rankings over the same m alternatives. Agent
// identity (index) matters for the dynamics, so this is not a multiset.
//
// Storage is flat: row j of `order_` is agent j's ranking and row j of
// `position_` is its inverse.
class Profile {
 public:
  // Throws ValidationError on n = 0, m < 2, m > kMaxAlternatives or ragged
  // rankings.
  explicit Profile(const std::vector<Ranking>& rankings);

  // `order` holds n*m alternatives, one ranking per row of length m.
  Profile(int m, std::vector<Alternative> order);

  int num_agents() const { return n_; }
  int num_alternatives() const { return m_; }

  // 0-based agent index.
  std::span<const Alternative> order(int agent) const {
    return {order_.data() + static_cast<std::size_t>(agent) * m_,
            static_cast<std::size_t>(m_)};
  }
  Alternative top(int agent) const {
    return order_[static_cast<std::size_t>(agent) * m_];
  }
  int position_of(int agent, Alternative a) const {
    return position_[static_cast<std::size_t>(agent) * m_ + (a - 1)];
  }
  bool prefers(int agent, Alternative a, Alternative b) const {
    return position_of(agent, a) < position_of(agent, b);
  }
  Ranking ranking(int agent) const;

  friend bool operator==(const Profile& x, const Profile& y) {
    return x.m_ == y.m_ && x.order_ == y.order_;
  }

 private:
  void build_positions();

  int n_ = 0;
  int m_ = 0;
  std::vector<Alternative> order_;
  std::vector<int> position_;
};

// Dense plurality score table indexed by 1-based alternative.
class ScoreTable {
 public:
  explicit ScoreTable(int m) : scores_(static_cast<std::size_t>(m), 0) {}
  ScoreTable(std::initializer_list<int> scores) : scores_(scores) {}

  int num_alternatives() const { return static_cast<int>(scores_.size()); }
  int operator[](Alternative a) const { return scores_[a - 1]; }
  int& operator[](Alternative a) { return scores_[a - 1]; }
  int total() const;
  std::span<const int> values() const { return scores_; }

  friend bool operator==(const ScoreTable&, const ScoreTable&) = default;

 private:
  std::vector<int> scores_;
};

// Rank-indexed utilities u_1 >= ... >= u_m >= 0 with u_1 > u_m.
class UtilityVector {
 public:
  // Throws ValidationError when the ordering or positivity constraints fail.
  explicit UtilityVector(std::vector<double> u);
  UtilityVector(std::initializer_list<double> u)
      : UtilityVector(std::vector<double>(u)) {}

  static UtilityVector borda(int m);
  static UtilityVector plurality(int m);

  int size() const { return static_cast<int>(u_.size()); }
  // 1-based rank.
  double operator[](int rank) const { return u_[rank - 1]; }
  std::span<const double> values() const { return u_; }

 private:
  std::vector<double> u_;
};

ScoreTable plurality_scores(const Profile& profile);

// Smallest-index alternative among those with maximal score.
Alternative plurality_winner(const ScoreTable& scores);

// {r} ∪ {a < r : s(a) = s(r) - 1} ∪ {a > r : s(a) = s(r)}.
AlternativeSet potential_winners(const ScoreTable& scores);
AlternativeSet potential_winners(const Profile& profile);

// Number of agents preferring a to b. Throws ValidationError when a == b.
int pairwise_count(const Profile& profile, Alternative a, Alternative b);

}  // namespace itervote
