#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tagbench/hmm.hpp"

namespace tagbench::testing {

// Room for cross-multiplying two products of 17 factors below 2^30; checked
// arithmetic throws instead of wrapping if a test ever outgrows that.
using Big = boost::multiprecision::checked_uint1024_t;

/// An unnormalised fraction; comparisons cross-multiply.
struct Fraction {
  Big num = 1, den = 1;

  Fraction& operator*=(const Fraction& o) {
    num *= o.num;
    den *= o.den;
    return *this;
  }
  bool is_zero() const { return num == 0; }
  friend bool operator<(const Fraction& a, const Fraction& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator==(const Fraction& a, const Fraction& b) { return a.num * b.den == b.num * a.den; }
};

/// Exhaustive search with exact path probabilities, straight from the counts.
struct ExactBest {
  std::vector<std::size_t> path;  // earliest-candidate choice among exact ties
  Fraction probability;
  double log_prob() const {
    if (probability.is_zero()) return -INFINITY;
    return std::log(static_cast<double>(probability.num)) - std::log(static_cast<double>(probability.den));
  }
};

inline Fraction exact_transition(const HmmModel& m, std::size_t i, std::size_t j) {
  const std::uint64_t c = m.transition_count(i, j), f = m.tag_freq(i);
  if (m.smoothing()) return {c + 1, f + m.state_count()};
  return f == 0 ? Fraction{0, 1} : Fraction{c, f};
}

inline Fraction exact_emission(const HmmModel& m, const std::string& word, std::size_t s) {
  if (!m.lexicon().contains(word)) return {1, 1};
  return {m.lexicon().count(word, m.name(s)), m.tag_freq(s)};
}

/// Among paths of maximal probability, the one whose last position comes
/// earliest in candidate order, then the one before it, and so on.
inline ExactBest exact_best_path(const HmmModel& m, const Sentence& s,
                                 const std::vector<std::vector<std::size_t>>& lattice) {
  ExactBest out;
  const std::size_t n = lattice.size();
  std::vector<std::size_t> idx(n, 0), best_idx;
  bool first = true;
  for (;;) {
    Fraction p = exact_transition(m, m.boundary(), lattice[0][idx[0]]);
    p *= exact_emission(m, s.tokens[0].surface, lattice[0][idx[0]]);
    for (std::size_t i = 1; i < n; ++i) {
      p *= exact_transition(m, lattice[i - 1][idx[i - 1]], lattice[i][idx[i]]);
      p *= exact_emission(m, s.tokens[i].surface, lattice[i][idx[i]]);
    }
    p *= exact_transition(m, lattice[n - 1][idx[n - 1]], m.boundary());
    bool better = first || out.probability < p;
    if (!better && p == out.probability)
      better = std::lexicographical_compare(idx.rbegin(), idx.rend(), best_idx.rbegin(), best_idx.rend());
    if (better) {
      out.probability = p;
      best_idx = idx;
    }
    first = false;
    std::size_t k = 0;
    while (k < n && ++idx[k] == lattice[k].size()) idx[k++] = 0;
    if (k == n) break;
  }
  out.path.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.path[i] = lattice[i][best_idx[i]];
  return out;
}

}  // namespace tagbench::testing
