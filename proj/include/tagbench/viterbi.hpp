#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tagbench/corpus.hpp"
#include "tagbench/error.hpp"
#include "tagbench/hmm.hpp"
#include "tagbench/unknown.hpp"

namespace tagbench {

struct Decoding {
  std::vector<std::size_t> path;  // one state per position
  double log_prob = -std::numeric_limits<double>::infinity();
};

/// Viterbi search over a lattice of per-position candidate states.
///
/// The scorer provides log_start(c), log_trans(p, c), log_end(c) and
/// log_emit(pos, c). A path scores
///   ((start + emit0) + trans + emit1) + ... + end
/// summed in that order. Ties keep the earliest candidate in lattice order,
/// both for back-pointers and for the final state. Scores closer than
/// kTieTolerance (relative) count as tied, so paths of equal probability stay
/// tied whatever order their logs were added in. When no path has nonzero
/// probability every path ties and the earliest candidates are returned.
inline constexpr double kTieTolerance = 1e-12;

namespace detail {
inline bool beats(double v, double best) {
  if (best == -std::numeric_limits<double>::infinity()) return v > best;
  return v > best + kTieTolerance * std::max(1.0, std::abs(best));
}
}  // namespace detail

template <typename Scorer>
Decoding decode_lattice(const std::vector<std::vector<std::size_t>>& lattice, const Scorer& scorer) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const std::size_t n = lattice.size();
  if (n == 0) throw DataError("cannot decode an empty sentence");
  for (const auto& cands : lattice)
    if (cands.empty()) throw DataError("word with an empty hypothesis set");

  std::vector<std::vector<double>> delta(n);
  std::vector<std::vector<std::size_t>> back(n);
  delta[0].resize(lattice[0].size());
  for (std::size_t c = 0; c < lattice[0].size(); ++c)
    delta[0][c] = scorer.log_start(lattice[0][c]) + scorer.log_emit(0, lattice[0][c]);

  for (std::size_t pos = 1; pos < n; ++pos) {
    const auto& prev = lattice[pos - 1];
    const auto& cur = lattice[pos];
    delta[pos].assign(cur.size(), kNegInf);
    back[pos].assign(cur.size(), 0);
    for (std::size_t c = 0; c < cur.size(); ++c) {
      double best = kNegInf;
      std::size_t arg = 0;
      for (std::size_t p = 0; p < prev.size(); ++p) {
        const double v = delta[pos - 1][p] + scorer.log_trans(prev[p], cur[c]);
        if (detail::beats(v, best)) {
          best = v;
          arg = p;
        }
      }
      delta[pos][c] = best + scorer.log_emit(pos, cur[c]);
      back[pos][c] = arg;
    }
  }

  double best = kNegInf;
  std::size_t arg = 0;
  for (std::size_t c = 0; c < lattice[n - 1].size(); ++c) {
    const double v = delta[n - 1][c] + scorer.log_end(lattice[n - 1][c]);
    if (detail::beats(v, best)) {
      best = v;
      arg = c;
    }
  }

  Decoding out;
  out.log_prob = best;
  out.path.resize(n);
  if (best == kNegInf) {
    for (std::size_t pos = 0; pos < n; ++pos) out.path[pos] = lattice[pos][0];
    return out;
  }
  for (std::size_t pos = n; pos-- > 0;) {
    out.path[pos] = lattice[pos][arg];
    if (pos > 0) arg = back[pos][arg];
  }
  return out;
}

/// Candidate states for every token of `sentence`.
std::vector<std::vector<std::size_t>> build_lattice(const HmmModel& model, const Sentence& sentence,
                                                    const Guesser* guesser = nullptr);

/// Most probable tag sequence under `model`, boundary transitions included.
Decoding viterbi(const HmmModel& model, const Sentence& sentence, const Guesser* guesser = nullptr);
std::vector<std::string> viterbi_tags(const HmmModel& model, const Sentence& sentence,
                                      const Guesser* guesser = nullptr);

/// Log-probability of one tag path, summed in the decoder's order.
double path_log_prob(const HmmModel& model, const Sentence& sentence, const std::vector<std::size_t>& path);

}  // namespace tagbench
