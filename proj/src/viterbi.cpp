#include "tagbench/viterbi.hpp"

#include <cmath>

namespace tagbench {

namespace {

struct ModelScorer {
  const HmmModel& model;
  std::vector<const Lexicon::TagCounts*> entries;

  ModelScorer(const HmmModel& m, const Sentence& sentence) : model(m) {
    entries.reserve(sentence.size());
    for (const auto& t : sentence.tokens) entries.push_back(m.lexicon().find(t.surface));
  }

  double log_start(std::size_t c) const { return model.log_transition(model.boundary(), c); }
  double log_trans(std::size_t p, std::size_t c) const { return model.log_transition(p, c); }
  double log_end(std::size_t c) const { return model.log_transition(c, model.boundary()); }
  double log_emit(std::size_t pos, std::size_t c) const { return std::log(model.emission_prob(entries[pos], c)); }
};

}  // namespace

std::vector<std::vector<std::size_t>> build_lattice(const HmmModel& model, const Sentence& sentence,
                                                    const Guesser* guesser) {
  std::vector<std::vector<std::size_t>> lattice;
  lattice.reserve(sentence.size());
  for (const auto& t : sentence.tokens) lattice.push_back(candidate_states(model, t.surface, guesser));
  return lattice;
}

Decoding viterbi(const HmmModel& model, const Sentence& sentence, const Guesser* guesser) {
  if (sentence.tokens.empty()) throw DataError("cannot decode an empty sentence");
  return decode_lattice(build_lattice(model, sentence, guesser), ModelScorer(model, sentence));
}

std::vector<std::string> viterbi_tags(const HmmModel& model, const Sentence& sentence, const Guesser* guesser) {
  const auto d = viterbi(model, sentence, guesser);
  std::vector<std::string> out;
  out.reserve(d.path.size());
  for (auto s : d.path) out.push_back(model.name(s));
  return out;
}

double path_log_prob(const HmmModel& model, const Sentence& sentence, const std::vector<std::size_t>& path) {
  if (path.size() != sentence.size() || path.empty()) throw DataError("path length does not match sentence");
  const ModelScorer s(model, sentence);
  double v = s.log_start(path[0]) + s.log_emit(0, path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) v = (v + s.log_trans(path[i - 1], path[i])) + s.log_emit(i, path[i]);
  return v + s.log_end(path.back());
}

}  // namespace tagbench
