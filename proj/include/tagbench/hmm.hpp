#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagbench/corpus.hpp"
#include "tagbench/tagset.hpp"
#include "tagbench/unknown.hpp"

namespace tagbench {

/// First-order HMM tagger parameters, kept as raw counts.
///
/// States are the real tags in lexicographic order followed by one boundary
/// pseudo-tag that opens and closes every sentence. Transition probabilities
/// are count(i->j) / freq(i), or with add-one correction
/// (count(i->j) + 1) / (freq(i) + T) where T counts the boundary too.
/// Emissions are count(word, t) / freq(t) for known words and the constant 1
/// for unknown words, so only transitions rank an unknown word's candidates.
///
/// A model never changes after construction; concurrent decoding against a
/// shared instance is safe.
class HmmModel {
 public:
  static constexpr std::string_view kBoundaryName = "<s>";

  /// `transitions` is row-major over state_count() x state_count();
  /// `tag_freq` has one entry per state, boundary last.
  HmmModel(TagsetSpec tagset, std::vector<std::uint64_t> transitions, std::vector<std::uint64_t> tag_freq,
           Lexicon lexicon, bool smoothing);

  const TagsetSpec& tagset() const { return tagset_; }
  const Lexicon& lexicon() const { return lexicon_; }
  bool smoothing() const { return smoothing_; }

  std::size_t tag_count() const { return names_.size() - 1; }
  std::size_t state_count() const { return names_.size(); }
  std::size_t boundary() const { return names_.size() - 1; }
  const std::string& name(std::size_t state) const { return names_.at(state); }
  std::optional<std::size_t> index_of(std::string_view tag) const;
  /// Open-class state indices, ascending.
  const std::vector<std::size_t>& open_states() const { return open_states_; }

  std::uint64_t transition_count(std::size_t from, std::size_t to) const;
  std::uint64_t tag_freq(std::size_t state) const { return freq_.at(state); }

  double transition_prob(std::size_t from, std::size_t to) const;
  /// Throws DataError for a tag outside tags plus boundary.
  double transition_prob(std::string_view from, std::string_view to) const;
  double log_transition(std::size_t from, std::size_t to) const { return log_trans_[from * state_count() + to]; }

  double emission_prob(const std::string& word, std::size_t state) const;
  double emission_prob(const std::string& word, std::string_view tag) const;
  /// Emission given the word's lexicon entry (nullptr = unknown word).
  double emission_prob(const Lexicon::TagCounts* entry, std::size_t state) const;

  /// Same counts with the add-one correction switched on or off.
  HmmModel with_smoothing(bool on) const;

  /// Throws InvariantError if row sums disagree with tag frequencies or a
  /// real tag has zero frequency.
  void check_invariants() const;

  friend bool operator==(const HmmModel& a, const HmmModel& b) {
    return a.tagset_ == b.tagset_ && a.counts_ == b.counts_ && a.freq_ == b.freq_ && a.lexicon_ == b.lexicon_ &&
           a.smoothing_ == b.smoothing_;
  }

 private:
  TagsetSpec tagset_;
  std::vector<std::string> names_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> freq_;
  Lexicon lexicon_;
  bool smoothing_ = true;
  std::vector<double> log_trans_;
  std::vector<std::size_t> open_states_;
};

/// Counts tag bigrams (boundary-bracketed), tag frequencies and the lexicon.
HmmModel train(const TaggedCorpus& corpus, bool smoothing, const std::set<std::string>& closed_decl = {});

/// Sums counts under a tag mapping; the boundary maps to itself.
HmmModel relabel_model(const HmmModel& model, const std::function<std::string(const std::string&)>& map);

struct Hypothesis {
  std::size_t word_position = 0;
  std::vector<std::string> candidate_tags;
  bool is_unknown = false;
};

/// Candidate tags for one word: the lexicon tags of a known word, otherwise
/// the open-class tags, narrowed by the guesser when one is given.
Hypothesis hypothesize(const HmmModel& model, const std::string& word, const Guesser* guesser = nullptr,
                       std::size_t position = 0);

/// Index form of hypothesize(); returns candidate states in ascending order.
std::vector<std::size_t> candidate_states(const HmmModel& model, const std::string& word, const Guesser* guesser,
                                          bool* is_unknown = nullptr);

void write_model(std::ostream& out, const HmmModel& model);
std::string serialize_model(const HmmModel& model);
HmmModel read_model(std::istream& in);
HmmModel read_model_file(const std::string& path);

}  // namespace tagbench
