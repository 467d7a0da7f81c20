#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tagbench/corpus.hpp"
#include "tagbench/tagset.hpp"
#include "tagbench/viterbi.hpp"

namespace tagbench {

struct FeatureAxis {
  char letter = 'G';
  std::size_t values = 2;
};

struct SyntheticSpec {
  std::size_t base_tags = 8;
  std::vector<FeatureAxis> axes{{'G', 2}, {'N', 2}};
  std::size_t tokens = 50000;
  std::size_t vocabulary = 4000;
  double ambiguity = 0.4;  // target share of tokens whose word type has >1 tag
  std::size_t min_sentence_length = 5;
  std::size_t max_sentence_length = 20;
  bool suffix_marks_tag = false;  // every unambiguous word ends in a 2-letter suffix unique to its tag
  std::uint64_t seed = 0;
};

/// Parses axis lists such as "G:2,N:2".
std::vector<FeatureAxis> parse_axes(std::string_view text);

/// The generating HMM, kept so decoding with true parameters can serve as
/// an oracle. Sentence lengths are drawn independently of the tags, so the
/// true model carries no end-of-sentence term.
class GenerativeModel {
 public:
  GenerativeModel() = default;
  GenerativeModel(std::vector<std::string> tags, std::vector<double> start, std::vector<double> transitions,
                  std::map<std::string, std::vector<std::pair<std::size_t, double>>> emissions);

  const std::vector<std::string>& tags() const { return tags_; }
  double start(std::size_t t) const { return start_.at(t); }
  double transition(std::size_t from, std::size_t to) const { return trans_.at(from * tags_.size() + to); }
  /// Tags with nonzero emission probability for `word`, ascending by index.
  const std::vector<std::pair<std::size_t, double>>& emissions(const std::string& word) const;
  const std::map<std::string, std::vector<std::pair<std::size_t, double>>>& emission_table() const {
    return emissions_;
  }

  /// Viterbi with the true parameters; candidates are each word's true tags.
  std::vector<std::string> decode(const Sentence& sentence) const;

 private:
  std::vector<std::string> tags_;
  std::vector<double> start_;
  std::vector<double> trans_;
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> emissions_;
};

struct SyntheticCorpus {
  TaggedCorpus corpus;
  GenerativeModel truth;
  std::string rules_text;  // rule file that removes each feature axis
};

/// Throws UsageError for infeasible settings (for instance a vocabulary too
/// small to give every tag its own words).
SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec);

/// Tag name for base tag `base` with one value per axis, e.g. "B3-G0-N1".
std::string synthetic_tag(std::size_t base, const std::vector<FeatureAxis>& axes, const std::vector<std::size_t>& values);

/// Two-letter suffix that marks tag number `index` when suffix marking is on.
std::string synthetic_suffix(std::size_t index);

void write_truth(std::ostream& out, const GenerativeModel& model);
GenerativeModel read_truth(std::istream& in);

}  // namespace tagbench
