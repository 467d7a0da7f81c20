#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tagbench/corpus.hpp"
#include "tagbench/hmm.hpp"
#include "tagbench/tagset.hpp"
#include "tagbench/unknown.hpp"
#include "tagbench/util.hpp"

namespace tagbench {

/// Test tokens fall in exactly one category, decided by the trained model:
/// unknown (surface absent from the training lexicon), ambiguous-known
/// (more than one lexicon tag) or unambiguous-known.
struct CategoryCounts {
  std::uint64_t tokens = 0;
  std::uint64_t unambiguous_known = 0;
  std::uint64_t ambiguous_known = 0;
  std::uint64_t unknown = 0;
  std::uint64_t correct_unambiguous = 0;
  std::uint64_t correct_ambiguous = 0;
  std::uint64_t correct_unknown = 0;
  std::uint64_t multi_hypothesis = 0;  // tokens with more than one candidate, unknowns included

  std::uint64_t correct() const { return correct_unambiguous + correct_ambiguous + correct_unknown; }
};

/// One row of a results table. Fixture rows taken from published tables
/// carry only the rates, so the counts are optional.
struct EvalReport {
  std::size_t index = 0;
  std::string scheme_code;
  std::size_t tagset_size = 0;
  Ratio ambiguity;
  std::optional<Ratio> ambiguous_accuracy;
  std::optional<Ratio> unknown_accuracy;
  std::optional<Ratio> overall_accuracy;
  std::optional<CategoryCounts> counts;
};

/// Percentage of test tokens given more than one candidate tag.
Ratio degree_of_ambiguity(const TaggedCorpus& test, const HmmModel& model, const Guesser* guesser = nullptr);

/// Scores predicted tags (one vector per sentence) against gold tags.
EvalReport evaluate(const TaggedCorpus& test, const std::vector<std::vector<std::string>>& predicted,
                    const HmmModel& model, const Guesser* guesser = nullptr);

std::vector<std::vector<std::string>> tag_corpus(const HmmModel& model, const TaggedCorpus& corpus,
                                                 const Guesser* guesser = nullptr);

struct ExperimentConfig {
  double train_fraction = 0.95;
  std::size_t sample_size = 0;  // in_sample test size; 0 means 5% of the tokens
  bool smoothing = true;
  std::set<std::string> closed;  // declared against the unreduced tagset
  std::optional<Guesser> guesser;  // tags named against the unreduced tagset
};

/// apply_scheme -> split -> train -> decode -> evaluate.
EvalReport run_experiment(const TaggedCorpus& corpus, const ReductionScheme& scheme, SplitMode mode,
                          const ExperimentConfig& config);

/// One report per code, in input order (index = position + 1), regardless of
/// how many workers run the variants.
std::vector<EvalReport> sweep(const TaggedCorpus& corpus, const FeatureRules& rules,
                              const std::vector<std::string>& codes, SplitMode mode, const ExperimentConfig& config,
                              std::size_t workers = 1);

}  // namespace tagbench
