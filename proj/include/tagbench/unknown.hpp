#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tagbench/corpus.hpp"
#include "tagbench/tagset.hpp"

namespace tagbench {

enum class SurfaceFeature { suffix, prefix, has_capital, all_capitals, has_digit, has_hyphen, word_shape };

/// Collapsed character-class shape: uppercase -> X, lowercase or non-ASCII
/// letter -> x, digit -> d, anything else kept; runs collapse, so
/// "Paris" -> "Xx" and "1990s" -> "dx".
std::string word_shape(std::string_view word);

struct GuesserRule {
  SurfaceFeature feature = SurfaceFeature::suffix;
  std::string argument;  // affix text or shape pattern
  std::set<std::string> allowed_tags;
  int priority = 0;  // lower value wins

  bool matches(std::string_view word) const;
  std::string feature_spec() const;
};

/// Surface-feature guesser for unknown words. Rules are held in priority
/// order; the first rule matching a word decides its candidate tags.
class Guesser {
 public:
  Guesser() = default;
  explicit Guesser(std::vector<GuesserRule> rules);

  const std::vector<GuesserRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

  /// Throws DataError if any rule allows a tag that is not open-class in `tagset`.
  void validate(const TagsetSpec& tagset) const;

  /// The same rules with every allowed tag rewritten by `map`.
  Guesser relabeled(const std::function<std::string(const std::string&)>& map) const;

  /// Rule covering `word`, or nullptr.
  const GuesserRule* match(std::string_view word) const;

 private:
  std::vector<GuesserRule> rules_;
};

/// `GUESS <priority> <feature-spec> -> tag[,tag...]` lines, `#` comments.
Guesser parse_guesser(std::istream& in);
Guesser parse_guesser_file(const std::string& path);

/// Highest-priority matching rule's tags restricted to the open class;
/// the full open class when nothing matches or the restriction is empty.
std::set<std::string> guess_tags(std::string_view word, const Guesser& guesser, const TagsetSpec& tagset);

struct UnknownAnalysis {
  std::uint64_t total_unknown = 0;
  std::uint64_t found_in_full_lexicon = 0;
  std::uint64_t single_tag = 0;
  std::uint64_t multi_tag = 0;
  std::map<std::size_t, std::uint64_t> tag_count_histogram;  // tags in full lexicon -> word types
};

/// Word types of `test` missing from `train_lexicon`, looked up in `full_lexicon`.
UnknownAnalysis analyze_unknown_words(const Lexicon& full_lexicon, const Lexicon& train_lexicon,
                                      const TaggedCorpus& test);

std::string render_unknown_analysis(const UnknownAnalysis& analysis);

}  // namespace tagbench
