#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tagbench {

struct Token {
  std::string surface;
  std::optional<std::string> tag;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

class TaggedCorpus {
 public:
  TaggedCorpus() = default;
  explicit TaggedCorpus(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  std::size_t sentence_count() const { return sentences_.size(); }
  std::size_t token_count() const { return token_count_; }
  bool empty() const { return sentences_.empty(); }

  /// True when every token carries a gold tag.
  bool fully_tagged() const;

  /// Exact set of distinct gold tags.
  std::set<std::string> tags() const;

  friend bool operator==(const TaggedCorpus&, const TaggedCorpus&) = default;

 private:
  std::vector<Sentence> sentences_;
  std::size_t token_count_ = 0;
};

enum class Strictness { strict, lenient };

/// A line rejected by the parser; `line` is 1-based.
struct SkippedLine {
  std::size_t line = 0;
  std::string reason;
};

struct ParsedCorpus {
  TaggedCorpus corpus;
  std::vector<SkippedLine> skipped;
};

/// Reads vertical format: `surface<TAB>tag` per line, blank line between
/// sentences, `#` comment lines. A line with no tab is an untagged token
/// unless `require_tags` is set, in which case it is malformed.
ParsedCorpus parse_corpus(std::istream& in, Strictness strictness, bool require_tags = true);
ParsedCorpus parse_corpus_file(const std::string& path, Strictness strictness, bool require_tags = true);

void write_corpus(std::ostream& out, const TaggedCorpus& corpus);
std::string serialize_corpus(const TaggedCorpus& corpus);

enum class SplitMode { held_out, in_sample };

struct CorpusSplit {
  TaggedCorpus train;
  TaggedCorpus test;
};

/// held_out: the first ceil(train_fraction * sentences) sentences train, the
/// rest test. in_sample: train is the whole corpus and test is an evenly
/// spaced sentence sample holding at least `sample_size` tokens.
CorpusSplit split_corpus(const TaggedCorpus& corpus, double train_fraction, SplitMode mode,
                         std::size_t sample_size = 0);

/// Number of training sentences a held-out split of `n` sentences yields.
std::size_t held_out_train_count(std::size_t n, double train_fraction);

class Lexicon {
 public:
  using TagCounts = std::map<std::string, std::uint64_t>;

  void add(const std::string& surface, const std::string& tag, std::uint64_t count = 1);

  /// Tag counts for a known word, or nullptr.
  const TagCounts* find(const std::string& surface) const;
  bool contains(const std::string& surface) const { return entries_.count(surface) != 0; }
  std::uint64_t count(const std::string& surface, const std::string& tag) const;

  const std::map<std::string, TagCounts>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t total_mass() const;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;

 private:
  std::map<std::string, TagCounts> entries_;
};

Lexicon build_lexicon(const TaggedCorpus& corpus);

/// `surface<TAB>tag<TAB>count`, sorted by surface then tag.
void write_lexicon(std::ostream& out, const Lexicon& lexicon);
Lexicon read_lexicon(std::istream& in);

}  // namespace tagbench
