#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tagbench/corpus.hpp"

namespace tagbench {

class TagsetSpec {
 public:
  TagsetSpec() = default;
  TagsetSpec(std::set<std::string> tags, std::set<std::string> closed);

  const std::set<std::string>& tags() const { return tags_; }
  const std::set<std::string>& closed() const { return closed_; }
  std::set<std::string> open() const;

  std::size_t size() const { return tags_.size(); }
  bool contains(const std::string& tag) const { return tags_.count(tag) != 0; }
  bool is_closed(const std::string& tag) const { return closed_.count(tag) != 0; }

  friend bool operator==(const TagsetSpec&, const TagsetSpec&) = default;

 private:
  std::set<std::string> tags_;
  std::set<std::string> closed_;
};

/// Distinct gold tags of `corpus`; tags named in `closed_decl` are flagged
/// closed. Declared tags absent from the corpus are ignored and reported
/// through `warnings` when it is non-null.
TagsetSpec tagset_of(const TaggedCorpus& corpus, const std::set<std::string>& closed_decl = {},
                     std::vector<std::string>* warnings = nullptr);

/// One tag per line, `#` comments.
std::set<std::string> read_closed_class(std::istream& in);
std::set<std::string> read_closed_class_file(const std::string& path);

/// Glob-style rewrite: `*` in the pattern captures a run of characters
/// (greedy, leftmost star longest), `$k` in the replacement inserts the
/// k-th capture. Non-matching tags pass through unchanged.
class ReductionRule {
 public:
  ReductionRule(std::string pattern, std::string replacement);

  const std::string& pattern() const { return pattern_; }
  const std::string& replacement() const { return replacement_; }
  std::size_t arity() const { return literals_.size() - 1; }

  /// Rewritten tag, or nullopt when the pattern does not match.
  std::optional<std::string> try_apply(std::string_view tag) const;

 private:
  struct Piece {
    bool capture = false;
    std::size_t index = 0;  // capture index when `capture`
    std::string text;
  };

  bool match(std::string_view tag, std::size_t lit, std::vector<std::string_view>& caps) const;

  std::string pattern_;
  std::string replacement_;
  std::vector<std::string> literals_;  // pattern split on '*'
  std::vector<Piece> template_;
};

struct Feature {
  char letter = '?';  // uppercase
  std::string description;
  std::vector<ReductionRule> rules;

  /// First matching rule wins; tags no rule matches are returned as is.
  std::string apply(const std::string& tag) const;
};

/// Features in declaration order.
class FeatureRules {
 public:
  void add(Feature feature);

  const std::vector<Feature>& features() const { return features_; }
  const Feature* find(char letter) const;
  std::string letters() const;
  std::size_t size() const { return features_.size(); }

 private:
  std::vector<Feature> features_;
};

/// Rule file: `FEATURE <letter> [description]` opens a group,
/// `RULE <pattern> => <replacement>` adds to it, `#` comments.
FeatureRules parse_scheme_file(std::istream& in);
FeatureRules parse_scheme_path(const std::string& path);

/// A rule set plus a code such as `GnDc`: lowercase letters name the
/// features whose distinctions are removed.
class ReductionScheme {
 public:
  ReductionScheme(FeatureRules rules, std::string code);

  const std::string& code() const { return code_; }
  const FeatureRules& rules() const { return rules_; }
  bool is_identity() const;

  /// Composition of the active features' rule lists, in code order.
  std::string reduce_tag(const std::string& tag) const;

  /// Closed flags after reduction: images of closed tags that no open tag
  /// also maps onto.
  std::set<std::string> reduce_closed(const std::set<std::string>& tags,
                                      const std::set<std::string>& closed) const;

 private:
  FeatureRules rules_;
  std::string code_;
  std::vector<std::size_t> active_;  // indices into rules_.features()
};

TaggedCorpus apply_scheme(const TaggedCorpus& corpus, const ReductionScheme& scheme);

/// Every case combination of `letters` (given uppercase), ordered by the number
/// of lowercase letters, ties broken positionwise with uppercase first.
std::vector<std::string> scheme_code_enumerate(std::string_view letters);

}  // namespace tagbench
