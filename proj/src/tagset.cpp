#include "tagbench/tagset.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>

#include "tagbench/error.hpp"
#include "tagbench/util.hpp"

namespace tagbench {

TagsetSpec::TagsetSpec(std::set<std::string> tags, std::set<std::string> closed)
    : tags_(std::move(tags)), closed_(std::move(closed)) {
  for (const auto& c : closed_)
    if (!tags_.count(c)) throw InvariantError("closed-class tag '" + c + "' is not in the tagset");
}

std::set<std::string> TagsetSpec::open() const {
  std::set<std::string> out;
  std::set_difference(tags_.begin(), tags_.end(), closed_.begin(), closed_.end(),
                      std::inserter(out, out.end()));
  return out;
}

TagsetSpec tagset_of(const TaggedCorpus& corpus, const std::set<std::string>& closed_decl,
                     std::vector<std::string>* warnings) {
  auto tags = corpus.tags();
  std::set<std::string> closed;
  for (const auto& c : closed_decl) {
    if (tags.count(c))
      closed.insert(c);
    else if (warnings)
      warnings->push_back("closed-class tag '" + c + "' does not occur in the corpus");
  }
  return TagsetSpec(std::move(tags), std::move(closed));
}

std::set<std::string> read_closed_class(std::istream& in) {
  std::set<std::string> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (contains_space(line))
      throw DataError("closed-class line " + std::to_string(line_no) + ": expected a single tag");
    out.emplace(line);
  }
  return out;
}

std::set<std::string> read_closed_class_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open closed-class file: " + path);
  return read_closed_class(in);
}

ReductionRule::ReductionRule(std::string pattern, std::string replacement)
    : pattern_(std::move(pattern)), replacement_(std::move(replacement)) {
  if (pattern_.empty()) throw DataError("empty rule pattern");
  for (auto part : split(pattern_, '*')) literals_.emplace_back(part);

  const auto& r = replacement_;
  std::string text;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == '$' && i + 1 < r.size() && std::isdigit(static_cast<unsigned char>(r[i + 1]))) {
      std::size_t j = i + 1;
      std::size_t k = 0;
      while (j < r.size() && std::isdigit(static_cast<unsigned char>(r[j]))) k = k * 10 + static_cast<std::size_t>(r[j++] - '0');
      if (k == 0 || k > arity())
        throw DataError("rule '" + pattern_ + " => " + replacement_ + "' references $" + std::to_string(k) +
                        " but the pattern has " + std::to_string(arity()) + " capture(s)");
      if (!text.empty()) template_.push_back({false, 0, std::move(text)});
      text.clear();
      template_.push_back({true, k - 1, {}});
      i = j - 1;
    } else {
      text.push_back(r[i]);
    }
  }
  if (!text.empty()) template_.push_back({false, 0, std::move(text)});
}

bool ReductionRule::match(std::string_view rest, std::size_t lit, std::vector<std::string_view>& caps) const {
  // `rest` starts just after literal lit-1; a capture precedes literal lit.
  const auto& literal = literals_[lit];
  if (lit + 1 == literals_.size()) {
    if (rest.size() < literal.size() || !rest.ends_with(literal)) return false;
    caps.push_back(rest.substr(0, rest.size() - literal.size()));
    return true;
  }
  for (std::size_t len = rest.size() + 1; len-- > 0;) {
    if (!rest.substr(len).starts_with(literal)) continue;
    caps.push_back(rest.substr(0, len));
    if (match(rest.substr(len + literal.size()), lit + 1, caps)) return true;
    caps.pop_back();
  }
  return false;
}

std::optional<std::string> ReductionRule::try_apply(std::string_view tag) const {
  if (literals_.size() == 1) {
    if (tag != literals_[0]) return std::nullopt;
  } else {
    if (!tag.starts_with(literals_[0])) return std::nullopt;
  }
  std::vector<std::string_view> caps;
  if (literals_.size() > 1 && !match(tag.substr(literals_[0].size()), 1, caps)) return std::nullopt;
  std::string out;
  for (const auto& piece : template_) out += piece.capture ? std::string(caps[piece.index]) : piece.text;
  return out;
}

std::string Feature::apply(const std::string& tag) const {
  for (const auto& rule : rules)
    if (auto out = rule.try_apply(tag)) return *out;
  return tag;
}

void FeatureRules::add(Feature feature) {
  if (!std::isalpha(static_cast<unsigned char>(feature.letter)))
    throw DataError(std::string("feature letter must be alphabetic, got '") + feature.letter + "'");
  feature.letter = static_cast<char>(std::toupper(static_cast<unsigned char>(feature.letter)));
  if (find(feature.letter)) throw DataError(std::string("duplicate feature letter ") + feature.letter);
  features_.push_back(std::move(feature));
}

const Feature* FeatureRules::find(char letter) const {
  const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(letter)));
  for (const auto& f : features_)
    if (f.letter == up) return &f;
  return nullptr;
}

std::string FeatureRules::letters() const {
  std::string out;
  for (const auto& f : features_) out.push_back(f.letter);
  return out;
}

FeatureRules parse_scheme_file(std::istream& in) {
  FeatureRules out;
  std::optional<Feature> open;
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) -> DataError {
    return DataError("rule file line " + std::to_string(line_no) + ": " + why);
  };
  auto close = [&] {
    if (open) out.add(std::move(*open));
    open.reset();
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto sp = line.find_first_of(" \t");
    const auto keyword = line.substr(0, sp);
    const auto rest = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));

    if (keyword == "FEATURE") {
      const auto sp2 = rest.find_first_of(" \t");
      const auto letter = rest.substr(0, sp2);
      if (letter.size() != 1 || !std::isalpha(static_cast<unsigned char>(letter[0])))
        throw fail("FEATURE needs a single-letter name");
      close();
      try {
        // catch duplicates at the line that introduces them
        FeatureRules probe = out;
        probe.add(Feature{letter[0], {}, {}});
      } catch (const DataError& e) {
        throw fail(e.what());
      }
      open = Feature{letter[0], std::string(sp2 == std::string_view::npos ? std::string_view{} : trim(rest.substr(sp2))),
                     {}};
    } else if (keyword == "RULE") {
      if (!open) throw fail("RULE outside of a FEATURE group");
      const auto arrow = rest.find("=>");
      if (arrow == std::string_view::npos) throw fail("RULE needs '<pattern> => <replacement>'");
      const auto pattern = trim(rest.substr(0, arrow));
      const auto replacement = trim(rest.substr(arrow + 2));
      if (pattern.empty() || replacement.empty() || contains_space(pattern) || contains_space(replacement))
        throw fail("RULE pattern and replacement must be single nonempty tokens");
      try {
        open->rules.emplace_back(std::string(pattern), std::string(replacement));
      } catch (const DataError& e) {
        throw fail(e.what());
      }
    } else {
      throw fail("unknown directive '" + std::string(keyword) + "'");
    }
  }
  close();
  return out;
}

FeatureRules parse_scheme_path(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open rule file: " + path);
  return parse_scheme_file(in);
}

ReductionScheme::ReductionScheme(FeatureRules rules, std::string code)
    : rules_(std::move(rules)), code_(std::move(code)) {
  const auto letters = rules_.letters();
  if (code_.size() != letters.size())
    throw UsageError("scheme code '" + code_ + "' does not match features " + letters);
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const char c = code_[i];
    if (std::toupper(static_cast<unsigned char>(c)) != letters[i])
      throw UsageError("scheme code '" + code_ + "' does not match features " + letters);
    if (std::islower(static_cast<unsigned char>(c))) active_.push_back(i);
  }
}

bool ReductionScheme::is_identity() const { return active_.empty(); }

std::string ReductionScheme::reduce_tag(const std::string& tag) const {
  std::string out = tag;
  for (auto i : active_) out = rules_.features()[i].apply(out);
  return out;
}

std::set<std::string> ReductionScheme::reduce_closed(const std::set<std::string>& tags,
                                                     const std::set<std::string>& closed) const {
  std::set<std::string> closed_images;
  std::set<std::string> open_images;
  for (const auto& t : tags) (closed.count(t) ? closed_images : open_images).insert(reduce_tag(t));
  std::set<std::string> out;
  std::set_difference(closed_images.begin(), closed_images.end(), open_images.begin(), open_images.end(),
                      std::inserter(out, out.end()));
  return out;
}

TaggedCorpus apply_scheme(const TaggedCorpus& corpus, const ReductionScheme& scheme) {
  if (scheme.is_identity()) return corpus;
  std::map<std::string, std::string> memo;
  std::vector<Sentence> out;
  out.reserve(corpus.sentence_count());
  for (const auto& s : corpus.sentences()) {
    Sentence ns = s;
    for (auto& t : ns.tokens) {
      if (!t.tag) continue;
      auto it = memo.find(*t.tag);
      if (it == memo.end()) it = memo.emplace(*t.tag, scheme.reduce_tag(*t.tag)).first;
      t.tag = it->second;
    }
    out.push_back(std::move(ns));
  }
  return TaggedCorpus(std::move(out));
}

std::vector<std::string> scheme_code_enumerate(std::string_view letters) {
  const std::size_t k = letters.size();
  if (k < 1 || k > 8) throw UsageError("scheme codes need between 1 and 8 feature letters");
  std::string upper;
  for (char c : letters) {
    if (!std::isalpha(static_cast<unsigned char>(c))) throw UsageError("feature letters must be alphabetic");
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper.find(u) != std::string::npos) throw UsageError(std::string("duplicate feature letter ") + u);
    upper.push_back(u);
  }
  // bit (k-1-i) set <=> position i lowercase, so numeric order is positionwise order
  std::vector<unsigned> masks(std::size_t{1} << k);
  for (unsigned m = 0; m < masks.size(); ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<std::string> codes;
  codes.reserve(masks.size());
  for (auto m : masks) {
    std::string code = upper;
    for (std::size_t i = 0; i < k; ++i)
      if (m & (1U << (k - 1 - i))) code[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(code[i])));
    codes.push_back(std::move(code));
  }
  return codes;
}

}  // namespace tagbench
