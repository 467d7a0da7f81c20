#include "tagbench/unknown.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "tagbench/error.hpp"
#include "tagbench/util.hpp"

namespace tagbench {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::string word_shape(std::string_view word) {
  std::string out;
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    if ((u & 0xC0) == 0x80) continue;  // UTF-8 continuation byte
    char cls;
    if (is_upper(c))
      cls = 'X';
    else if (is_lower(c) || u >= 0x80)
      cls = 'x';
    else if (is_digit(c))
      cls = 'd';
    else
      cls = c;
    if (out.empty() || out.back() != cls) out.push_back(cls);
  }
  return out;
}

bool GuesserRule::matches(std::string_view word) const {
  switch (feature) {
    case SurfaceFeature::suffix:
      return word.ends_with(argument);
    case SurfaceFeature::prefix:
      return word.starts_with(argument);
    case SurfaceFeature::has_capital:
      return std::any_of(word.begin(), word.end(), is_upper);
    case SurfaceFeature::all_capitals:
      return std::any_of(word.begin(), word.end(), is_upper) && std::none_of(word.begin(), word.end(), is_lower);
    case SurfaceFeature::has_digit:
      return std::any_of(word.begin(), word.end(), is_digit);
    case SurfaceFeature::has_hyphen:
      return word.find('-') != std::string_view::npos;
    case SurfaceFeature::word_shape:
      return word_shape(word) == argument;
  }
  return false;
}

std::string GuesserRule::feature_spec() const {
  switch (feature) {
    case SurfaceFeature::suffix: return "suffix:" + argument;
    case SurfaceFeature::prefix: return "prefix:" + argument;
    case SurfaceFeature::has_capital: return "cap";
    case SurfaceFeature::all_capitals: return "allcap";
    case SurfaceFeature::has_digit: return "digit";
    case SurfaceFeature::has_hyphen: return "hyphen";
    case SurfaceFeature::word_shape: return "shape:" + argument;
  }
  return {};
}

Guesser::Guesser(std::vector<GuesserRule> rules) : rules_(std::move(rules)) {
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const GuesserRule& a, const GuesserRule& b) { return a.priority < b.priority; });
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].allowed_tags.empty())
      throw DataError("guesser rule " + rules_[i].feature_spec() + " allows no tags");
    if (i > 0 && rules_[i].priority == rules_[i - 1].priority)
      throw DataError("duplicate guesser priority " + std::to_string(rules_[i].priority));
  }
}

void Guesser::validate(const TagsetSpec& tagset) const {
  for (const auto& r : rules_)
    for (const auto& t : r.allowed_tags)
      if (!tagset.contains(t) || tagset.is_closed(t))
        throw DataError("guesser rule " + r.feature_spec() + " allows '" + t + "', which is not an open-class tag");
}

Guesser Guesser::relabeled(const std::function<std::string(const std::string&)>& map) const {
  auto rules = rules_;
  for (auto& r : rules) {
    std::set<std::string> mapped;
    for (const auto& t : r.allowed_tags) mapped.insert(map(t));
    r.allowed_tags = std::move(mapped);
  }
  return Guesser(std::move(rules));
}

const GuesserRule* Guesser::match(std::string_view word) const {
  for (const auto& r : rules_)
    if (r.matches(word)) return &r;
  return nullptr;
}

Guesser parse_guesser(std::istream& in) {
  std::vector<GuesserRule> rules;
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    return DataError("guesser line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls{std::string(line)};
    std::string keyword, priority, spec, arrow, tags, extra;
    ls >> keyword >> priority >> spec >> arrow >> tags;
    if (keyword != "GUESS" || arrow != "->" || tags.empty() || (ls >> extra))
      throw fail("expected 'GUESS <priority> <feature> -> tag[,tag...]'");

    GuesserRule rule;
    try {
      std::size_t used = 0;
      rule.priority = std::stoi(priority, &used);
      if (used != priority.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw fail("bad priority '" + priority + "'");
    }
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string{} : spec.substr(colon + 1);
    const bool needs_arg = name == "suffix" || name == "prefix" || name == "shape";
    if (needs_arg == arg.empty() || (!needs_arg && colon != std::string::npos))
      throw fail("bad feature spec '" + spec + "'");
    if (name == "suffix") rule.feature = SurfaceFeature::suffix;
    else if (name == "prefix") rule.feature = SurfaceFeature::prefix;
    else if (name == "cap") rule.feature = SurfaceFeature::has_capital;
    else if (name == "allcap") rule.feature = SurfaceFeature::all_capitals;
    else if (name == "digit") rule.feature = SurfaceFeature::has_digit;
    else if (name == "hyphen") rule.feature = SurfaceFeature::has_hyphen;
    else if (name == "shape") rule.feature = SurfaceFeature::word_shape;
    else throw fail("unknown feature '" + name + "'");
    rule.argument = arg;

    for (auto t : split(tags, ',')) {
      if (t.empty()) throw fail("empty tag in list");
      rule.allowed_tags.emplace(t);
    }
    rules.push_back(std::move(rule));
  }
  try {
    return Guesser(std::move(rules));
  } catch (const DataError& e) {
    throw DataError(std::string("guesser: ") + e.what());
  }
}

Guesser parse_guesser_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open guesser file: " + path);
  return parse_guesser(in);
}

std::set<std::string> guess_tags(std::string_view word, const Guesser& guesser, const TagsetSpec& tagset) {
  auto open = tagset.open();
  if (const auto* rule = guesser.match(word)) {
    std::set<std::string> narrowed;
    for (const auto& t : rule->allowed_tags)
      if (open.count(t)) narrowed.insert(t);
    if (!narrowed.empty()) return narrowed;
  }
  return open;
}

UnknownAnalysis analyze_unknown_words(const Lexicon& full_lexicon, const Lexicon& train_lexicon,
                                      const TaggedCorpus& test) {
  std::set<std::string> unknown;
  for (const auto& s : test.sentences())
    for (const auto& t : s.tokens)
      if (!train_lexicon.contains(t.surface)) unknown.insert(t.surface);

  UnknownAnalysis a;
  a.total_unknown = unknown.size();
  for (const auto& w : unknown) {
    const auto* tags = full_lexicon.find(w);
    if (!tags) continue;
    ++a.found_in_full_lexicon;
    (tags->size() == 1 ? a.single_tag : a.multi_tag) += 1;
    ++a.tag_count_histogram[tags->size()];
  }
  return a;
}

std::string render_unknown_analysis(const UnknownAnalysis& a) {
  std::ostringstream out;
  const auto pct = [&](std::uint64_t n) { return format_percent(Ratio{n, a.total_unknown}); };
  out << "# unknown words are counted by type (distinct surface forms), not by token\n";
  out << "# percentages are relative to unknown_types\n";
  out << "unknown_types\t" << a.total_unknown << '\n';
  out << "found_in_full_lexicon\t" << a.found_in_full_lexicon << '\t' << pct(a.found_in_full_lexicon) << '\n';
  out << "single_tag\t" << a.single_tag << '\t' << pct(a.single_tag) << '\n';
  out << "multi_tag\t" << a.multi_tag << '\t' << pct(a.multi_tag) << '\n';
  for (const auto& [n_tags, n_words] : a.tag_count_histogram)
    out << "tags=" << n_tags << '\t' << n_words << '\t' << pct(n_words) << '\n';
  return out.str();
}

}  // namespace tagbench
