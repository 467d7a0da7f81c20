#include "tagbench/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tagbench/error.hpp"
#include "tagbench/util.hpp"

namespace tagbench {

TaggedCorpus::TaggedCorpus(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {
  for (const auto& s : sentences_) {
    if (s.tokens.empty()) throw InvariantError("empty sentence in corpus");
    token_count_ += s.tokens.size();
  }
}

bool TaggedCorpus::fully_tagged() const {
  for (const auto& s : sentences_)
    for (const auto& t : s.tokens)
      if (!t.tag) return false;
  return true;
}

std::set<std::string> TaggedCorpus::tags() const {
  std::set<std::string> out;
  for (const auto& s : sentences_)
    for (const auto& t : s.tokens)
      if (t.tag) out.insert(*t.tag);
  return out;
}

namespace {

// Returns an empty string when the line is a valid token, else the reason.
std::string parse_token_line(std::string_view line, bool require_tags, Token& token) {
  const auto fields = split(line, '\t');
  if (fields.size() > 2) return "expected at most two tab-separated fields";
  const auto surface = fields[0];
  if (surface.empty()) return "empty surface form";
  if (contains_space(surface)) return "whitespace inside surface form";
  if (fields.size() == 1) {
    if (require_tags) return "missing tag field";
    token.surface = std::string(surface);
    token.tag.reset();
    return {};
  }
  const auto tag = fields[1];
  if (tag.empty()) return "empty tag field";
  if (contains_space(tag)) return "whitespace inside tag";
  token.surface = std::string(surface);
  token.tag = std::string(tag);
  return {};
}

}  // namespace

ParsedCorpus parse_corpus(std::istream& in, Strictness strictness, bool require_tags) {
  ParsedCorpus result;
  std::vector<Sentence> sentences;
  Sentence current;
  std::size_t content_lines = 0;
  std::size_t line_no = 0;
  std::string raw;

  auto flush = [&] {
    if (!current.tokens.empty()) sentences.push_back(std::move(current));
    current = Sentence{};
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = strip_cr(raw);
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    ++content_lines;
    Token token;
    const auto reason = parse_token_line(line, require_tags, token);
    if (!reason.empty()) {
      if (strictness == Strictness::strict)
        throw DataError("line " + std::to_string(line_no) + ": " + reason);
      result.skipped.push_back({line_no, reason});
      continue;
    }
    current.tokens.push_back(std::move(token));
  }
  flush();
  if (content_lines == 0) throw DataError("empty input");
  result.corpus = TaggedCorpus(std::move(sentences));
  return result;
}

ParsedCorpus parse_corpus_file(const std::string& path, Strictness strictness, bool require_tags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus: " + path);
  return parse_corpus(in, strictness, require_tags);
}

void write_corpus(std::ostream& out, const TaggedCorpus& corpus) {
  for (const auto& s : corpus.sentences()) {
    for (const auto& t : s.tokens) {
      out << t.surface;
      if (t.tag) out << '\t' << *t.tag;
      out << '\n';
    }
    out << '\n';
  }
}

std::string serialize_corpus(const TaggedCorpus& corpus) {
  std::ostringstream ss;
  write_corpus(ss, corpus);
  return ss.str();
}

std::size_t held_out_train_count(std::size_t n, double train_fraction) {
  // The epsilon absorbs representation error, so 0.95 * 100 gives 95, not 96.
  const double exact = train_fraction * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

CorpusSplit split_corpus(const TaggedCorpus& corpus, double train_fraction, SplitMode mode,
                         std::size_t sample_size) {
  if (corpus.empty()) throw DataError("cannot split an empty corpus");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    throw UsageError("train fraction must lie in (0, 1]");
  const auto& all = corpus.sentences();
  const std::size_t n = all.size();

  if (mode == SplitMode::held_out) {
    const std::size_t n_train = held_out_train_count(n, train_fraction);
    if (n_train >= n)
      throw DataError("train fraction " + std::to_string(train_fraction) + " leaves no test sentences out of " +
                      std::to_string(n));
    std::vector<Sentence> train(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<Sentence> test(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
    return {TaggedCorpus(std::move(train)), TaggedCorpus(std::move(test))};
  }

  // in_sample: smallest evenly spaced selection reaching sample_size tokens,
  // starting the search from the count an average sentence length predicts.
  const std::size_t total = corpus.token_count();
  std::vector<std::size_t> picked;
  if (sample_size >= total) {
    for (std::size_t i = 0; i < n; ++i) picked.push_back(i);
  } else {
    const auto want = std::max<std::size_t>(sample_size, 1);
    std::size_t k = std::max<std::size_t>(1, (want * n) / total);
    for (; k <= n; ++k) {
      picked.clear();
      std::size_t tokens = 0;
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t idx = (i * n) / k;
        picked.push_back(idx);
        tokens += all[idx].size();
      }
      if (tokens >= want) break;
    }
  }
  std::vector<Sentence> test;
  test.reserve(picked.size());
  for (auto idx : picked) test.push_back(all[idx]);
  return {corpus, TaggedCorpus(std::move(test))};
}

void Lexicon::add(const std::string& surface, const std::string& tag, std::uint64_t count) {
  if (count == 0) return;
  entries_[surface][tag] += count;
}

const Lexicon::TagCounts* Lexicon::find(const std::string& surface) const {
  const auto it = entries_.find(surface);
  return it == entries_.end() ? nullptr : &it->second;
}

std::uint64_t Lexicon::count(const std::string& surface, const std::string& tag) const {
  const auto* tags = find(surface);
  if (!tags) return 0;
  const auto it = tags->find(tag);
  return it == tags->end() ? 0 : it->second;
}

std::uint64_t Lexicon::total_mass() const {
  std::uint64_t total = 0;
  for (const auto& [_, tags] : entries_)
    for (const auto& [__, c] : tags) total += c;
  return total;
}

Lexicon build_lexicon(const TaggedCorpus& corpus) {
  if (corpus.token_count() == 0) throw DataError("cannot build a lexicon from an empty corpus");
  Lexicon lex;
  for (const auto& s : corpus.sentences()) {
    for (const auto& t : s.tokens) {
      if (!t.tag) throw DataError("untagged token '" + t.surface + "' in training data");
      lex.add(t.surface, *t.tag);
    }
  }
  return lex;
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
  for (const auto& [surface, tags] : lexicon.entries())
    for (const auto& [tag, count] : tags) out << surface << '\t' << tag << '\t' << count << '\n';
}

Lexicon read_lexicon(std::istream& in) {
  Lexicon lex;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = strip_cr(raw);
    if (trim(line).empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 3 || f[0].empty() || f[1].empty())
      throw DataError("lexicon line " + std::to_string(line_no) + ": expected surface, tag, count");
    std::uint64_t count = 0;
    try {
      count = std::stoull(std::string(f[2]));
    } catch (const std::exception&) {
      throw DataError("lexicon line " + std::to_string(line_no) + ": bad count");
    }
    if (count == 0) throw DataError("lexicon line " + std::to_string(line_no) + ": zero count");
    lex.add(std::string(f[0]), std::string(f[1]), count);
  }
  return lex;
}

}  // namespace tagbench
