#include "tagbench/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "tagbench/error.hpp"
#include "tagbench/util.hpp"

namespace tagbench {

namespace {

// Portable draws from the raw engine output; std distributions are
// implementation-defined and would tie corpora to one standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

class Categorical {
 public:
  Categorical() = default;
  explicit Categorical(const std::vector<double>& weights) : cumulative_(weights.size()) {
    std::partial_sum(weights.begin(), weights.end(), cumulative_.begin());
  }
  bool empty() const { return cumulative_.empty() || cumulative_.back() <= 0.0; }
  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

std::vector<double> normalized(std::vector<double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

std::vector<double> zipf(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / static_cast<double>(r + 1);
  return normalized(std::move(w));
}

std::string make_stem(Rng& rng) {
  static constexpr std::string_view kOnsets = "bcdfghjklmnprstvwz";
  static constexpr std::string_view kVowels = "aeiou";
  std::string out;
  const std::size_t syllables = 2 + rng.below(3);
  for (std::size_t i = 0; i < syllables; ++i) {
    out.push_back(kOnsets[rng.below(kOnsets.size())]);
    out.push_back(kVowels[rng.below(kVowels.size())]);
  }
  return out;
}

}  // namespace

std::vector<FeatureAxis> parse_axes(std::string_view text) {
  std::vector<FeatureAxis> axes;
  if (trim(text).empty()) return axes;
  for (auto part : split(text, ',')) {
    part = trim(part);
    const auto colon = part.find(':');
    if (colon != 1 || !std::isalpha(static_cast<unsigned char>(part[0])))
      throw UsageError("axis '" + std::string(part) + "' should look like G:2");
    FeatureAxis a;
    a.letter = static_cast<char>(std::toupper(static_cast<unsigned char>(part[0])));
    try {
      a.values = static_cast<std::size_t>(std::stoul(std::string(part.substr(2))));
    } catch (const std::exception&) {
      throw UsageError("axis '" + std::string(part) + "' has a bad value count");
    }
    axes.push_back(a);
  }
  return axes;
}

std::string synthetic_tag(std::size_t base, const std::vector<FeatureAxis>& axes,
                          const std::vector<std::size_t>& values) {
  std::string out = "B" + std::to_string(base);
  for (std::size_t i = 0; i < axes.size(); ++i) out += "-" + std::string(1, axes[i].letter) + std::to_string(values[i]);
  return out;
}

std::string synthetic_suffix(std::size_t index) {
  return {static_cast<char>('a' + (index / 26) % 26), static_cast<char>('a' + index % 26)};
}

GenerativeModel::GenerativeModel(std::vector<std::string> tags, std::vector<double> start,
                                 std::vector<double> transitions,
                                 std::map<std::string, std::vector<std::pair<std::size_t, double>>> emissions)
    : tags_(std::move(tags)), start_(std::move(start)), trans_(std::move(transitions)), emissions_(std::move(emissions)) {
  if (start_.size() != tags_.size() || trans_.size() != tags_.size() * tags_.size())
    throw InvariantError("generative model has inconsistent dimensions");
}

const std::vector<std::pair<std::size_t, double>>& GenerativeModel::emissions(const std::string& word) const {
  const auto it = emissions_.find(word);
  if (it == emissions_.end()) throw DataError("word '" + word + "' is outside the generating vocabulary");
  return it->second;
}

std::vector<std::string> GenerativeModel::decode(const Sentence& sentence) const {
  std::vector<std::vector<std::size_t>> lattice;
  std::vector<std::map<std::size_t, double>> emit(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    std::vector<std::size_t> cands;
    for (const auto& [t, p] : emissions(sentence.tokens[i].surface)) {
      cands.push_back(t);
      emit[i][t] = std::log(p);
    }
    lattice.push_back(std::move(cands));
  }
  struct Scorer {
    const GenerativeModel& m;
    const std::vector<std::map<std::size_t, double>>& emit;
    double log_start(std::size_t c) const { return std::log(m.start(c)); }
    double log_trans(std::size_t p, std::size_t c) const { return std::log(m.transition(p, c)); }
    double log_end(std::size_t) const { return 0.0; }
    double log_emit(std::size_t pos, std::size_t c) const { return emit[pos].at(c); }
  };
  const auto d = decode_lattice(lattice, Scorer{*this, emit});
  std::vector<std::string> out;
  for (auto s : d.path) out.push_back(tags_[s]);
  return out;
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.base_tags == 0) throw UsageError("need at least one base tag");
  if (!(spec.ambiguity >= 0.0 && spec.ambiguity < 1.0)) throw UsageError("ambiguity target must lie in [0, 1)");
  if (spec.tokens == 0) throw UsageError("token count must be positive");
  if (spec.min_sentence_length == 0 || spec.min_sentence_length > spec.max_sentence_length)
    throw UsageError("sentence lengths need 1 <= min <= max");
  std::set<char> letters;
  for (const auto& a : spec.axes) {
    if (a.values < 2) throw UsageError(std::string("axis ") + a.letter + " needs at least two values");
    if (a.letter == 'B') throw UsageError("axis letter B is reserved for base tags");
    if (!letters.insert(a.letter).second) throw UsageError(std::string("duplicate axis letter ") + a.letter);
  }

  // realized tags: base x every axis value combination
  std::vector<std::string> tags;
  for (std::size_t b = 0; b < spec.base_tags; ++b) {
    std::vector<std::size_t> values(spec.axes.size(), 0);
    while (true) {
      tags.push_back(synthetic_tag(b, spec.axes, values));
      std::size_t i = values.size();
      while (i > 0 && ++values[i - 1] == spec.axes[i - 1].values) values[--i] = 0;
      if (i == 0) break;
    }
  }
  std::sort(tags.begin(), tags.end());
  const std::size_t n_tags = tags.size();
  if (spec.suffix_marks_tag && n_tags > 400) throw UsageError("suffix marking supports at most 400 tags");

  const bool ambiguous = spec.ambiguity > 0.0;
  const std::size_t n_amb_words = ambiguous ? (3 * n_tags + 1) / 2 : 0;
  if (n_tags < 2 && ambiguous) throw UsageError("ambiguity needs at least two tags");
  if (spec.vocabulary < n_amb_words + n_tags)
    throw UsageError("vocabulary of " + std::to_string(spec.vocabulary) + " is too small: need at least " +
                     std::to_string(n_amb_words + n_tags) + " words for " + std::to_string(n_tags) +
                     " tags at this ambiguity");

  Rng rng(spec.seed);

  std::vector<double> start(n_tags);
  for (auto& w : start) w = std::pow(rng.uniform(), 2.0) + 1e-3;
  start = normalized(std::move(start));
  std::vector<double> trans(n_tags * n_tags);
  for (std::size_t i = 0; i < n_tags; ++i) {
    std::vector<double> row(n_tags);
    for (auto& w : row) w = std::pow(rng.uniform(), 3.0) + 1e-3;
    row = normalized(std::move(row));
    std::copy(row.begin(), row.end(), trans.begin() + static_cast<std::ptrdiff_t>(i * n_tags));
  }

  // Ambiguous words carry two tags each; the first n_tags of them chain a
  // permutation so every tag has at least two ambiguous words.
  std::vector<std::size_t> perm(n_tags);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n_tags; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  std::vector<std::vector<std::size_t>> amb_pool(n_tags);  // tag -> ambiguous word ids
  std::vector<std::vector<std::size_t>> unamb_pool(n_tags);
  std::vector<std::vector<std::size_t>> word_tags(spec.vocabulary);
  for (std::size_t w = 0; w < n_amb_words; ++w) {
    std::size_t a, b;
    if (w < n_tags) {
      a = perm[w];
      b = perm[(w + 1) % n_tags];
    } else {
      a = rng.below(n_tags);
      b = (a + 1 + rng.below(n_tags - 1)) % n_tags;
    }
    word_tags[w] = {std::min(a, b), std::max(a, b)};
    amb_pool[a].push_back(w);
    amb_pool[b].push_back(w);
  }
  for (std::size_t w = n_amb_words; w < spec.vocabulary; ++w) {
    const std::size_t t = (w - n_amb_words) % n_tags;
    word_tags[w] = {t};
    unamb_pool[t].push_back(w);
  }

  std::vector<std::string> surfaces(spec.vocabulary);
  std::set<std::string> used;
  for (std::size_t w = 0; w < spec.vocabulary; ++w) {
    std::string s;
    do {
      s = make_stem(rng);
      if (spec.suffix_marks_tag) s += word_tags[w].size() > 1 ? std::string("qx") : synthetic_suffix(word_tags[w][0]);
    } while (!used.insert(s).second);
    surfaces[w] = std::move(s);
  }

  // P(w | t) = a * zipf over the ambiguous pool + (1 - a) * zipf over the unambiguous pool
  const double a = spec.ambiguity;
  std::vector<std::vector<double>> emit_w(n_tags);
  std::vector<std::vector<std::size_t>> emit_ids(n_tags);
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> emissions;
  for (std::size_t t = 0; t < n_tags; ++t) {
    const auto za = zipf(amb_pool[t].size());
    const auto zu = zipf(unamb_pool[t].size());
    for (std::size_t r = 0; r < amb_pool[t].size(); ++r) {
      emit_ids[t].push_back(amb_pool[t][r]);
      emit_w[t].push_back(a * za[r]);
    }
    for (std::size_t r = 0; r < unamb_pool[t].size(); ++r) {
      emit_ids[t].push_back(unamb_pool[t][r]);
      emit_w[t].push_back((1.0 - a) * zu[r]);
    }
    for (std::size_t k = 0; k < emit_ids[t].size(); ++k)
      emissions[surfaces[emit_ids[t][k]]].emplace_back(t, emit_w[t][k]);
  }
  for (auto& [_, list] : emissions) std::sort(list.begin(), list.end());

  const Categorical start_draw(start);
  std::vector<Categorical> trans_draw;
  std::vector<Categorical> emit_draw;
  for (std::size_t t = 0; t < n_tags; ++t) {
    trans_draw.emplace_back(std::vector<double>(trans.begin() + static_cast<std::ptrdiff_t>(t * n_tags),
                                                trans.begin() + static_cast<std::ptrdiff_t>((t + 1) * n_tags)));
    emit_draw.emplace_back(emit_w[t]);
  }

  std::vector<Sentence> sentences;
  std::size_t produced = 0;
  const std::size_t span = spec.max_sentence_length - spec.min_sentence_length + 1;
  while (produced < spec.tokens) {
    std::size_t len = spec.min_sentence_length + rng.below(span);
    len = std::min(len, spec.tokens - produced);
    Sentence s;
    std::size_t tag = start_draw.draw(rng);
    for (std::size_t i = 0; i < len; ++i) {
      if (i > 0) tag = trans_draw[tag].draw(rng);
      const std::size_t word = emit_ids[tag][emit_draw[tag].draw(rng)];
      s.tokens.push_back({surfaces[word], tags[tag]});
    }
    produced += len;
    sentences.push_back(std::move(s));
  }

  std::ostringstream rules;
  rules << "# Reduction rules for synthetic tags B<k>[-<axis><value>...]\n";
  for (const auto& ax : spec.axes) {
    rules << "FEATURE " << ax.letter << " synthetic axis with " << ax.values << " values\n";
    for (std::size_t v = 0; v < ax.values; ++v) {
      const std::string seg = "-" + std::string(1, ax.letter) + std::to_string(v);
      rules << "RULE *" << seg << "-* => $1-$2\n";
      rules << "RULE *" << seg << " => $1\n";
    }
  }

  SyntheticCorpus out;
  out.corpus = TaggedCorpus(std::move(sentences));
  out.truth = GenerativeModel(std::move(tags), std::move(start), std::move(trans), std::move(emissions));
  out.rules_text = rules.str();
  return out;
}

void write_truth(std::ostream& out, const GenerativeModel& m) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  const auto& tags = m.tags();
  out << "tagbench-truth 1\n";
  out << "TAGS " << tags.size() << '\n';
  for (const auto& t : tags) out << t << '\n';
  out << "START\n";
  for (std::size_t i = 0; i < tags.size(); ++i) out << tags[i] << '\t' << num(m.start(i)) << '\n';
  out << "TRANS\n";
  for (std::size_t i = 0; i < tags.size(); ++i)
    for (std::size_t j = 0; j < tags.size(); ++j)
      out << tags[i] << '\t' << tags[j] << '\t' << num(m.transition(i, j)) << '\n';
  std::size_t n_emit = 0;
  for (const auto& [_, list] : m.emission_table()) n_emit += list.size();
  out << "EMIT " << n_emit << '\n';
  for (const auto& [word, list] : m.emission_table())
    for (const auto& [t, p] : list) out << word << '\t' << tags[t] << '\t' << num(p) << '\n';
  out << "END\n";
}

GenerativeModel read_truth(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::string {
    if (!std::getline(in, line)) throw DataError("truth file: unexpected end of file");
    ++line_no;
    return std::string(strip_cr(line));
  };
  auto fail = [&](const std::string& why) { return DataError("truth line " + std::to_string(line_no) + ": " + why); };
  auto parse_double = [&](std::string_view s) {
    try {
      return std::stod(std::string(s));
    } catch (const std::exception&) {
      throw fail("bad probability");
    }
  };

  if (next() != "tagbench-truth 1") throw fail("not a tagbench-truth version 1 file");
  auto header = next();
  if (!header.starts_with("TAGS ")) throw fail("expected TAGS");
  const std::size_t n = std::stoul(header.substr(5));
  std::vector<std::string> tags;
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < n; ++i) {
    tags.push_back(next());
    index.emplace(tags.back(), i);
  }
  if (next() != "START") throw fail("expected START");
  std::vector<double> start(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = next();
    const auto f = split(l, '\t');
    if (f.size() != 2 || f[0] != tags[i]) throw fail("bad START line");
    start[i] = parse_double(f[1]);
  }
  if (next() != "TRANS") throw fail("expected TRANS");
  std::vector<double> trans(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    const auto l = next();
    const auto f = split(l, '\t');
    if (f.size() != 3 || f[0] != tags[k / n] || f[1] != tags[k % n]) throw fail("bad TRANS line");
    trans[k] = parse_double(f[2]);
  }
  header = next();
  if (!header.starts_with("EMIT ")) throw fail("expected EMIT");
  const std::size_t m = std::stoul(header.substr(5));
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> emissions;
  for (std::size_t k = 0; k < m; ++k) {
    const auto l = next();
    const auto f = split(l, '\t');
    if (f.size() != 3) throw fail("bad EMIT line");
    const auto it = index.find(f[1]);
    if (it == index.end()) throw fail("EMIT names an undeclared tag");
    emissions[std::string(f[0])].emplace_back(it->second, parse_double(f[2]));
  }
  if (next() != "END") throw fail("expected END");
  return GenerativeModel(std::move(tags), std::move(start), std::move(trans), std::move(emissions));
}

}  // namespace tagbench
