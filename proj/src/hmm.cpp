#include "tagbench/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "tagbench/error.hpp"
#include "tagbench/util.hpp"

namespace tagbench {

HmmModel::HmmModel(TagsetSpec tagset, std::vector<std::uint64_t> transitions, std::vector<std::uint64_t> tag_freq,
                   Lexicon lexicon, bool smoothing)
    : tagset_(std::move(tagset)),
      counts_(std::move(transitions)),
      freq_(std::move(tag_freq)),
      lexicon_(std::move(lexicon)),
      smoothing_(smoothing) {
  for (const auto& t : tagset_.tags()) {
    if (t == kBoundaryName) throw DataError("tag '" + t + "' collides with the reserved boundary tag");
    names_.push_back(t);
  }
  names_.emplace_back(kBoundaryName);
  const std::size_t n = names_.size();
  if (counts_.size() != n * n) throw InvariantError("transition matrix has the wrong shape");
  if (freq_.size() != n) throw InvariantError("tag frequency vector has the wrong length");
  for (const auto& [word, tags] : lexicon_.entries())
    for (const auto& [tag, _] : tags)
      if (!tagset_.contains(tag)) throw DataError("lexicon entry '" + word + "' uses unknown tag '" + tag + "'");

  for (std::size_t s = 0; s + 1 < n; ++s)
    if (!tagset_.is_closed(names_[s])) open_states_.push_back(s);

  log_trans_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) log_trans_[i * n + j] = std::log(transition_prob(i, j));
}

std::optional<std::size_t> HmmModel::index_of(std::string_view tag) const {
  if (tag == kBoundaryName) return boundary();
  const auto end = names_.end() - 1;
  const auto it = std::lower_bound(names_.begin(), end, tag,
                                   [](const std::string& a, std::string_view b) { return a < b; });
  if (it == end || *it != tag) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::uint64_t HmmModel::transition_count(std::size_t from, std::size_t to) const {
  if (from >= state_count() || to >= state_count()) throw InvariantError("state index out of range");
  return counts_[from * state_count() + to];
}

double HmmModel::transition_prob(std::size_t from, std::size_t to) const {
  const double c = static_cast<double>(transition_count(from, to));
  const double f = static_cast<double>(freq_[from]);
  if (smoothing_) return (c + 1.0) / (f + static_cast<double>(state_count()));
  if (freq_[from] == 0) return 0.0;
  return c / f;
}

double HmmModel::transition_prob(std::string_view from, std::string_view to) const {
  const auto i = index_of(from);
  const auto j = index_of(to);
  if (!i) throw DataError("unknown tag '" + std::string(from) + "'");
  if (!j) throw DataError("unknown tag '" + std::string(to) + "'");
  return transition_prob(*i, *j);
}

double HmmModel::emission_prob(const Lexicon::TagCounts* entry, std::size_t state) const {
  if (!entry) return 1.0;
  if (state >= boundary()) return 0.0;
  const auto it = entry->find(names_[state]);
  if (it == entry->end() || freq_[state] == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(freq_[state]);
}

double HmmModel::emission_prob(const std::string& word, std::size_t state) const {
  return emission_prob(lexicon_.find(word), state);
}

double HmmModel::emission_prob(const std::string& word, std::string_view tag) const {
  const auto s = index_of(tag);
  if (!s || *s == boundary()) throw DataError("unknown tag '" + std::string(tag) + "'");
  return emission_prob(word, *s);
}

HmmModel HmmModel::with_smoothing(bool on) const { return HmmModel(tagset_, counts_, freq_, lexicon_, on); }

void HmmModel::check_invariants() const {
  const std::size_t n = state_count();
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t row = 0;
    for (std::size_t j = 0; j < n; ++j) row += counts_[i * n + j];
    if (row != freq_[i])
      throw InvariantError("transition row of '" + names_[i] + "' sums to " + std::to_string(row) +
                           " but its frequency is " + std::to_string(freq_[i]));
    if (i + 1 < n && freq_[i] == 0) throw InvariantError("tag '" + names_[i] + "' has zero frequency");
  }
}

HmmModel train(const TaggedCorpus& corpus, bool smoothing, const std::set<std::string>& closed_decl) {
  if (corpus.token_count() == 0) throw DataError("cannot train on an empty corpus");
  auto lexicon = build_lexicon(corpus);
  auto tagset = tagset_of(corpus, closed_decl);
  if (tagset.contains(std::string(HmmModel::kBoundaryName)))
    throw DataError("tag '" + std::string(HmmModel::kBoundaryName) + "' is reserved for sentence boundaries");

  std::map<std::string, std::size_t> index;
  for (const auto& t : tagset.tags()) index.emplace(t, index.size());
  const std::size_t n = index.size() + 1;
  const std::size_t boundary = n - 1;
  std::vector<std::uint64_t> counts(n * n, 0);
  std::vector<std::uint64_t> freq(n, 0);

  for (const auto& s : corpus.sentences()) {
    std::size_t prev = boundary;
    ++freq[boundary];
    for (const auto& tok : s.tokens) {
      const std::size_t cur = index.at(*tok.tag);
      ++counts[prev * n + cur];
      ++freq[cur];
      prev = cur;
    }
    ++counts[prev * n + boundary];
  }
  HmmModel model(std::move(tagset), std::move(counts), std::move(freq), std::move(lexicon), smoothing);
  model.check_invariants();
  return model;
}

HmmModel relabel_model(const HmmModel& model, const std::function<std::string(const std::string&)>& map) {
  const std::size_t n_old = model.state_count();
  std::vector<std::string> image(n_old);
  std::set<std::string> new_tags;
  for (std::size_t s = 0; s < model.boundary(); ++s) {
    image[s] = map(model.name(s));
    new_tags.insert(image[s]);
  }
  std::set<std::string> closed_images, open_images;
  for (std::size_t s = 0; s < model.boundary(); ++s)
    (model.tagset().is_closed(model.name(s)) ? closed_images : open_images).insert(image[s]);
  std::set<std::string> closed;
  std::set_difference(closed_images.begin(), closed_images.end(), open_images.begin(), open_images.end(),
                      std::inserter(closed, closed.end()));

  std::map<std::string, std::size_t> index;
  for (const auto& t : new_tags) index.emplace(t, index.size());
  const std::size_t n = index.size() + 1;
  std::vector<std::size_t> to_new(n_old);
  for (std::size_t s = 0; s < model.boundary(); ++s) to_new[s] = index.at(image[s]);
  to_new[model.boundary()] = n - 1;

  std::vector<std::uint64_t> counts(n * n, 0);
  std::vector<std::uint64_t> freq(n, 0);
  for (std::size_t i = 0; i < n_old; ++i) {
    freq[to_new[i]] += model.tag_freq(i);
    for (std::size_t j = 0; j < n_old; ++j) counts[to_new[i] * n + to_new[j]] += model.transition_count(i, j);
  }
  Lexicon lexicon;
  for (const auto& [word, tags] : model.lexicon().entries())
    for (const auto& [tag, c] : tags) lexicon.add(word, map(tag), c);
  return HmmModel(TagsetSpec(std::move(new_tags), std::move(closed)), std::move(counts), std::move(freq),
                  std::move(lexicon), model.smoothing());
}

std::vector<std::size_t> candidate_states(const HmmModel& model, const std::string& word, const Guesser* guesser,
                                          bool* is_unknown) {
  if (const auto* entry = model.lexicon().find(word)) {
    if (is_unknown) *is_unknown = false;
    std::vector<std::size_t> out;
    out.reserve(entry->size());
    for (const auto& [tag, _] : *entry) out.push_back(*model.index_of(tag));
    return out;
  }
  if (is_unknown) *is_unknown = true;
  if (model.open_states().empty()) throw DataError("no open-class tags to hypothesise for unknown word '" + word + "'");
  if (guesser) {
    if (const auto* rule = guesser->match(word)) {
      std::vector<std::size_t> narrowed;
      for (const auto& tag : rule->allowed_tags) {
        const auto s = model.index_of(tag);
        if (s && *s != model.boundary() && !model.tagset().is_closed(tag)) narrowed.push_back(*s);
      }
      if (!narrowed.empty()) {
        std::sort(narrowed.begin(), narrowed.end());
        return narrowed;
      }
    }
  }
  return model.open_states();
}

Hypothesis hypothesize(const HmmModel& model, const std::string& word, const Guesser* guesser, std::size_t position) {
  Hypothesis h;
  h.word_position = position;
  for (auto s : candidate_states(model, word, guesser, &h.is_unknown)) h.candidate_tags.push_back(model.name(s));
  return h;
}

void write_model(std::ostream& out, const HmmModel& model) {
  const std::size_t n = model.state_count();
  out << "tagbench-hmm 1\n";
  out << "smoothing " << (model.smoothing() ? "add-one" : "none") << '\n';
  out << "TAGS " << model.tag_count() << '\n';
  for (std::size_t s = 0; s < model.boundary(); ++s)
    out << model.name(s) << '\t' << (model.tagset().is_closed(model.name(s)) ? 1 : 0) << '\t' << model.tag_freq(s)
        << '\n';
  out << "BOUNDARY\t" << model.tag_freq(model.boundary()) << '\n';
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) nonzero += model.transition_count(i, j) != 0;
  out << "TRANS " << nonzero << '\n';
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (const auto c = model.transition_count(i, j))
        out << model.name(i) << '\t' << model.name(j) << '\t' << c << '\n';
  std::size_t lex_lines = 0;
  for (const auto& [_, tags] : model.lexicon().entries()) lex_lines += tags.size();
  out << "LEX " << lex_lines << '\n';
  write_lexicon(out, model.lexicon());
  out << "END\n";
}

std::string serialize_model(const HmmModel& model) {
  std::ostringstream ss;
  write_model(ss, model);
  return ss.str();
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string raw;
    if (!std::getline(in_, raw)) throw fail("unexpected end of file");
    ++line_;
    return std::string(strip_cr(raw));
  }

  DataError fail(const std::string& why) const {
    return DataError("model line " + std::to_string(line_) + ": " + why);
  }

  std::size_t header(const std::string& keyword) {
    const auto line = next();
    const auto parts = split(line, ' ');
    if (parts.size() != 2 || parts[0] != keyword) throw fail("expected '" + keyword + " <count>'");
    return number(parts[1]);
  }

  std::uint64_t number(std::string_view text) const {
    std::uint64_t v = 0;
    if (text.empty()) throw fail("empty number");
    for (char c : text) {
      if (c < '0' || c > '9') throw fail("bad number '" + std::string(text) + "'");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace

HmmModel read_model(std::istream& in) {
  LineReader r(in);
  if (r.next() != "tagbench-hmm 1") throw r.fail("not a tagbench-hmm version 1 file");
  const auto sm = r.next();
  bool smoothing;
  if (sm == "smoothing add-one") smoothing = true;
  else if (sm == "smoothing none") smoothing = false;
  else throw r.fail("expected 'smoothing add-one|none'");

  const std::size_t k = r.header("TAGS");
  std::vector<std::string> names;
  std::set<std::string> tags, closed;
  std::vector<std::uint64_t> freq;
  for (std::size_t i = 0; i < k; ++i) {
    const auto line = r.next();
    const auto f = split(line, '\t');
    if (f.size() != 3 || f[0].empty() || (f[1] != "0" && f[1] != "1")) throw r.fail("expected tag, closed flag, frequency");
    names.emplace_back(f[0]);
    if (!tags.insert(names.back()).second) throw r.fail("duplicate tag");
    if (f[1] == "1") closed.insert(names.back());
    freq.push_back(r.number(f[2]));
  }
  if (!std::is_sorted(names.begin(), names.end())) throw r.fail("tags must be sorted");
  {
    const auto line = r.next();
    const auto f = split(line, '\t');
    if (f.size() != 2 || f[0] != "BOUNDARY") throw r.fail("expected 'BOUNDARY<TAB><count>'");
    freq.push_back(r.number(f[1]));
  }
  const std::size_t n = k + 1;
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < k; ++i) index.emplace(names[i], i);
  index.emplace(std::string(HmmModel::kBoundaryName), k);

  std::vector<std::uint64_t> counts(n * n, 0);
  const std::size_t m = r.header("TRANS");
  for (std::size_t e = 0; e < m; ++e) {
    const auto line = r.next();
    const auto f = split(line, '\t');
    if (f.size() != 3) throw r.fail("expected from, to, count");
    const auto a = index.find(f[0]);
    const auto b = index.find(f[1]);
    if (a == index.end() || b == index.end()) throw r.fail("transition names an undeclared tag");
    counts[a->second * n + b->second] = r.number(f[2]);
  }
  const std::size_t lex_lines = r.header("LEX");
  std::ostringstream lex_text;
  for (std::size_t e = 0; e < lex_lines; ++e) lex_text << r.next() << '\n';
  std::istringstream lex_in(lex_text.str());
  auto lexicon = read_lexicon(lex_in);
  if (r.next() != "END") throw r.fail("expected END");

  HmmModel model(TagsetSpec(std::move(tags), std::move(closed)), std::move(counts), std::move(freq),
                 std::move(lexicon), smoothing);
  try {
    model.check_invariants();
  } catch (const InvariantError& e) {
    throw DataError(std::string("inconsistent model file: ") + e.what());
  }
  return model;
}

HmmModel read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model: " + path);
  return read_model(in);
}

}  // namespace tagbench
