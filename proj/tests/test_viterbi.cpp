#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "exact_oracle.hpp"
#include "helpers.hpp"
#include "tagbench/hmm.hpp"
#include "tagbench/viterbi.hpp"

using namespace tagbench;
using tagbench::testing::corpus_from;
using tagbench::testing::exact_best_path;
using tagbench::testing::random_corpus;

namespace {

struct TestScorer {
  const HmmModel& m;
  const Sentence& s;
  double log_start(std::size_t c) const { return m.log_transition(m.boundary(), c); }
  double log_trans(std::size_t p, std::size_t c) const { return m.log_transition(p, c); }
  double log_end(std::size_t c) const { return m.log_transition(c, m.boundary()); }
  double log_emit(std::size_t pos, std::size_t c) const { return std::log(m.emission_prob(s.tokens[pos].surface, c)); }
};

Sentence words(std::mt19937_64& rng, std::size_t len, std::size_t vocab) {
  Sentence s;
  for (std::size_t i = 0; i < len; ++i) s.tokens.push_back({"w" + std::to_string(rng() % vocab), std::nullopt});
  return s;
}

}  // namespace

TEST_CASE("unambiguous words decode to their only tags") {
  const auto m = train(corpus_from("the/AT cat/NN sat/VBD | the/AT dog/NN"), true);
  const auto s = corpus_from("the dog sat the cat").sentences()[0];
  CHECK(viterbi_tags(m, s) == std::vector<std::string>{"AT", "NN", "VBD", "AT", "NN"});
}

TEST_CASE("hand-set 2x2 grid") {
  // states X, Y, <s>; unsmoothed; every emission 0.5
  Lexicon lex;
  for (const char* w : {"a", "b"})
    for (const char* t : {"X", "Y"}) lex.add(w, t, 2);
  const HmmModel m(TagsetSpec({"X", "Y"}, {}), {1, 2, 1, 1, 1, 2, 3, 1, 0}, {4, 4, 4}, lex, false);
  // XX = 3/64, XY = 12/64, YX = 1/64, YY = 2/64 before emissions
  const auto s = corpus_from("a b").sentences()[0];
  const auto d = viterbi(m, s);
  CHECK(viterbi_tags(m, s) == std::vector<std::string>{"X", "Y"});
  CHECK(d.log_prob == doctest::Approx(std::log(12.0 / 64 * 0.25)).epsilon(1e-12));
  CHECK(exact_best_path(m, s, build_lattice(m, s)).path == d.path);
}

TEST_CASE("exact ties keep the earliest candidates") {
  // one tag-symmetric corpus: every path through {X,Y} scores the same
  const auto m = train(corpus_from("a/X a/Y | a/Y a/X | a/X a/X | a/Y a/Y"), true);
  const auto s = corpus_from("a a a").sentences()[0];
  const auto d = viterbi(m, s);
  CHECK(viterbi_tags(m, s) == std::vector<std::string>{"X", "X", "X"});
  CHECK(exact_best_path(m, s, build_lattice(m, s)).path == d.path);
}

TEST_CASE("Viterbi matches exhaustive enumeration on random models") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_tags = 2 + rng() % 4;
    const auto c = random_corpus(rng, 15, 8, 12, n_tags);
    const auto m = train(c, trial % 4 != 0, {"T0"});
    const auto s = words(rng, 1 + rng() % 8, 16);  // some words are unknown
    const auto d = viterbi(m, s);
    const auto best = exact_best_path(m, s, build_lattice(m, s));
    if (best.probability.is_zero()) {
      CHECK(std::isinf(d.log_prob));
    } else {
      CHECK(std::abs(d.log_prob - best.log_prob()) <= 1e-9);
      CHECK(std::abs(path_log_prob(m, s, d.path) - d.log_prob) <= 1e-9);
    }
    CHECK(d.path == best.path);
  }
}

TEST_CASE("ties survive a different summation order") {
  // X and Y are interchangeable, but their logs reach each path in a
  // different order; the earliest candidates must still win
  const auto m = train(corpus_from("a/X b/Y c/X | a/Y b/X c/Y | b/X b/X | b/Y b/Y | c/X a/Y | c/Y a/X"), true);
  for (const char* text : {"a b c", "b b b b", "c a b a", "a a"}) {
    const auto s = corpus_from(text).sentences()[0];
    CHECK(viterbi(m, s).path == exact_best_path(m, s, build_lattice(m, s)).path);
  }
}

TEST_CASE("a sentence with no possible path decodes to the earliest candidates") {
  // unsmoothed: only the boundary ever precedes X, so "b a" has probability zero
  const auto m = train(corpus_from("a/X | b/Y b/Z"), false);
  const auto s = corpus_from("b a").sentences()[0];
  const auto d = viterbi(m, s);
  CHECK(std::isinf(d.log_prob));
  CHECK(viterbi_tags(m, s) == std::vector<std::string>{"Y", "X"});
}

TEST_CASE("pruning candidates never raises the optimum") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = train(random_corpus(rng, 20, 8, 10, 5), true);
    const auto s = words(rng, 1 + rng() % 7, 14);
    const auto full = build_lattice(m, s);
    auto pruned = full;
    for (auto& cands : pruned)
      if (cands.size() > 1) cands.erase(cands.begin() + static_cast<long>(rng() % cands.size()));
    const TestScorer scorer{m, s};
    CHECK(decode_lattice(pruned, scorer).log_prob <= decode_lattice(full, scorer).log_prob);
    CHECK(decode_lattice(full, scorer).path == viterbi(m, s).path);
  }
}

TEST_CASE("decoding is deterministic across threads") {
  std::mt19937_64 rng(8);
  const auto m = train(random_corpus(rng, 200, 15, 80, 8), true);
  std::vector<Sentence> sentences;
  for (int i = 0; i < 300; ++i) sentences.push_back(words(rng, 1 + rng() % 20, 100));
  std::vector<Decoding> serial;
  for (const auto& s : sentences) serial.push_back(viterbi(m, s));

  std::vector<Decoding> parallel(sentences.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < 8; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < sentences.size(); i += 8) parallel[i] = viterbi(m, sentences[i]);
      });
  }
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    CHECK(parallel[i].path == serial[i].path);
    CHECK(parallel[i].log_prob == serial[i].log_prob);
  }
}

TEST_CASE("empty sentences and empty hypothesis sets are errors") {
  const auto m = train(corpus_from("a/X"), true);
  CHECK_THROWS_AS(viterbi(m, Sentence{}), DataError);
  const TestScorer scorer{m, Sentence{}};
  CHECK_THROWS_AS(decode_lattice({{0}, {}}, scorer), DataError);
  const auto closed = train(corpus_from("a/X"), true, {"X"});
  CHECK_THROWS_AS(viterbi(closed, corpus_from("b").sentences()[0]), DataError);
}
