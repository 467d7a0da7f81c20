#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tagbench/error.hpp"
#include "tagbench/experiment.hpp"
#include "tagbench/synthetic.hpp"

using namespace tagbench;

namespace {

SyntheticSpec small_spec(std::uint64_t seed) {
  SyntheticSpec s;
  s.tokens = 20000;
  s.vocabulary = 1500;
  s.seed = seed;
  return s;
}

// Share of tokens whose word type carries more than one tag in the corpus.
double realized_ambiguity(const TaggedCorpus& c) {
  const auto lex = build_lexicon(c);
  std::size_t amb = 0;
  for (const auto& s : c.sentences())
    for (const auto& t : s.tokens) amb += lex.find(t.surface)->size() > 1;
  return static_cast<double>(amb) / static_cast<double>(c.token_count());
}

FeatureRules rules_of(const SyntheticCorpus& sc) {
  std::istringstream in(sc.rules_text);
  return parse_scheme_file(in);
}

}  // namespace

TEST_CASE("the seed determines the corpus") {
  const auto a = generate_synthetic_corpus(small_spec(42));
  const auto b = generate_synthetic_corpus(small_spec(42));
  const auto c = generate_synthetic_corpus(small_spec(43));
  CHECK(serialize_corpus(a.corpus) == serialize_corpus(b.corpus));
  CHECK(serialize_corpus(a.corpus) != serialize_corpus(c.corpus));
  std::ostringstream ta, tb;
  write_truth(ta, a.truth);
  write_truth(tb, b.truth);
  CHECK(ta.str() == tb.str());
  CHECK(a.rules_text == b.rules_text);
}

TEST_CASE("corpus size and sentence lengths follow the settings") {
  auto spec = small_spec(1);
  spec.tokens = 5003;
  spec.min_sentence_length = 3;
  spec.max_sentence_length = 7;
  const auto sc = generate_synthetic_corpus(spec);
  CHECK(sc.corpus.token_count() == 5003);
  for (std::size_t i = 0; i + 1 < sc.corpus.sentence_count(); ++i) {
    CHECK(sc.corpus.sentences()[i].size() >= 3);
    CHECK(sc.corpus.sentences()[i].size() <= 7);
  }
}

TEST_CASE("8 base tags crossed with 2x2 axes give 32 tags, 8 under gn") {
  const auto sc = generate_synthetic_corpus(small_spec(7));
  CHECK(sc.corpus.tags().size() == 32);
  CHECK(sc.truth.tags().size() == 32);
  CHECK(sc.corpus.tags().count("B3-G0-N1") == 1);
  const auto rules = rules_of(sc);
  CHECK(rules.letters() == "GN");
  CHECK(apply_scheme(sc.corpus, ReductionScheme(rules, "gn")).tags().size() == 8);
  CHECK(apply_scheme(sc.corpus, ReductionScheme(rules, "Gn")).tags().size() == 16);
  CHECK(apply_scheme(sc.corpus, ReductionScheme(rules, "gN")).tags().size() == 16);
  CHECK(apply_scheme(sc.corpus, ReductionScheme(rules, "GN")).tags().size() == 32);
}

TEST_CASE("three axes reduce by their value counts") {
  auto spec = small_spec(2);
  spec.base_tags = 3;
  spec.axes = parse_axes("G:3,N:2,P:2");
  const auto sc = generate_synthetic_corpus(spec);
  CHECK(sc.corpus.tags().size() == 36);
  const auto rules = rules_of(sc);
  CHECK(apply_scheme(sc.corpus, ReductionScheme(rules, "gNp")).tags().size() == 6);
  CHECK(apply_scheme(sc.corpus, ReductionScheme(rules, "Gnp")).tags().size() == 9);
}

TEST_CASE("zero ambiguity target gives no ambiguous tokens") {
  auto spec = small_spec(5);
  spec.ambiguity = 0.0;
  const auto sc = generate_synthetic_corpus(spec);
  CHECK(realized_ambiguity(sc.corpus) == 0.0);
  const auto model = train(sc.corpus, true);
  CHECK(format_percent(degree_of_ambiguity(sc.corpus, model)) == "0.00");
}

TEST_CASE("realized ambiguity lands within 5 points of the target") {
  for (const double target : {0.1, 0.25, 0.4, 0.6, 0.8})
    for (std::uint64_t seed : {1, 2, 3}) {
      SyntheticSpec spec;
      spec.ambiguity = target;
      spec.seed = seed;
      const double got = realized_ambiguity(generate_synthetic_corpus(spec).corpus);
      CHECK_MESSAGE(std::abs(got - target) <= 0.05, "target ", target, " seed ", seed, " got ", got);
    }
}

TEST_CASE("suffix marking ties unambiguous words to their tag") {
  auto spec = small_spec(9);
  spec.suffix_marks_tag = true;
  const auto sc = generate_synthetic_corpus(spec);
  const auto lex = build_lexicon(sc.corpus);
  const auto& tags = sc.truth.tags();
  for (const auto& [word, counts] : lex.entries()) {
    if (counts.size() > 1) {
      CHECK(word.ends_with("qx"));
      continue;
    }
    const auto idx = static_cast<std::size_t>(
        std::find(tags.begin(), tags.end(), counts.begin()->first) - tags.begin());
    CHECK(word.ends_with(synthetic_suffix(idx)));
  }
}

TEST_CASE("infeasible specs are rejected") {
  auto spec = small_spec(1);
  spec.vocabulary = 50;  // 32 tags need 48 ambiguous + 32 plain words
  CHECK_THROWS_AS(generate_synthetic_corpus(spec), UsageError);
  spec.vocabulary = 80;
  CHECK_NOTHROW(generate_synthetic_corpus(spec));
  spec = small_spec(1);
  spec.ambiguity = 1.0;
  CHECK_THROWS_AS(generate_synthetic_corpus(spec), UsageError);
  spec = small_spec(1);
  spec.min_sentence_length = 9;
  spec.max_sentence_length = 3;
  CHECK_THROWS_AS(generate_synthetic_corpus(spec), UsageError);
  CHECK_THROWS_AS(parse_axes("G2"), UsageError);
  CHECK_THROWS_AS(parse_axes("G:x"), UsageError);
  spec = small_spec(1);
  spec.axes = parse_axes("G:2,g:3");
  CHECK_THROWS_AS(generate_synthetic_corpus(spec), UsageError);
}

TEST_CASE("truth files round-trip and decode the same") {
  const auto sc = generate_synthetic_corpus(small_spec(12));
  std::ostringstream out;
  write_truth(out, sc.truth);
  std::istringstream in(out.str());
  const auto back = read_truth(in);
  CHECK(back.tags() == sc.truth.tags());
  for (std::size_t i = 0; i < 10; ++i) CHECK(back.decode(sc.corpus.sentences()[i]) == sc.truth.decode(sc.corpus.sentences()[i]));
  std::ostringstream again;
  write_truth(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("true-parameter decoding beats chance on ambiguous words") {
  const auto sc = generate_synthetic_corpus(small_spec(21));
  const auto lex = build_lexicon(sc.corpus);
  std::size_t amb = 0, correct = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    const auto& s = sc.corpus.sentences()[i];
    const auto pred = sc.truth.decode(s);
    for (std::size_t j = 0; j < s.size(); ++j)
      if (lex.find(s.tokens[j].surface)->size() > 1) {
        ++amb;
        correct += pred[j] == *s.tokens[j].tag;
      }
  }
  REQUIRE(amb > 0);
  CHECK(static_cast<double>(correct) / static_cast<double>(amb) > 0.6);
}
