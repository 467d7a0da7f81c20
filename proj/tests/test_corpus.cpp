#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "tagbench/corpus.hpp"
#include "tagbench/error.hpp"

using namespace tagbench;
using tagbench::testing::corpus_from;
using tagbench::testing::parse_text;

TEST_CASE("parse_corpus reads a two-token sentence") {
  const auto c = parse_text("the\tAT\ncat\tNN\n\n");
  CHECK(c.sentence_count() == 1);
  CHECK(c.token_count() == 2);
  CHECK(c.tags() == std::set<std::string>{"AT", "NN"});
  CHECK(c.sentences()[0].tokens[1] == Token{"cat", "NN"});
}

TEST_CASE("parse_corpus rejects empty input") {
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_corpus(empty, Strictness::lenient), DataError);
  std::istringstream only_comments("# nothing\n\n\n");
  CHECK_THROWS_AS(parse_corpus(only_comments, Strictness::lenient), DataError);
}

TEST_CASE("lenient parse skips and records the malformed line") {
  const auto parsed = parse_corpus_file(TAGBENCH_TEST_DATA "/ten_lines.tsv", Strictness::lenient);
  CHECK(parsed.corpus.token_count() == 9);
  REQUIRE(parsed.skipped.size() == 1);
  CHECK(parsed.skipped[0].line == 7);
  CHECK(parsed.corpus.sentence_count() == 3);
  CHECK_THROWS_AS(parse_corpus_file(TAGBENCH_TEST_DATA "/ten_lines.tsv", Strictness::strict), DataError);
}

TEST_CASE("malformed token lines") {
  CHECK_THROWS_AS(parse_text("word\t\n"), DataError);         // empty tag field
  CHECK_THROWS_AS(parse_text("word\n"), DataError);           // tag required
  CHECK_THROWS_AS(parse_text("two words\tNN\n"), DataError);  // whitespace in surface
  CHECK_THROWS_AS(parse_text("\tNN\n"), DataError);           // empty surface

  std::istringstream untagged("hello\nworld\tNN\n");
  const auto parsed = parse_corpus(untagged, Strictness::strict, false);
  CHECK_FALSE(parsed.corpus.fully_tagged());
  CHECK(parsed.corpus.sentences()[0].tokens[0] == Token{"hello", std::nullopt});
}

TEST_CASE("comments, CRLF and repeated blank lines") {
  const auto c = parse_text("# header\r\na\tX\r\n\r\n\r\n# mid\r\nb\tY\r\nc\tZ\r\n");
  CHECK(c.sentence_count() == 2);
  CHECK(serialize_corpus(c) == "a\tX\n\nb\tY\nc\tZ\n\n");
}

TEST_CASE("serialization round-trips canonical text") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = tagbench::testing::random_corpus(rng, 1 + rng() % 20, 9, 30, 6);
    const auto text = serialize_corpus(c);
    const auto back = parse_text(text);
    CHECK(back == c);
    CHECK(serialize_corpus(back) == text);
  }
}

TEST_CASE("held_out split takes a sentence prefix") {
  std::mt19937_64 rng(1);
  const auto c100 = tagbench::testing::random_corpus(rng, 100, 5, 20, 3);
  const auto s = split_corpus(c100, 0.95, SplitMode::held_out);
  CHECK(s.train.sentence_count() == 95);
  CHECK(s.test.sentence_count() == 5);

  const auto c20 = tagbench::testing::random_corpus(rng, 20, 5, 20, 3);
  const auto s20 = split_corpus(c20, 0.9, SplitMode::held_out);
  REQUIRE(s20.train.sentence_count() == 18);
  REQUIRE(s20.test.sentence_count() == 2);
  CHECK(s20.test.sentences()[0] == c20.sentences()[18]);
  CHECK(s20.test.sentences()[1] == c20.sentences()[19]);

  // partition: concatenation restores the corpus
  std::vector<Sentence> joined = s20.train.sentences();
  joined.insert(joined.end(), s20.test.sentences().begin(), s20.test.sentences().end());
  CHECK(TaggedCorpus(joined) == c20);

  CHECK_THROWS_AS(split_corpus(c20, 1.0, SplitMode::held_out), DataError);
  CHECK_THROWS_AS(split_corpus(c20, 0.0, SplitMode::held_out), UsageError);
  CHECK_THROWS_AS(split_corpus(TaggedCorpus{}, 0.5, SplitMode::held_out), DataError);
}

TEST_CASE("held_out train count uses the ceiling") {
  CHECK(held_out_train_count(100, 0.95) == 95);
  CHECK(held_out_train_count(20, 0.9) == 18);
  CHECK(held_out_train_count(21, 0.9) == 19);  // 18.9 -> 19
  CHECK(held_out_train_count(3, 0.5) == 2);
}

TEST_CASE("in_sample split keeps the corpus and samples evenly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = tagbench::testing::random_corpus(rng, 40 + rng() % 60, 8, 50, 4);
    const auto s = split_corpus(c, 1.0, SplitMode::in_sample, 50);
    CHECK(s.train == c);
    CHECK(s.test.token_count() >= 50);
    // every test sentence is a corpus sentence, in corpus order
    std::size_t from = 0;
    for (const auto& t : s.test.sentences()) {
      bool found = false;
      for (; from < c.sentence_count(); ++from)
        if (c.sentences()[from] == t) {
          found = true;
          ++from;
          break;
        }
      CHECK(found);
    }
    CHECK(split_corpus(c, 1.0, SplitMode::in_sample, 50).test == s.test);
  }
  const auto small = corpus_from("a/X b/Y | c/Z");
  CHECK(split_corpus(small, 1.0, SplitMode::in_sample, 100).test == small);
}

TEST_CASE("build_lexicon counts word-tag pairs") {
  const auto lex = build_lexicon(corpus_from("a/AT a/AT a/NN"));
  REQUIRE(lex.find("a"));
  CHECK(*lex.find("a") == Lexicon::TagCounts{{"AT", 2}, {"NN", 1}});
  CHECK(lex.total_mass() == 3);
  CHECK(lex.find("b") == nullptr);

  CHECK_THROWS_AS(build_lexicon(TaggedCorpus{}), DataError);
  CHECK_THROWS_AS(build_lexicon(corpus_from("a/AT b")), DataError);

  // lenient parse of nothing but malformed lines leaves an empty corpus
  std::istringstream junk("x\ty\tz\n");
  const auto parsed = parse_corpus(junk, Strictness::lenient);
  CHECK(parsed.corpus.token_count() == 0);
  CHECK_THROWS_AS(build_lexicon(parsed.corpus), DataError);
}

TEST_CASE("lexicon mass equals token count") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Sentence> sentences;
    std::size_t total = 0;
    while (total < 1000) {
      Sentence s;
      const std::size_t len = std::min<std::size_t>(1 + rng() % 12, 1000 - total);
      for (std::size_t i = 0; i < len; ++i)
        s.tokens.push_back({"w" + std::to_string(rng() % 80), "T" + std::to_string(rng() % 7)});
      total += len;
      sentences.push_back(std::move(s));
    }
    const TaggedCorpus c(std::move(sentences));
    REQUIRE(c.token_count() == 1000);
    CHECK(build_lexicon(c).total_mass() == 1000);
  }
}

TEST_CASE("lexicon file is sorted by surface then tag") {
  const auto lex = build_lexicon(corpus_from("b/Y a/X b/X a/X | c/Z"));
  std::ostringstream out;
  write_lexicon(out, lex);
  CHECK(out.str() == "a\tX\t2\nb\tX\t1\nb\tY\t1\nc\tZ\t1\n");
  std::istringstream in(out.str());
  CHECK(read_lexicon(in) == lex);
  std::istringstream bad("a\tX\tzero\n");
  CHECK_THROWS_AS(read_lexicon(bad), DataError);
}
