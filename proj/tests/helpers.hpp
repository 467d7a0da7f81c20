#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tagbench/corpus.hpp"

namespace tagbench::testing {

/// "a/AT b/NN | c/X" -> two sentences; "|" separates sentences.
inline TaggedCorpus corpus_from(const std::string& text) {
  std::vector<Sentence> sentences;
  Sentence cur;
  std::istringstream in(text);
  std::string item;
  while (in >> item) {
    if (item == "|") {
      if (!cur.tokens.empty()) sentences.push_back(std::move(cur));
      cur = {};
      continue;
    }
    const auto slash = item.rfind('/');
    if (slash == std::string::npos)
      cur.tokens.push_back({item, std::nullopt});
    else
      cur.tokens.push_back({item.substr(0, slash), item.substr(slash + 1)});
  }
  if (!cur.tokens.empty()) sentences.push_back(std::move(cur));
  return TaggedCorpus(std::move(sentences));
}

/// Random corpus over `n_words` words and `n_tags` tags, each sentence 1..max_len tokens.
inline TaggedCorpus random_corpus(std::mt19937_64& rng, std::size_t n_sentences, std::size_t max_len,
                                  std::size_t n_words, std::size_t n_tags) {
  std::vector<Sentence> sentences;
  for (std::size_t s = 0; s < n_sentences; ++s) {
    Sentence sent;
    const std::size_t len = 1 + rng() % max_len;
    for (std::size_t i = 0; i < len; ++i)
      sent.tokens.push_back({"w" + std::to_string(rng() % n_words), "T" + std::to_string(rng() % n_tags)});
    sentences.push_back(std::move(sent));
  }
  return TaggedCorpus(std::move(sentences));
}

inline TaggedCorpus parse_text(const std::string& text, Strictness s = Strictness::strict) {
  std::istringstream in(text);
  return parse_corpus(in, s).corpus;
}

}  // namespace tagbench::testing
