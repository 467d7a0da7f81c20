#include "tagbench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "tagbench/error.hpp"
#include "tagbench/viterbi.hpp"

namespace tagbench {

Ratio degree_of_ambiguity(const TaggedCorpus& test, const HmmModel& model, const Guesser* guesser) {
  if (test.token_count() == 0) throw DataError("empty test corpus");
  std::uint64_t multi = 0;
  for (const auto& s : test.sentences())
    for (const auto& t : s.tokens) multi += candidate_states(model, t.surface, guesser).size() > 1;
  return {multi, test.token_count()};
}

EvalReport evaluate(const TaggedCorpus& test, const std::vector<std::vector<std::string>>& predicted,
                    const HmmModel& model, const Guesser* guesser) {
  if (test.token_count() == 0) throw DataError("empty test corpus");
  if (predicted.size() != test.sentence_count()) throw DataError("prediction count does not match test sentences");
  CategoryCounts c;
  for (std::size_t si = 0; si < test.sentence_count(); ++si) {
    const auto& sentence = test.sentences()[si];
    if (predicted[si].size() != sentence.size())
      throw DataError("prediction length mismatch in test sentence " + std::to_string(si + 1));
    for (std::size_t ti = 0; ti < sentence.size(); ++ti) {
      const auto& tok = sentence.tokens[ti];
      if (!tok.tag) throw DataError("test token '" + tok.surface + "' has no gold tag");
      bool unknown = false;
      const auto n_cands = candidate_states(model, tok.surface, guesser, &unknown).size();
      const bool correct = predicted[si][ti] == *tok.tag;
      ++c.tokens;
      c.multi_hypothesis += n_cands > 1;
      if (unknown) {
        ++c.unknown;
        c.correct_unknown += correct;
      } else if (n_cands > 1) {
        ++c.ambiguous_known;
        c.correct_ambiguous += correct;
      } else {
        ++c.unambiguous_known;
        c.correct_unambiguous += correct;
      }
    }
  }
  if (c.unknown + c.ambiguous_known + c.unambiguous_known != c.tokens)
    throw InvariantError("token categories do not partition the test set");

  EvalReport r;
  r.tagset_size = model.tag_count();
  r.ambiguity = {c.multi_hypothesis, c.tokens};
  if (c.ambiguous_known) r.ambiguous_accuracy = Ratio{c.correct_ambiguous, c.ambiguous_known};
  if (c.unknown) r.unknown_accuracy = Ratio{c.correct_unknown, c.unknown};
  r.overall_accuracy = Ratio{c.correct(), c.tokens};
  r.counts = c;
  return r;
}

std::vector<std::vector<std::string>> tag_corpus(const HmmModel& model, const TaggedCorpus& corpus,
                                                 const Guesser* guesser) {
  std::vector<std::vector<std::string>> out;
  out.reserve(corpus.sentence_count());
  for (const auto& s : corpus.sentences()) out.push_back(viterbi_tags(model, s, guesser));
  return out;
}

EvalReport run_experiment(const TaggedCorpus& corpus, const ReductionScheme& scheme, SplitMode mode,
                          const ExperimentConfig& config) {
  const auto reduced = apply_scheme(corpus, scheme);
  std::size_t sample = config.sample_size;
  if (sample == 0) sample = std::max<std::size_t>(1, (corpus.token_count() + 19) / 20);
  const auto parts = split_corpus(reduced, config.train_fraction, mode, sample);

  const auto closed = scheme.reduce_closed(corpus.tags(), config.closed);
  const auto model = train(parts.train, config.smoothing, closed);

  std::optional<Guesser> guesser;
  if (config.guesser) guesser = config.guesser->relabeled([&](const std::string& t) { return scheme.reduce_tag(t); });
  const Guesser* g = guesser ? &*guesser : nullptr;

  auto report = evaluate(parts.test, tag_corpus(model, parts.test, g), model, g);
  report.scheme_code = scheme.code();
  if (mode == SplitMode::in_sample) report.unknown_accuracy.reset();
  return report;
}

std::vector<EvalReport> sweep(const TaggedCorpus& corpus, const FeatureRules& rules,
                              const std::vector<std::string>& codes, SplitMode mode, const ExperimentConfig& config,
                              std::size_t workers) {
  if (codes.empty()) throw UsageError("no scheme codes to run");
  std::vector<ReductionScheme> schemes;
  schemes.reserve(codes.size());
  for (const auto& code : codes) schemes.emplace_back(rules, code);

  std::vector<std::optional<EvalReport>> results(codes.size());
  std::vector<std::exception_ptr> errors(codes.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto work = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= codes.size()) return;
      try {
        results[i] = run_experiment(corpus, schemes[i], mode, config);
        results[i]->index = i + 1;
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, codes.size());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (!errors[i]) continue;
    const std::string where = "scheme " + codes[i] + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const UsageError& e) {
      throw UsageError(where + e.what());
    } catch (const InvariantError& e) {
      throw InvariantError(where + e.what());
    } catch (const std::exception& e) {
      throw DataError(where + e.what());
    }
  }
  std::vector<EvalReport> out;
  out.reserve(results.size());
  for (auto& r : results) {
    if (!r) throw DataError("sweep aborted before every scheme ran");
    out.push_back(std::move(*r));
  }
  return out;
}

}  // namespace tagbench
