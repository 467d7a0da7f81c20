#include "tagbench/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "tagbench/corpus.hpp"
#include "tagbench/error.hpp"
#include "tagbench/experiment.hpp"
#include "tagbench/hmm.hpp"
#include "tagbench/report.hpp"
#include "tagbench/synthetic.hpp"
#include "tagbench/tagset.hpp"
#include "tagbench/unknown.hpp"
#include "tagbench/util.hpp"
#include "tagbench/viterbi.hpp"

namespace tagbench::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string corpus, model, rules, closed, guesser, codes = "all", mode = "held_out", out, plot_out, format = "tsv";
  double split = 0.95;
  std::size_t sample_size = 0;
  bool no_smoothing = false;
  bool strict = false;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  SyntheticSpec synth;
  std::string axes = "G:2,N:2";
};

void require_input(const std::string& path, const char* what) {
  if (path.empty()) return;
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw DataError(std::string(what) + " file not found: " + path);
}

void require_output(const std::string& path) {
  if (path.empty()) return;
  const auto parent = fs::absolute(fs::path(path)).parent_path();
  std::error_code ec;
  if (!fs::is_directory(parent, ec)) throw DataError("output directory does not exist: " + parent.string());
}

TaggedCorpus load_corpus(const Options& o, std::ostream& err, bool require_tags = true) {
  auto parsed = parse_corpus_file(o.corpus, o.strict ? Strictness::strict : Strictness::lenient, require_tags);
  if (!parsed.skipped.empty()) {
    err << "warning: skipped " << parsed.skipped.size() << " malformed line(s) in " << o.corpus;
    for (std::size_t i = 0; i < parsed.skipped.size() && i < 5; ++i)
      err << (i ? ", " : ": ") << "line " << parsed.skipped[i].line << " (" << parsed.skipped[i].reason << ")";
    err << '\n';
  }
  return std::move(parsed.corpus);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_file_atomic(path, text);
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  require_input(o.corpus, "corpus");
  require_input(o.closed, "closed-class");
  require_output(o.out);
  const auto corpus = load_corpus(o, err);
  std::set<std::string> closed;
  if (!o.closed.empty()) closed = read_closed_class_file(o.closed);
  std::vector<std::string> warnings;
  tagset_of(corpus, closed, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  const auto model = train(corpus, !o.no_smoothing, closed);
  write_file_atomic(o.out, serialize_model(model));
  out << "tags\t" << model.tag_count() << '\n'
      << "closed_tags\t" << model.tagset().closed().size() << '\n'
      << "tokens\t" << corpus.token_count() << '\n'
      << "sentences\t" << corpus.sentence_count() << '\n';
  return kOk;
}

int cmd_tag(const Options& o, std::ostream& out, std::ostream& err) {
  require_input(o.model, "model");
  require_input(o.corpus, "corpus");
  require_input(o.guesser, "guesser");
  require_output(o.out);
  const auto model = read_model_file(o.model);
  std::optional<Guesser> guesser;
  if (!o.guesser.empty()) {
    guesser = parse_guesser_file(o.guesser);
    guesser->validate(model.tagset());
  }
  const auto input = load_corpus(o, err, false);
  std::ostringstream text;
  for (const auto& s : input.sentences()) {
    const auto tags = viterbi_tags(model, s, guesser ? &*guesser : nullptr);
    for (std::size_t i = 0; i < s.size(); ++i) text << s.tokens[i].surface << '\t' << tags[i] << '\n';
    text << '\n';
  }
  emit(o.out, text.str(), out);
  return kOk;
}

SplitMode parse_mode(const std::string& mode) {
  if (mode == "held_out") return SplitMode::held_out;
  if (mode == "in_sample") return SplitMode::in_sample;
  throw UsageError("--mode must be in_sample or held_out");
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  require_input(o.corpus, "corpus");
  require_input(o.rules, "rules");
  require_input(o.closed, "closed-class");
  require_input(o.guesser, "guesser");
  require_output(o.out);
  require_output(o.plot_out);
  const auto mode = parse_mode(o.mode);
  ReportFormat format;
  if (o.format == "tsv") format = ReportFormat::tsv;
  else if (o.format == "pretty") format = ReportFormat::pretty;
  else throw UsageError("--format must be tsv or pretty");

  const auto rules = parse_scheme_path(o.rules);
  if (rules.size() == 0) throw DataError("rule file declares no features");
  std::vector<std::string> codes;
  if (o.codes == "all") {
    codes = scheme_code_enumerate(rules.letters());
  } else {
    for (auto c : split(o.codes, ',')) codes.emplace_back(trim(c));
  }
  for (const auto& c : codes) ReductionScheme(rules, c);  // reject bad codes before any work

  ExperimentConfig config;
  config.train_fraction = o.split;
  config.sample_size = o.sample_size;
  config.smoothing = !o.no_smoothing;
  if (!o.closed.empty()) config.closed = read_closed_class_file(o.closed);
  if (!o.guesser.empty()) config.guesser = parse_guesser_file(o.guesser);

  const auto corpus = load_corpus(o, err);
  const auto reports = sweep(corpus, rules, codes, mode, config, o.workers);
  emit(o.out, emit_report(reports, format), out);
  if (!o.plot_out.empty()) write_file_atomic(o.plot_out, emit_report(reports, ReportFormat::plot_points));
  return kOk;
}

int cmd_analyze_unknowns(const Options& o, std::ostream& out, std::ostream& err) {
  require_input(o.corpus, "corpus");
  require_output(o.out);
  const auto corpus = load_corpus(o, err);
  const auto parts = split_corpus(corpus, o.split, SplitMode::held_out);
  const auto analysis = analyze_unknown_words(build_lexicon(corpus), build_lexicon(parts.train), parts.test);
  emit(o.out, render_unknown_analysis(analysis), out);
  return kOk;
}

int cmd_synth(Options o, std::ostream& out, std::ostream&) {
  require_output(o.out);
  o.synth.axes = parse_axes(o.axes);
  o.synth.seed = o.seed;
  const auto result = generate_synthetic_corpus(o.synth);
  std::ostringstream truth;
  write_truth(truth, result.truth);
  write_file_atomic(o.out + ".truth", truth.str());
  write_file_atomic(o.out + ".rules", result.rules_text);
  write_file_atomic(o.out, serialize_corpus(result.corpus));
  out << "tags\t" << result.corpus.tags().size() << '\n'
      << "tokens\t" << result.corpus.token_count() << '\n'
      << "sentences\t" << result.corpus.sentence_count() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"HMM tagger and tagset-reduction experiment toolkit", "tagbench"};
  app.require_subcommand(1);
  Options o;

  auto* train_cmd = app.add_subcommand("train", "Train an HMM tagger from a tagged corpus");
  train_cmd->add_option("--corpus", o.corpus, "Tagged corpus (surface<TAB>tag lines)")->required();
  train_cmd->add_option("--out", o.out, "Model file to write")->required();
  train_cmd->add_option("--closed", o.closed, "Closed-class tag list");
  train_cmd->add_flag("--no-smoothing", o.no_smoothing,
                      "Disable the add-one (\"Good-Turing\") transition correction");
  train_cmd->add_flag("--strict", o.strict, "Fail on malformed corpus lines instead of skipping them");

  auto* tag_cmd = app.add_subcommand("tag", "Tag a corpus with a trained model");
  tag_cmd->add_option("--model", o.model, "Model file")->required();
  tag_cmd->add_option("--corpus", o.corpus, "Input, one token per line, tags optional")->required();
  tag_cmd->add_option("--guesser", o.guesser, "Unknown-word guesser rules");
  tag_cmd->add_option("--out", o.out, "Output file (default: standard output)");
  tag_cmd->add_flag("--strict", o.strict, "Fail on malformed input lines");

  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate the tagger under several reduction schemes");
  sweep_cmd->add_option("--corpus", o.corpus, "Tagged corpus")->required();
  sweep_cmd->add_option("--rules", o.rules, "Reduction rule file")->required();
  sweep_cmd->add_option("--closed", o.closed, "Closed-class tag list (unreduced tags)");
  sweep_cmd->add_option("--guesser", o.guesser, "Unknown-word guesser rules (unreduced tags)");
  sweep_cmd->add_option("--codes", o.codes, "'all' or a comma-separated list such as GNDC,gNDC");
  sweep_cmd->add_option("--mode", o.mode, "held_out or in_sample");
  sweep_cmd->add_option("--split", o.split, "Training fraction for held_out");
  sweep_cmd->add_option("--sample-size", o.sample_size, "Test tokens for in_sample (default 5% of the corpus)");
  sweep_cmd->add_flag("--no-smoothing", o.no_smoothing, "Disable the add-one transition correction");
  sweep_cmd->add_option("--workers", o.workers, "Parallel variants")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", o.out, "Report file (default: standard output)");
  sweep_cmd->add_option("--plot-out", o.plot_out, "tagset_size,accuracy_pct,index points");
  sweep_cmd->add_option("--format", o.format, "tsv or pretty");
  sweep_cmd->add_flag("--strict", o.strict, "Fail on malformed corpus lines");

  auto* unk_cmd = app.add_subcommand("analyze-unknowns", "Look up held-out unknown words in the full lexicon");
  unk_cmd->add_option("--corpus", o.corpus, "Tagged corpus")->required();
  unk_cmd->add_option("--split", o.split, "Training fraction");
  unk_cmd->add_option("--out", o.out, "Output file (default: standard output)");
  unk_cmd->add_flag("--strict", o.strict, "Fail on malformed corpus lines");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic tagged corpus from a random HMM");
  synth_cmd->add_option("--out", o.out, "Corpus file; .truth and .rules sidecars are written next to it")->required();
  synth_cmd->add_option("--seed", o.seed, "Random seed");
  synth_cmd->add_option("--tokens", o.synth.tokens, "Token count");
  synth_cmd->add_option("--base-tags", o.synth.base_tags, "Number of base tags");
  synth_cmd->add_option("--axes", o.axes, "Feature axes, e.g. G:2,N:2");
  synth_cmd->add_option("--vocab", o.synth.vocabulary, "Vocabulary size");
  synth_cmd->add_option("--ambiguity", o.synth.ambiguity, "Target share of ambiguous tokens in [0,1)");
  synth_cmd->add_option("--min-len", o.synth.min_sentence_length, "Minimum sentence length");
  synth_cmd->add_option("--max-len", o.synth.max_sentence_length, "Maximum sentence length");
  synth_cmd->add_flag("--suffix-tags", o.synth.suffix_marks_tag, "End each unambiguous word in a tag-specific suffix");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train_cmd) return cmd_train(o, out, err);
    if (*tag_cmd) return cmd_tag(o, out, err);
    if (*sweep_cmd) return cmd_sweep(o, out, err);
    if (*unk_cmd) return cmd_analyze_unknowns(o, out, err);
    if (*synth_cmd) return cmd_synth(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace tagbench::cli
