#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "milie/eval.hpp"
#include "milie/jsonl.hpp"
#include "milie/runner.hpp"
#include "milie/traindata.hpp"

namespace {

using namespace milie;

// Input problems exit 2, model problems exit 3.
int guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

// Any failure to produce a usable model is a model error, whatever layer it
// surfaced from.
std::unique_ptr<Tagger> load_model_cli(const std::string& path) {
  try {
    return load_model_file(path);
  } catch (const ModelError&) {
    throw;
  } catch (const Error& e) {
    throw ModelError(e.what());
  }
}

std::vector<Pathway> parse_pathways(const std::string& text) {
  if (text == "all")
    return {kAllPathways.begin(), kAllPathways.end()};
  std::vector<Pathway> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t comma = text.find(',', begin);
    std::size_t end = comma == std::string::npos ? text.size() : comma;
    out.push_back(pathway_from_name(text.substr(begin, end - begin)));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  if (out.empty()) throw FormatError("no pathways selected");
  return out;
}

struct TraindataArgs {
  std::string gold;
  std::string output;
  std::uint64_t seed = 1;
  std::size_t negatives_per_instance = 2;
  double negative_fraction = 1.0;
  std::size_t max_len = kDefaultMaxLen;
};

void run_traindata(const TraindataArgs& args) {
  auto records = read_gold_records(args.gold, args.max_len);
  SamplerConfig config;
  config.seed = args.seed;
  config.negatives_per_instance = args.negatives_per_instance;
  config.negative_fraction = args.negative_fraction;
  SamplerDiagnostics diag;
  std::vector<TrainingInstance> instances;
  for (const GoldRecord& record : records) {
    auto positives = generate(record, config, &diag);
    std::move(positives.begin(), positives.end(), std::back_inserter(instances));
    auto corrupted = negatives(record, config, &diag);
    std::move(corrupted.begin(), corrupted.end(), std::back_inserter(instances));
  }
  write_instances(args.output, instances);
  if (diag.length_skips || diag.negative_failures)
    std::cerr << "traindata: skipped " << diag.length_skips
              << " overlong instance(s), " << diag.negative_failures
              << " failed corruption(s)\n";
}

struct TrainArgs {
  std::string instances;
  std::string output;
  std::uint64_t seed = 1;
  int epochs = 2;
  double learning_rate = 0.1;
  double negative_weight = 1.0;
};

void run_train(const TrainArgs& args) {
  auto instances = read_instances(args.instances);
  TrainConfig config;
  config.seed = args.seed;
  config.epochs = args.epochs;
  config.learning_rate = args.learning_rate;
  config.negative_weight = args.negative_weight;
  auto model = train_window_tagger(instances, config);
  save_model_file(*model, args.output);
  std::cerr << "train: " << instances.size() << " instance(s), "
            << model->feature_count() << " feature(s)\n";
}

struct OracleArgs {
  std::string gold;
  std::string output;
  std::size_t max_len = kDefaultMaxLen;
};

void run_oracle(const OracleArgs& args) {
  auto model = oracle_from_gold(read_gold_records(args.gold, args.max_len));
  save_model_file(*model, args.output);
}

struct ExtractArgs {
  std::string sentences;
  std::string model;
  std::string output;
  std::string pathways = "all";
  std::string aggregate = "wf";
  int min_votes = 1;
  bool binarize = false;
  int jobs = 0;
  std::size_t max_branch = 8;
  std::size_t max_triples = 64;
  std::size_t max_len = kDefaultMaxLen;
};

void run_extract(const ExtractArgs& args) {
  auto sentences = read_sentences(args.sentences, args.max_len);
  PipelineOptions options;
  options.pathways = parse_pathways(args.pathways);
  options.aggregate = args.aggregate == "wf";
  options.min_votes = args.min_votes;
  options.binarize = args.binarize;
  options.limits.max_branch = args.max_branch;
  options.limits.max_triples = args.max_triples;
  options.max_len = args.max_len;
  auto model = load_model_cli(args.model);

  auto results = run_corpus_parallel(sentences, *model, options, args.jobs);
  std::vector<SentenceTriple> triples;
  ExtractDiagnostics extract_diag;
  PostDiagnostics post_diag;
  for (SentenceResult& r : results) {
    std::move(r.triples.begin(), r.triples.end(), std::back_inserter(triples));
    extract_diag.merge(r.extract_diag);
    post_diag.merge(r.post_diag);
  }
  write_triples(args.output, triples);
  if (extract_diag.length_overflows || extract_diag.dropped_overlaps ||
      extract_diag.truncated_spans || extract_diag.capped_triples)
    std::cerr << "extract: " << extract_diag.length_overflows
              << " overflow(s), " << extract_diag.dropped_overlaps
              << " overlap(s), " << extract_diag.truncated_spans
              << " truncated span(s), " << extract_diag.capped_triples
              << " capped triple(s)\n";
  if (post_diag.skipped_args)
    std::cerr << "binarize: skipped " << post_diag.skipped_args
              << " argument(s)\n";
}

struct CompleteArgs {
  std::string sentences;
  std::string priors;
  std::string model;
  std::string output;
  std::size_t max_branch = 8;
  std::size_t max_triples = 64;
  std::size_t max_len = kDefaultMaxLen;
};

void run_complete(const CompleteArgs& args) {
  auto sentences = read_sentences(args.sentences, args.max_len);
  std::unordered_map<std::string, const Sentence*> by_id;
  for (const Sentence& s : sentences) by_id.emplace(s.id, &s);
  auto priors = read_priors(args.priors);
  auto model = load_model_cli(args.model);

  DecodeLimits limits{args.max_branch, args.max_triples};
  std::vector<SentenceTriple> triples;
  std::size_t skipped = 0;
  for (const Prior& prior : priors) {
    auto it = by_id.find(prior.sentence_id);
    if (it == by_id.end())
      throw DataError("prior references unknown sentence id '" +
                      prior.sentence_id + "'");
    auto resolved = resolve_prior(prior, *it->second);
    if (!resolved) {
      ++skipped;
      continue;
    }
    for (Triple& t :
         complete(*it->second, *resolved, *model, limits, args.max_len))
      triples.push_back({prior.sentence_id, std::move(t)});
  }
  write_triples(args.output, triples);
  if (skipped) std::cerr << "complete: skipped " << skipped << " prior(s)\n";
}

struct ScoreArgs {
  std::string preds;
  std::string gold;
  std::string sentences;
  std::string metric = "benchie";
  std::string output;
  bool table = false;
};

void run_score(const ScoreArgs& args) {
  auto preds = read_triples(args.preds);
  auto sentences = read_sentences(args.sentences);
  ScoreReport report;
  if (args.metric == "benchie")
    report = score_benchie(preds, read_fact_synsets(args.gold), sentences);
  else if (args.metric == "carb")
    report = score_carb(preds, read_triples(args.gold), sentences);
  else
    report = score_lexical(preds, read_triples(args.gold), sentences);

  std::string json_line = report_to_json(report).dump() + "\n";
  if (!args.output.empty()) {
    std::ofstream out(args.output, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + args.output + "' for writing");
    out << json_line;
  }
  if (args.table)
    std::cout << report_table_text(report);
  else if (args.output.empty())
    std::cout << json_line;
}

struct EntropyArgs {
  std::string gold;
  std::string output;
  bool no_pos = false;
  bool table = false;
  std::size_t max_len = kDefaultMaxLen;
};

void run_entropy(const EntropyArgs& args) {
  auto gold = read_gold_records(args.gold, args.max_len);
  EntropyTable result = entropy_profile(gold, !args.no_pos);
  std::string json_line = entropy_to_json(result).dump() + "\n";
  if (!args.output.empty()) {
    std::ofstream out(args.output, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + args.output + "' for writing");
    out << json_line;
  }
  if (args.table)
    std::cout << entropy_table_text(result);
  else if (args.output.empty())
    std::cout << json_line;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"milie - iterative multilingual open information extraction"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value config file");
  app.set_version_flag("--version",
                       "milie 1.0 (model container MILIE-TAGGER 1, JSONL schema 1)");

  int exit_code = 0;

  TraindataArgs td;
  auto* traindata = app.add_subcommand(
      "traindata", "Generate training instances from gold extractions");
  traindata->add_option("gold", td.gold, "Gold-record JSONL")->required();
  traindata->add_option("-o,--output", td.output, "Instance JSONL")->required();
  traindata->add_option("--seed", td.seed, "Sampling seed");
  traindata->add_option("--negatives-per-instance", td.negatives_per_instance,
                        "Negatives per eligible record");
  traindata->add_option("--negative-fraction", td.negative_fraction,
                        "Fraction of records corrupted");
  traindata->add_option("--max-len", td.max_len, "Maximum rendered length");
  traindata->callback([&] { exit_code = guarded([&] { run_traindata(td); }); });

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train the window tagger");
  train->add_option("instances", tr.instances, "Instance JSONL")->required();
  train->add_option("-o,--output", tr.output, "Model file")->required();
  train->add_option("--seed", tr.seed, "Shuffle seed");
  train->add_option("--epochs", tr.epochs, "Training epochs");
  train->add_option("--learning-rate", tr.learning_rate, "SGD step size");
  train->add_option("--negative-weight", tr.negative_weight,
                    "Loss weight of negative instances");
  train->callback([&] { exit_code = guarded([&] { run_train(tr); }); });

  OracleArgs orc;
  auto* oracle = app.add_subcommand(
      "oracle", "Build a verification tagger that answers from gold");
  oracle->add_option("gold", orc.gold, "Gold-record JSONL")->required();
  oracle->add_option("-o,--output", orc.output, "Model file")->required();
  oracle->add_option("--max-len", orc.max_len, "Maximum rendered length");
  oracle->callback([&] { exit_code = guarded([&] { run_oracle(orc); }); });

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Extract triples from sentences");
  extract->add_option("sentences", ex.sentences, "Sentence JSONL")->required();
  extract->add_option("-m,--model", ex.model, "Model file")->required();
  extract->add_option("-o,--output", ex.output, "Triple JSONL")->required();
  extract->add_option("--pathways", ex.pathways,
                      "all or comma-separated pathway names (e.g. PSOA,OSPA)");
  extract->add_option("--aggregate", ex.aggregate, "wf or none")
      ->check(CLI::IsMember({"wf", "none"}));
  extract->add_option("--min-votes", ex.min_votes,
                      "Drop aggregated triples with fewer votes");
  extract->add_flag("--binarize", ex.binarize, "Re-extract arguments as binary triples");
  extract->add_option("--jobs", ex.jobs, "Worker threads (0 = runtime default)");
  extract->add_option("--max-branch", ex.max_branch, "Spans expanded per step");
  extract->add_option("--max-triples", ex.max_triples, "Triple cap per pathway");
  extract->add_option("--max-len", ex.max_len, "Maximum rendered length");
  extract->callback([&] { exit_code = guarded([&] { run_extract(ex); }); });

  CompleteArgs co;
  auto* complete_cmd = app.add_subcommand(
      "complete", "Fill in missing triple elements around partial extractions");
  complete_cmd->add_option("sentences", co.sentences, "Sentence JSONL")->required();
  complete_cmd->add_option("priors", co.priors, "Prior JSONL")->required();
  complete_cmd->add_option("-m,--model", co.model, "Model file")->required();
  complete_cmd->add_option("-o,--output", co.output, "Triple JSONL")->required();
  complete_cmd->add_option("--max-branch", co.max_branch, "Spans expanded per step");
  complete_cmd->add_option("--max-triples", co.max_triples, "Triple cap per prior");
  complete_cmd->add_option("--max-len", co.max_len, "Maximum rendered length");
  complete_cmd->callback([&] { exit_code = guarded([&] { run_complete(co); }); });

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "Score predictions against gold");
  score->add_option("preds", sc.preds, "Prediction triple JSONL")->required();
  score->add_option("-g,--gold", sc.gold,
                    "Gold file (synsets for benchie, triples otherwise)")
      ->required();
  score->add_option("-s,--sentences", sc.sentences, "Sentence JSONL")->required();
  score->add_option("--metric", sc.metric, "benchie, carb, or lexical")
      ->check(CLI::IsMember({"benchie", "carb", "lexical"}));
  score->add_option("-o,--output", sc.output, "Report JSON file");
  score->add_flag("--table", sc.table, "Print an F1/Prec./Rec. table");
  score->callback([&] { exit_code = guarded([&] { run_score(sc); }); });

  EntropyArgs en;
  auto* entropy = app.add_subcommand(
      "entropy", "Tag-entropy profile of gold element spans");
  entropy->add_option("gold", en.gold, "Gold-record JSONL")->required();
  entropy->add_option("-o,--output", en.output, "Profile JSON file");
  entropy->add_flag("--no-pos", en.no_pos, "Skip the part-of-speech family");
  entropy->add_flag("--table", en.table, "Print an aligned text table");
  entropy->add_option("--max-len", en.max_len, "Maximum rendered length");
  entropy->callback([&] { exit_code = guarded([&] { run_entropy(en); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad flags and missing arguments are input errors
  }
  return exit_code;
}
