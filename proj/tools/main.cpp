#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tarkit/corpus.hpp"
#include "tarkit/csv.hpp"
#include "tarkit/error.hpp"
#include "tarkit/evaluation.hpp"
#include "tarkit/hash.hpp"
#include "tarkit/sweep.hpp"
#include "tarkit/version.hpp"

namespace {

using namespace tarkit;

Corpus load(const std::string& path, const std::string& format) {
  if (format == "auto") return load_dataset(path);
  return load_dataset(path, format == "csv" ? DatasetFormat::csv : DatasetFormat::jsonl);
}

int default_workers() {
  if (const char* env = std::getenv("TARKIT_WORKERS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end && *end == '\0' && n >= 1) return static_cast<int>(n);
    throw ParameterError("TARKIT_WORKERS must be a positive integer, got \"" +
                         std::string(env) + "\"");
  }
  return 1;
}

// Sidecar describing a derived output: where it came from and how.
std::string derived_manifest(const std::string& input_path, const nlohmann::json& command) {
  nlohmann::json manifest;
  manifest["tool"] = {{"name", kToolName}, {"version", kVersion}};
  manifest["input"] = {{"path", input_path},
                       {"checksum_fnv1a64", to_hex(fnv1a64_file(input_path))}};
  manifest["command"] = command;
  return manifest.dump(2) + "\n";
}

void emit(const std::string& out_path, const std::string& content,
          const std::string& manifest) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write " + out_path);
  out << content;
  if (!manifest.empty()) {
    std::ofstream side(out_path + ".manifest.json", std::ios::binary);
    if (!side) throw Error("cannot write " + out_path + ".manifest.json");
    side << manifest;
  }
}

std::string aggregate_csv(const AggregateReport& report) {
  std::ostringstream out;
  out << report.dimension << ",rows,avg_pct_reviewed";
  for (double t : report.targets) out << ",pct_reviewed_r" << csv::format_double(t * 100.0);
  for (double t : report.targets) out << ",precision_r" << csv::format_double(t * 100.0);
  out << '\n';
  for (const AggregateReport::Row& row : report.rows) {
    out << csv::escape(row.value) << ',' << row.rows << ','
        << csv::format_double(row.avg_percent_reviewed);
    for (double v : row.percent_reviewed) out << ',' << csv::format_double(v);
    for (double v : row.precision) out << ',' << csv::format_double(v);
    out << '\n';
  }
  return out.str();
}

// Figure-6-shaped layout: one parameter per row, strongest/weakest columns.
std::string extremes_csv(const ExtremesReport& report) {
  const std::string suffix = csv::format_double(report.recall * 100.0);
  auto config_fields = [](const ExperimentConfig& c) {
    return std::vector<std::string>{
        c.stemming ? "yes" : "no",     std::to_string(c.token_count),
        std::to_string(c.ngram_order), csv::format_double(c.sampling_percentage),
        to_string(c.value_type),       to_string(c.algorithm)};
  };
  const std::vector<std::string> names = {"stemming", "tokens",     "ngrams",
                                          "sampling", "value_type", "algorithm"};
  const auto best = config_fields(report.best.config);
  const auto worst = config_fields(report.worst.config);

  std::ostringstream out;
  out << "field,strongest,weakest\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    out << names[i] << ',' << best[i] << ',' << worst[i] << '\n';
  out << "precision_at_r" << suffix << ',' << csv::format_double(report.best_precision)
      << ',' << csv::format_double(report.worst_precision) << '\n';
  out << "pct_reviewed_at_r" << suffix << ','
      << csv::format_double(report.best_percent_reviewed) << ','
      << csv::format_double(report.worst_percent_reviewed) << '\n';
  return out.str();
}

int cmd_stats(const std::string& dataset, const std::string& format) {
  Corpus corpus = load(dataset, format);
  ClassDistribution dist = dataset_stats(corpus);
  std::cout << "dataset: " << corpus.name() << '\n'
            << "training relevant: " << dist.training_relevant << '\n'
            << "training not relevant: " << dist.training_not_relevant << '\n'
            << "validation relevant: " << dist.validation_relevant << '\n'
            << "validation not relevant: " << dist.validation_not_relevant << '\n'
            << "total: " << dist.total() << '\n';
  return 0;
}

struct RunFlags {
  std::string dataset;
  std::string format = "auto";
  bool stemming = false;
  int ngrams = 1;
  std::string value_type = "ntf";
  int tokens = 10000;
  double sampling = 100.0;
  std::string algorithm = "lr";
  std::uint64_t seed = 42;
  double cost = 1.0;
  double tolerance = 0.0;
  int max_iterations = 1000;
  std::string dump_vocab, dump_model, dump_curve;
};

int cmd_run(const RunFlags& flags) {
  Corpus corpus = load(flags.dataset, flags.format);

  ExperimentConfig config;
  config.stemming = flags.stemming;
  config.ngram_order = flags.ngrams;
  config.value_type = parse_token_value_type(flags.value_type);
  config.token_count = flags.tokens;
  config.sampling_percentage = flags.sampling;
  config.algorithm = parse_algorithm(flags.algorithm);
  config.seed = flags.seed;
  config.cost = flags.cost;
  config.tolerance =
      flags.tolerance > 0 ? flags.tolerance : default_tolerance(config.algorithm);
  config.max_iterations = flags.max_iterations;

  const RecallTargets targets = default_recall_targets();

  // Audit dumps rebuild the pipeline stages explicitly; the metrics below
  // come from the same run_experiment path the sweep uses.
  if (!flags.dump_vocab.empty() || !flags.dump_model.empty() || !flags.dump_curve.empty()) {
    require_trainable(corpus);
    PreprocessCache cache(corpus);
    auto prepared = cache.get(config.stemming, config.ngram_order);
    if (!flags.dump_vocab.empty()) {
      std::ofstream out(flags.dump_vocab, std::ios::binary);
      if (!out) throw Error("cannot write " + flags.dump_vocab);
      dump_vocabulary_csv(prepared->vocabulary, prepared->ig, out);
    }
    if (!flags.dump_model.empty() || !flags.dump_curve.empty()) {
      ReducedVocabulary reduced =
          select_top_k(prepared->vocabulary, prepared->ig, prepared->ranking,
                       static_cast<std::size_t>(config.token_count));
      std::vector<SparseVector> train_vectors;
      std::vector<int> train_labels;
      for (std::size_t i : down_sample_indices(prepared->training_labels,
                                               {config.sampling_percentage, config.seed})) {
        train_vectors.push_back(
            vectorize_interned(prepared->training_grams[i], reduced, config.value_type));
        train_labels.push_back(prepared->training_labels[i] == Label::relevant ? 1 : -1);
      }
      TrainedModel model = train(train_vectors, train_labels, reduced.size(),
                                 config.algorithm,
                                 {config.cost, config.tolerance, config.max_iterations});
      if (!flags.dump_model.empty()) {
        std::ofstream out(flags.dump_model, std::ios::binary);
        if (!out) throw Error("cannot write " + flags.dump_model);
        dump_model_csv(model, reduced, out);
      }
      if (!flags.dump_curve.empty()) {
        std::vector<RankedDocument> ranked;
        for (std::size_t v = 0; v < prepared->validation_ids.size(); ++v) {
          SparseVector vec =
              vectorize_interned(prepared->validation_grams[v], reduced, config.value_type);
          ranked.push_back({prepared->validation_ids[v], score(model, vec),
                            prepared->validation_relevant[v]});
        }
        std::ofstream out(flags.dump_curve, std::ios::binary);
        if (!out) throw Error("cannot write " + flags.dump_curve);
        dump_curve_csv(ReviewCurve::from_ranked(std::move(ranked)), out);
      }
    }
  }

  ExperimentResult result = run_experiment(config, corpus, targets, nullptr);

  std::cout << "config: " << config.describe() << " c=" << csv::format_double(config.cost)
            << " tol=" << csv::format_double(config.tolerance)
            << " max_iter=" << config.max_iterations << '\n';
  std::cout << "vocabulary: " << result.vocabulary_size << " tokens, "
            << result.selected_tokens << " selected\n";
  std::cout << "training: " << result.training_docs << " documents after sampling, "
            << (result.converged ? "converged" : "stopped") << " after "
            << result.iterations << " iterations\n";
  std::cout << "recall,pct_reviewed,precision\n";
  for (std::size_t t = 0; t < targets.size(); ++t)
    std::cout << csv::format_double(targets[t] * 100.0) << "%,"
              << csv::format_double(result.percent_reviewed[t]) << ','
              << csv::format_double(result.precision[t]) << '\n';
  std::cout << "avg_pct_reviewed: " << csv::format_double(result.avg_percent_reviewed)
            << '\n';
  return 0;
}

int cmd_sweep(const std::string& dataset, const std::string& format,
              const std::string& grid_path, const std::string& out_path, int workers,
              bool resume, std::optional<std::uint64_t> seed) {
  Corpus corpus = load(dataset, format);
  ParameterGrid grid;
  if (!grid_path.empty()) grid = parse_grid_file(grid_path);
  if (seed) grid.seed = *seed;

  SweepOptions options;
  options.workers = workers;
  options.output_csv = out_path;
  options.resume = resume;

  std::size_t last_logged = 0;
  options.progress = [&last_logged](std::size_t done, std::size_t all) {
    if (done == all || done - last_logged >= std::max<std::size_t>(1, all / 20)) {
      std::cerr << "sweep: " << done << '/' << all << " experiments\n";
      last_logged = done;
    }
  };

  std::cerr << "sweep: " << grid.size() << " configurations, " << workers << " worker(s)\n";
  ResultTable table = run_sweep(grid, corpus, options);

  const std::size_t failed = table.failed_count();
  std::cerr << "sweep: wrote " << table.rows.size() << " rows to " << out_path;
  if (failed) std::cerr << " (" << failed << " failed)";
  std::cerr << '\n';
  return failed == 0 ? 0 : 1;
}

int cmd_report(const std::string& results_path, const std::string& dimension,
               const std::string& out_path) {
  ResultTable table = load_result_table(results_path);
  AggregateReport report = aggregate_by_parameter(table, dimension);
  if (report.excluded_failures)
    std::cerr << "report: excluded " << report.excluded_failures << " failed rows\n";
  emit(out_path, aggregate_csv(report),
       out_path.empty() ? ""
                        : derived_manifest(results_path, {{"subcommand", "report"},
                                                          {"by", dimension}}));
  return 0;
}

int cmd_extremes(const std::string& results_path, double recall,
                 const std::string& out_path) {
  ResultTable table = load_result_table(results_path);
  ExtremesReport report = extreme_combinations(table, recall);
  emit(out_path, extremes_csv(report),
       out_path.empty() ? ""
                        : derived_manifest(results_path, {{"subcommand", "extremes"},
                                                          {"recall", recall}}));
  return 0;
}

int cmd_plot_data(const std::string& results_path, int figure, const std::string& out_path) {
  ResultTable table = load_result_table(results_path);
  std::string content;
  switch (figure) {
    case 1: content = aggregate_csv(aggregate_by_parameter(table, "value_type")); break;
    case 2: content = aggregate_csv(aggregate_by_parameter(table, "algorithm")); break;
    case 3:
    case 4:
    case 5: content = aggregate_csv(aggregate_by_parameter(table, "sampling")); break;
    case 6: content = extremes_csv(extreme_combinations(table, 0.8)); break;
    default: throw ParameterError("figure must be 1..6, got " + std::to_string(figure));
  }
  emit(out_path, content,
       out_path.empty() ? ""
                        : derived_manifest(results_path, {{"subcommand", "plot-data"},
                                                          {"figure", figure}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"text categorization experiments for technology-assisted review"};
  app.set_version_flag("--version", std::string(kToolName) + " " + std::string(kVersion));
  app.require_subcommand(1);

  std::string dataset, format = "auto", out_path, grid_path, results_path, dimension;
  double recall = 0.8;
  int figure = 0;
  int workers = 0;
  bool resume = false;
  std::optional<std::uint64_t> seed_override;
  RunFlags run_flags;

  auto add_format = [&format](CLI::App* cmd) {
    cmd->add_option("--format", format, "dataset format: auto, jsonl or csv")
        ->check(CLI::IsMember({"auto", "jsonl", "csv"}))
        ->capture_default_str();
  };

  CLI::App* stats = app.add_subcommand("stats", "class distribution of a dataset");
  stats->add_option("dataset", dataset, "dataset file (.jsonl or .csv)")->required();
  add_format(stats);

  CLI::App* run = app.add_subcommand("run", "run a single experiment and print its metrics");
  run->add_option("dataset", run_flags.dataset, "dataset file (.jsonl or .csv)")->required();
  run->add_flag("--stemming", run_flags.stemming, "apply Porter stemming");
  run->add_option("--ngrams", run_flags.ngrams, "emit all grams of order 1..n")
      ->capture_default_str();
  run->add_option("--value-type", run_flags.value_type,
                  "token value: binary, frequency, ntf or tfidf")
      ->check(CLI::IsMember({"binary", "frequency", "ntf", "tfidf"}))
      ->capture_default_str();
  run->add_option("--tokens", run_flags.tokens, "number of top information-gain tokens")
      ->capture_default_str();
  run->add_option("--sampling", run_flags.sampling,
                  "percentage of negative training documents kept")
      ->capture_default_str();
  run->add_option("--algorithm", run_flags.algorithm, "learner: svm or lr")
      ->check(CLI::IsMember({"svm", "lr"}))
      ->capture_default_str();
  run->add_option("--seed", run_flags.seed, "down-sampling seed")->capture_default_str();
  run->add_option("--c", run_flags.cost, "regularization parameter C")
      ->capture_default_str();
  run->add_option("--tol", run_flags.tolerance,
                  "stopping tolerance (0 = per-algorithm default: 0.0001 lr gradient "
                  "norm, 0.001 svm relative improvement)")
      ->capture_default_str();
  run->add_option("--max-iter", run_flags.max_iterations, "iteration cap")
      ->capture_default_str();
  run->add_option("--dump-vocab", run_flags.dump_vocab, "write vocabulary audit CSV");
  run->add_option("--dump-model", run_flags.dump_model, "write model weights CSV");
  run->add_option("--dump-curve", run_flags.dump_curve, "write ranked review curve CSV");
  run->add_option("--format", run_flags.format, "dataset format: auto, jsonl or csv")
      ->check(CLI::IsMember({"auto", "jsonl", "csv"}))
      ->capture_default_str();

  CLI::App* sweep = app.add_subcommand("sweep", "run the full parameter grid");
  sweep->add_option("dataset", dataset, "dataset file (.jsonl or .csv)")->required();
  sweep->add_option("--grid", grid_path,
                    "grid file (key = v1, v2 lines); defaults to the full built-in grid");
  sweep->add_option("--out", out_path, "result table CSV (manifest written beside it)")
      ->required();
  sweep->add_option("--workers", workers,
                    "parallel experiments (default: TARKIT_WORKERS or 1)");
  sweep->add_flag("--resume", resume, "skip configs already present in the output file");
  sweep->add_option("--seed", seed_override, "override the grid seed");
  add_format(sweep);

  CLI::App* report = app.add_subcommand("report", "mean metrics per value of one dimension");
  report->add_option("results", results_path, "sweep result CSV")->required();
  report->add_option("--by", dimension,
                     "stemming, ngrams, value_type, tokens, sampling or algorithm")
      ->required();
  report->add_option("--out", out_path, "output CSV (default: stdout)");

  CLI::App* extremes = app.add_subcommand("extremes",
                                          "best and worst configuration at a recall target");
  extremes->add_option("results", results_path, "sweep result CSV")->required();
  extremes->add_option("--recall", recall, "recall target")->capture_default_str();
  extremes->add_option("--out", out_path, "output CSV (default: stdout)");

  CLI::App* plot = app.add_subcommand("plot-data", "CSV series behind one report figure");
  plot->add_option("results", results_path, "sweep result CSV")->required();
  plot->add_option("--figure", figure,
                   "1: value types, 2: algorithms, 3-5: down sampling, 6: extremes")
      ->required()
      ->check(CLI::Range(1, 6));
  plot->add_option("--out", out_path, "output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (stats->parsed()) return cmd_stats(dataset, format);
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) {
      if (workers == 0) workers = default_workers();
      if (workers < 1) throw ParameterError("--workers must be >= 1");
      return cmd_sweep(dataset, format, grid_path, out_path, workers, resume, seed_override);
    }
    if (report->parsed()) return cmd_report(results_path, dimension, out_path);
    if (extremes->parsed()) return cmd_extremes(results_path, recall, out_path);
    if (plot->parsed()) return cmd_plot_data(results_path, figure, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
