#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tarkit/corpus.hpp"
#include "tarkit/evaluation.hpp"
#include "tarkit/features.hpp"
#include "tarkit/learners.hpp"
#include "tarkit/sampling.hpp"

namespace tarkit {

/// One experiment dimension per preprocessing parameter plus the learner
/// choice. Values are enumerated in the listed order.
struct ParameterGrid {
  std::vector<bool> stemming = {true, false};
  std::vector<int> ngram_orders = {1, 2, 3, 4};
  std::vector<TokenValueType> value_types = {
      TokenValueType::binary, TokenValueType::frequency,
      TokenValueType::normalized_term_frequency, TokenValueType::tfidf};
  std::vector<int> token_counts = {1000,  3000,  5000,  7000,  10000, 15000, 20000,
                                   25000, 30000, 35000, 40000, 45000, 50000};
  std::vector<double> sampling_percentages = {25, 50, 75, 100};
  std::vector<AlgorithmChoice> algorithms = {AlgorithmChoice::svm,
                                             AlgorithmChoice::logistic_regression};
  std::uint64_t seed = 42;
  // Learner hyperparameters shared by every cell.
  double cost = 1.0;
  double tolerance = 0.0;  // 0 selects the per-algorithm default
  int max_iterations = 1000;

  std::size_t size() const;
  /// Throws when a dimension is empty or a value is outside its domain.
  void validate() const;
};

/// Parse a flat `key = v1, v2, ...` grid file. Unknown keys and empty value
/// lists are rejected with their line number; omitted keys keep defaults.
ParameterGrid parse_grid_file(const std::filesystem::path& path);

/// One point of the grid cross-product.
struct ExperimentConfig {
  bool stemming = false;
  int ngram_order = 1;
  TokenValueType value_type = TokenValueType::normalized_term_frequency;
  int token_count = 10000;
  double sampling_percentage = 100;
  AlgorithmChoice algorithm = AlgorithmChoice::logistic_regression;
  std::uint64_t seed = 42;
  double cost = 1.0;
  double tolerance = 0.0;  // always resolved to the effective value
  int max_iterations = 1000;
  std::size_t index = 0;  // canonical position in the enumerated grid

  /// "stemming=no ngrams=1 ..." — used in error and log messages.
  std::string describe() const;
};

/// Full cross-product in canonical nested order: stemming, n-grams, value
/// type, token count, sampling, algorithm. Tolerances are resolved here.
std::vector<ExperimentConfig> enumerate_grid(const ParameterGrid& grid);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<double> percent_reviewed;  // one per recall target
  std::vector<double> precision;         // one per recall target
  double avg_percent_reviewed = 0.0;
  // Diagnostics.
  std::size_t vocabulary_size = 0;  // before selection
  std::size_t selected_tokens = 0;  // after selection
  std::size_t training_docs = 0;    // after down-sampling
  bool converged = false;
  int iterations = 0;
  double wall_seconds = 0.0;  // never serialized; runs must be byte-reproducible
  std::string error;          // empty on success

  bool failed() const { return !error.empty(); }
};

struct ResultTable {
  RecallTargets targets;
  std::vector<ExperimentResult> rows;  // canonical (grid) order

  std::size_t failed_count() const;
};

/// Preprocessing shared across every config with the same (stemming, n):
/// interned token sequences, the vocabulary, gain scores and their ranking.
/// Immutable once built; safe to share across sweep workers.
class PreprocessCache {
public:
  struct Prepared {
    std::vector<std::vector<std::int32_t>> training_grams;
    std::vector<std::vector<std::int32_t>> validation_grams;
    std::vector<Label> training_labels;
    std::vector<std::string> training_ids;
    std::vector<std::string> validation_ids;
    std::vector<bool> validation_relevant;
    Vocabulary vocabulary;
    std::vector<double> ig;
    std::vector<std::uint32_t> ranking;
  };

  explicit PreprocessCache(const Corpus& corpus) : corpus_(&corpus) {}

  /// Build-once, shared thereafter. The first caller builds; concurrent
  /// callers for the same key wait on the same future.
  std::shared_ptr<const Prepared> get(bool stemming, int ngram_order);

private:
  const Corpus* corpus_;
  std::mutex mutex_;
  std::map<std::pair<bool, int>, std::shared_future<std::shared_ptr<const Prepared>>> cache_;
};

/// Run one experiment end to end: preprocess, build vocabulary, rank by
/// information gain, select top-k, down-sample negatives, vectorize, train,
/// score the validation set and compute metrics. Throws Error with the config
/// description attached on any stage failure.
ExperimentResult run_experiment(const ExperimentConfig& config, const Corpus& corpus,
                                std::span<const double> targets, PreprocessCache* cache = nullptr);
ExperimentResult run_experiment(const ExperimentConfig& config, const Corpus& corpus);

struct SweepOptions {
  int workers = 1;
  std::filesystem::path output_csv;  // empty = in-memory only
  bool resume = false;
  RecallTargets targets = default_recall_targets();
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Execute every config exactly once. Rows are appended to the output file as
/// they finish (crash-resumable via --resume); on completion the file is
/// rewritten in canonical order, so the final bytes are independent of worker
/// count and scheduling. Failed experiments become rows with an error field.
ResultTable run_sweep(const ParameterGrid& grid, const Corpus& corpus,
                      const SweepOptions& options);

std::string result_csv_header(std::span<const double> targets);
std::string result_csv_row(const ExperimentResult& result, std::size_t target_count);
ResultTable load_result_table(const std::filesystem::path& path);

/// Mean metrics per value of one grid dimension (the per-parameter figures).
struct AggregateReport {
  struct Row {
    std::string value;
    std::size_t rows = 0;
    double avg_percent_reviewed = 0.0;
    std::vector<double> percent_reviewed;  // per target
    std::vector<double> precision;         // per target
  };
  std::string dimension;
  RecallTargets targets;
  std::vector<Row> rows;           // in order of first appearance
  std::size_t excluded_failures = 0;
};

/// dimension is one of: stemming, ngrams, value_type, tokens, sampling,
/// algorithm. Failed rows are excluded and counted.
AggregateReport aggregate_by_parameter(const ResultTable& table, const std::string& dimension);

/// Best and worst config by percent reviewed at one recall target, ties
/// broken by canonical config order.
struct ExtremesReport {
  double recall = 0.0;
  ExperimentResult best;
  ExperimentResult worst;
  double best_percent_reviewed = 0.0;
  double worst_percent_reviewed = 0.0;
  double best_precision = 0.0;
  double worst_precision = 0.0;
};

ExtremesReport extreme_combinations(const ResultTable& table, double recall);

/// Deterministic sidecar describing a sweep output: resolved grid, corpus
/// checksum, tool version, seed and row counts. Equal inputs produce equal
/// manifests byte for byte.
std::string sweep_manifest_json(const ParameterGrid& grid, const Corpus& corpus,
                                std::uint64_t corpus_checksum, std::span<const double> targets,
                                const ResultTable& table);

}  // namespace tarkit
