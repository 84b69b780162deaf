#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "results_detail.hpp"
#include "tarkit/csv.hpp"
#include "tarkit/error.hpp"
#include "tarkit/hash.hpp"
#include "tarkit/sweep.hpp"
#include "tarkit/version.hpp"

namespace tarkit {

std::size_t ResultTable::failed_count() const {
  std::size_t n = 0;
  for (const ExperimentResult& row : rows)
    if (row.failed()) ++n;
  return n;
}

namespace {

constexpr std::size_t kFixedColumns = 16;  // everything before the per-target block

std::string target_suffix(double target) {
  return csv::format_double(target * 100.0);
}

double parse_double_field(const std::string& field, const std::string& context) {
  try {
    std::size_t pos = 0;
    double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": not a number: \"" + field + "\"");
  }
}

long long parse_int_field(const std::string& field, const std::string& context) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": not an integer: \"" + field + "\"");
  }
}

}  // namespace

std::string result_csv_header(std::span<const double> targets) {
  std::ostringstream out;
  out << "index,stemming,ngrams,value_type,tokens,sampling,algorithm,seed,c,tolerance,"
         "max_iterations,vocab_size,selected_tokens,training_docs,converged,iterations";
  for (double t : targets) {
    const std::string suffix = target_suffix(t);
    out << ",pct_reviewed_r" << suffix << ",precision_r" << suffix;
  }
  out << ",avg_pct_reviewed,error";
  return out.str();
}

std::string result_csv_row(const ExperimentResult& result, std::size_t target_count) {
  const ExperimentConfig& c = result.config;
  std::ostringstream out;
  out << c.index << ',' << (c.stemming ? "yes" : "no") << ',' << c.ngram_order << ','
      << to_string(c.value_type) << ',' << c.token_count << ','
      << csv::format_double(c.sampling_percentage) << ',' << to_string(c.algorithm) << ','
      << c.seed << ',' << csv::format_double(c.cost) << ','
      << csv::format_double(c.tolerance) << ',' << c.max_iterations << ','
      << result.vocabulary_size << ',' << result.selected_tokens << ','
      << result.training_docs << ',' << (result.converged ? "true" : "false") << ','
      << result.iterations;
  if (result.failed()) {
    for (std::size_t i = 0; i < target_count; ++i) out << ",,";
    out << ",," << csv::escape(result.error);
  } else {
    if (result.percent_reviewed.size() != target_count ||
        result.precision.size() != target_count)
      throw ParameterError("result row has the wrong number of metric values");
    for (std::size_t i = 0; i < target_count; ++i)
      out << ',' << csv::format_double(result.percent_reviewed[i]) << ','
          << csv::format_double(result.precision[i]);
    out << ',' << csv::format_double(result.avg_percent_reviewed) << ',';
  }
  return out.str();
}

namespace detail {

RecallTargets parse_result_header(const std::vector<std::string>& fields,
                                  const std::string& context) {
  const std::string expected_prefix[kFixedColumns] = {
      "index",          "stemming",  "ngrams",        "value_type",
      "tokens",         "sampling",  "algorithm",     "seed",
      "c",              "tolerance", "max_iterations", "vocab_size",
      "selected_tokens", "training_docs", "converged", "iterations"};
  if (fields.size() < kFixedColumns + 2 || (fields.size() - kFixedColumns) % 2 != 0)
    throw ParseError(context + ": unexpected column count in result header");
  for (std::size_t i = 0; i < kFixedColumns; ++i)
    if (fields[i] != expected_prefix[i])
      throw ParseError(context + ": unexpected column \"" + fields[i] + "\", expected \"" +
                       expected_prefix[i] + "\"");
  if (fields[fields.size() - 2] != "avg_pct_reviewed" || fields.back() != "error")
    throw ParseError(context + ": result header must end with avg_pct_reviewed,error");

  RecallTargets targets;
  for (std::size_t i = kFixedColumns; i + 2 < fields.size(); i += 2) {
    const std::string& pct = fields[i];
    const std::string& prec = fields[i + 1];
    if (pct.rfind("pct_reviewed_r", 0) != 0 || prec.rfind("precision_r", 0) != 0)
      throw ParseError(context + ": unexpected metric columns \"" + pct + "\", \"" + prec +
                       "\"");
    const std::string suffix = pct.substr(std::string("pct_reviewed_r").size());
    if (prec.substr(std::string("precision_r").size()) != suffix)
      throw ParseError(context + ": metric columns disagree on the recall target");
    targets.push_back(parse_double_field(suffix, context) / 100.0);
  }
  validate_recall_targets(targets);
  return targets;
}

ExperimentResult parse_result_row(const std::vector<std::string>& fields,
                                  std::size_t target_count, const std::string& context) {
  if (fields.size() != kFixedColumns + 2 * target_count + 2)
    throw ParseError(context + ": expected " +
                     std::to_string(kFixedColumns + 2 * target_count + 2) + " fields, got " +
                     std::to_string(fields.size()));
  ExperimentResult result;
  ExperimentConfig& c = result.config;
  c.index = static_cast<std::size_t>(parse_int_field(fields[0], context));
  if (fields[1] == "yes") c.stemming = true;
  else if (fields[1] == "no") c.stemming = false;
  else throw ParseError(context + ": stemming must be yes or no");
  c.ngram_order = static_cast<int>(parse_int_field(fields[2], context));
  c.value_type = parse_token_value_type(fields[3]);
  c.token_count = static_cast<int>(parse_int_field(fields[4], context));
  c.sampling_percentage = parse_double_field(fields[5], context);
  c.algorithm = parse_algorithm(fields[6]);
  c.seed = static_cast<std::uint64_t>(parse_int_field(fields[7], context));
  c.cost = parse_double_field(fields[8], context);
  c.tolerance = parse_double_field(fields[9], context);
  c.max_iterations = static_cast<int>(parse_int_field(fields[10], context));
  result.vocabulary_size = static_cast<std::size_t>(parse_int_field(fields[11], context));
  result.selected_tokens = static_cast<std::size_t>(parse_int_field(fields[12], context));
  result.training_docs = static_cast<std::size_t>(parse_int_field(fields[13], context));
  if (fields[14] == "true") result.converged = true;
  else if (fields[14] == "false") result.converged = false;
  else throw ParseError(context + ": converged must be true or false");
  result.iterations = static_cast<int>(parse_int_field(fields[15], context));

  result.error = fields.back();
  if (!result.failed()) {
    for (std::size_t i = 0; i < target_count; ++i) {
      result.percent_reviewed.push_back(
          parse_double_field(fields[kFixedColumns + 2 * i], context));
      result.precision.push_back(
          parse_double_field(fields[kFixedColumns + 2 * i + 1], context));
    }
    result.avg_percent_reviewed =
        parse_double_field(fields[fields.size() - 2], context);
  }
  return result;
}

}  // namespace detail

ResultTable load_result_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open result table: " + path.string());
  const std::string file = path.filename().string();

  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw ParseError(file + ": empty result table");
  ResultTable table;
  table.targets = detail::parse_result_header(fields, file + ":1");

  while (reader.next(fields)) {
    const std::string context = file + ":" + std::to_string(reader.record_line());
    table.rows.push_back(detail::parse_result_row(fields, table.targets.size(), context));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ExperimentResult& a, const ExperimentResult& b) {
                     return a.config.index < b.config.index;
                   });
  return table;
}

namespace {

std::string dimension_value(const ExperimentConfig& config, const std::string& dimension) {
  if (dimension == "stemming") return config.stemming ? "yes" : "no";
  if (dimension == "ngrams") return std::to_string(config.ngram_order);
  if (dimension == "value_type") return to_string(config.value_type);
  if (dimension == "tokens") return std::to_string(config.token_count);
  if (dimension == "sampling") return csv::format_double(config.sampling_percentage);
  if (dimension == "algorithm") return to_string(config.algorithm);
  throw ParameterError("unknown dimension \"" + dimension +
                       "\" (expected stemming, ngrams, value_type, tokens, sampling or "
                       "algorithm)");
}

}  // namespace

AggregateReport aggregate_by_parameter(const ResultTable& table, const std::string& dimension) {
  AggregateReport report;
  report.dimension = dimension;
  report.targets = table.targets;

  std::vector<std::vector<const ExperimentResult*>> groups;
  std::vector<std::string> group_values;
  for (const ExperimentResult& row : table.rows) {
    const std::string value = dimension_value(row.config, dimension);
    if (row.failed()) {
      ++report.excluded_failures;
      continue;
    }
    auto it = std::find(group_values.begin(), group_values.end(), value);
    std::size_t g;
    if (it == group_values.end()) {
      g = group_values.size();
      group_values.push_back(value);
      groups.emplace_back();
    } else {
      g = static_cast<std::size_t>(it - group_values.begin());
    }
    groups[g].push_back(&row);
  }

  for (std::size_t g = 0; g < groups.size(); ++g) {
    AggregateReport::Row row;
    row.value = group_values[g];
    row.rows = groups[g].size();
    row.percent_reviewed.assign(table.targets.size(), 0.0);
    row.precision.assign(table.targets.size(), 0.0);
    for (const ExperimentResult* r : groups[g]) {
      row.avg_percent_reviewed += r->avg_percent_reviewed;
      for (std::size_t t = 0; t < table.targets.size(); ++t) {
        row.percent_reviewed[t] += r->percent_reviewed[t];
        row.precision[t] += r->precision[t];
      }
    }
    const double n = static_cast<double>(row.rows);
    row.avg_percent_reviewed /= n;
    for (double& v : row.percent_reviewed) v /= n;
    for (double& v : row.precision) v /= n;
    report.rows.push_back(std::move(row));
  }
  return report;
}

ExtremesReport extreme_combinations(const ResultTable& table, double recall) {
  std::size_t target = table.targets.size();
  for (std::size_t t = 0; t < table.targets.size(); ++t)
    if (std::abs(table.targets[t] - recall) < 1e-9) target = t;
  if (target == table.targets.size()) {
    std::string available;
    for (double t : table.targets)
      available += (available.empty() ? "" : ", ") + csv::format_double(t);
    throw ParameterError("recall " + csv::format_double(recall) +
                         " is not a target of this table (targets: " + available + ")");
  }

  const ExperimentResult* best = nullptr;
  const ExperimentResult* worst = nullptr;
  for (const ExperimentResult& row : table.rows) {
    if (row.failed()) continue;
    // Strict comparisons keep the first (canonical-order) config on ties.
    if (!best || row.percent_reviewed[target] < best->percent_reviewed[target]) best = &row;
    if (!worst || row.percent_reviewed[target] > worst->percent_reviewed[target]) worst = &row;
  }
  if (!best) throw Error("extreme_combinations: table has no successful rows");

  ExtremesReport report;
  report.recall = table.targets[target];
  report.best = *best;
  report.worst = *worst;
  report.best_percent_reviewed = best->percent_reviewed[target];
  report.worst_percent_reviewed = worst->percent_reviewed[target];
  report.best_precision = best->precision[target];
  report.worst_precision = worst->precision[target];
  return report;
}

std::string sweep_manifest_json(const ParameterGrid& grid, const Corpus& corpus,
                                std::uint64_t corpus_checksum, std::span<const double> targets,
                                const ResultTable& table) {
  nlohmann::json manifest;
  manifest["tool"] = {{"name", kToolName}, {"version", kVersion}};
  manifest["corpus"] = {{"name", corpus.name()},
                        {"documents", corpus.size()},
                        {"checksum_fnv1a64", to_hex(corpus_checksum)}};

  nlohmann::json g;
  g["stemming"] = nlohmann::json::array();
  for (bool s : grid.stemming) g["stemming"].push_back(s ? "yes" : "no");
  g["ngrams"] = grid.ngram_orders;
  g["value_types"] = nlohmann::json::array();
  for (TokenValueType vt : grid.value_types) g["value_types"].push_back(to_string(vt));
  g["tokens"] = grid.token_counts;
  g["sampling"] = grid.sampling_percentages;
  g["algorithms"] = nlohmann::json::array();
  for (AlgorithmChoice a : grid.algorithms) g["algorithms"].push_back(to_string(a));
  g["seed"] = grid.seed;
  g["c"] = grid.cost;
  g["tolerance"] = grid.tolerance;
  g["max_iterations"] = grid.max_iterations;
  manifest["grid"] = g;

  manifest["recall_targets"] = std::vector<double>(targets.begin(), targets.end());
  manifest["results"] = {{"rows", table.rows.size()}, {"failed", table.failed_count()}};
  return manifest.dump(2) + "\n";
}

}  // namespace tarkit
