#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "results_detail.hpp"
#include "tarkit/csv.hpp"
#include "tarkit/error.hpp"
#include "tarkit/sweep.hpp"

namespace tarkit {

namespace {

struct ResumedRows {
  std::map<std::size_t, std::string> raw_by_index;  // verbatim lines, byte-stable
  std::vector<ExperimentResult> parsed;
};

// Read a partially written result file. A crashed run may leave a torn final
// line; anything that does not parse as a complete row is dropped and re-run.
ResumedRows read_resume_file(const std::filesystem::path& path,
                             const std::string& expected_header,
                             std::span<const ExperimentConfig> configs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open resume file: " + path.string());

  ResumedRows resumed;
  std::string line;
  if (!std::getline(in, line)) return resumed;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header)
    throw Error("resume file " + path.string() +
                " does not match this sweep's recall targets or format");

  std::vector<std::string> header_fields;
  {
    std::stringstream ss(expected_header);
    std::string f;
    while (std::getline(ss, f, ',')) header_fields.push_back(f);
  }
  const std::size_t target_count =
      detail::parse_result_header(header_fields, path.filename().string() + ":1").size();

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ExperimentResult row;
    try {
      std::istringstream row_stream(line + "\n");
      csv::Reader reader(row_stream);
      std::vector<std::string> fields;
      if (!reader.next(fields)) continue;
      row = detail::parse_result_row(fields, target_count, path.filename().string());
    } catch (const std::exception&) {
      continue;  // torn or corrupt row: drop, it will be re-run
    }
    if (row.config.index >= configs.size()) continue;

    // The row must describe the same config this grid enumerates there.
    const ExperimentConfig& expected = configs[row.config.index];
    const ExperimentConfig& got = row.config;
    if (got.stemming != expected.stemming || got.ngram_order != expected.ngram_order ||
        got.value_type != expected.value_type || got.token_count != expected.token_count ||
        got.sampling_percentage != expected.sampling_percentage ||
        got.algorithm != expected.algorithm || got.seed != expected.seed ||
        got.cost != expected.cost || got.tolerance != expected.tolerance ||
        got.max_iterations != expected.max_iterations)
      throw Error("resume file " + path.string() + " row " +
                  std::to_string(row.config.index) + " does not match the grid (" +
                  got.describe() + " vs " + expected.describe() + ")");

    if (resumed.raw_by_index.emplace(row.config.index, line).second)
      resumed.parsed.push_back(std::move(row));
  }
  return resumed;
}

}  // namespace

ResultTable run_sweep(const ParameterGrid& grid, const Corpus& corpus,
                      const SweepOptions& options) {
  grid.validate();
  validate_recall_targets(options.targets);
  require_trainable(corpus);
  if (options.workers < 1) throw ParameterError("worker count must be >= 1");

  const std::vector<ExperimentConfig> configs = enumerate_grid(grid);
  const std::string header = result_csv_header(options.targets);
  const bool to_file = !options.output_csv.empty();

  ResumedRows resumed;
  if (to_file && options.resume && std::filesystem::exists(options.output_csv))
    resumed = read_resume_file(options.output_csv, header, configs);

  std::vector<const ExperimentConfig*> pending;
  for (const ExperimentConfig& config : configs)
    if (!resumed.raw_by_index.contains(config.index)) pending.push_back(&config);

  std::ofstream out;
  if (to_file) {
    const bool append = !resumed.raw_by_index.empty();
    out.open(options.output_csv, append ? std::ios::binary | std::ios::app
                                        : std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write result table: " + options.output_csv.string());
    if (!append) {
      out << header << '\n';
      out.flush();
    }
  }

  PreprocessCache cache(corpus);
  std::vector<ExperimentResult> computed(pending.size());
  std::vector<std::string> computed_rows(pending.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{resumed.parsed.size()};
  std::mutex write_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) break;
      const ExperimentConfig& config = *pending[i];
      ExperimentResult result;
      try {
        result = run_experiment(config, corpus, options.targets, &cache);
      } catch (const Error& e) {
        // A failed experiment is a first-class row, never silently skipped.
        result = ExperimentResult{};
        result.config = config;
        result.error = e.what();
      } catch (const std::exception& e) {
        std::lock_guard lock(write_mutex);
        if (!failure) failure = std::current_exception();
        break;
      }
      std::string row = result_csv_row(result, options.targets.size());
      {
        std::lock_guard lock(write_mutex);
        if (to_file) {
          out << row << '\n';
          out.flush();  // each finished row survives a crash
        }
        computed[i] = std::move(result);
        computed_rows[i] = std::move(row);
        const std::size_t finished = done.fetch_add(1) + 1;
        if (options.progress) options.progress(finished, configs.size());
      }
    }
  };

  if (options.workers == 1 || pending.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(options.workers), pending.size());
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Final file: canonical (grid) order, independent of completion order.
  if (to_file) {
    out.close();
    std::map<std::size_t, const std::string*> lines;
    for (const auto& [index, line] : resumed.raw_by_index) lines.emplace(index, &line);
    for (std::size_t i = 0; i < pending.size(); ++i)
      lines.emplace(pending[i]->index, &computed_rows[i]);
    const std::filesystem::path tmp = options.output_csv.string() + ".tmp";
    {
      std::ofstream final_out(tmp, std::ios::binary | std::ios::trunc);
      if (!final_out) throw Error("cannot write result table: " + tmp.string());
      final_out << header << '\n';
      for (const auto& [index, line] : lines) final_out << *line << '\n';
    }
    std::filesystem::rename(tmp, options.output_csv);
  }

  ResultTable table;
  table.targets = options.targets;
  table.rows.reserve(configs.size());
  for (ExperimentResult& row : resumed.parsed) table.rows.push_back(std::move(row));
  for (ExperimentResult& row : computed) table.rows.push_back(std::move(row));
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ExperimentResult& a, const ExperimentResult& b) {
              return a.config.index < b.config.index;
            });

  if (to_file) {
    std::ofstream manifest(options.output_csv.string() + ".manifest.json",
                           std::ios::binary | std::ios::trunc);
    if (!manifest)
      throw Error("cannot write manifest beside " + options.output_csv.string());
    manifest << sweep_manifest_json(grid, corpus, corpus_checksum(corpus), options.targets,
                                    table);
  }
  return table;
}

}  // namespace tarkit
