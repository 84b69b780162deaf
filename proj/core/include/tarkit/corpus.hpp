#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tarkit/error.hpp"

namespace tarkit {

enum class Label { relevant, not_relevant };
enum class Split { training, validation };

const char* to_string(Label label);
const char* to_string(Split split);
Label parse_label(std::string_view text);
Split parse_split(std::string_view text);

struct Document {
  std::string id;
  std::string text;
  Label label = Label::not_relevant;
  Split split = Split::training;
};

/// Per-(label, split) document counts. Cells always sum to the corpus size.
struct ClassDistribution {
  std::size_t training_relevant = 0;
  std::size_t training_not_relevant = 0;
  std::size_t validation_relevant = 0;
  std::size_t validation_not_relevant = 0;

  std::size_t total() const {
    return training_relevant + training_not_relevant + validation_relevant +
           validation_not_relevant;
  }
  bool operator==(const ClassDistribution&) const = default;
};

/// An immutable, ordered collection of labeled documents. Document order is
/// the file order, so repeated loads of the same bytes are identical.
class Corpus {
public:
  Corpus() = default;
  /// Throws Error on an empty or duplicate document id.
  Corpus(std::string name, std::vector<Document> documents);

  const std::string& name() const { return name_; }
  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }

  std::vector<std::size_t> training_indices() const;
  std::vector<std::size_t> validation_indices() const;

private:
  std::string name_;
  std::vector<Document> documents_;
};

enum class DatasetFormat { jsonl, csv };

/// Infer the dataset format from the file extension (.jsonl/.ndjson or .csv).
DatasetFormat format_from_path(const std::filesystem::path& path);

/// Load a labeled dataset. JSONL records carry id/text/label/split fields;
/// CSV files carry a header row with the same four column names.
/// Malformed records are rejected with the offending line number.
Corpus load_dataset(const std::filesystem::path& path, DatasetFormat format);
Corpus load_dataset(const std::filesystem::path& path);

ClassDistribution dataset_stats(const Corpus& corpus);

/// Throws unless the corpus has at least one training document of each label.
void require_trainable(const Corpus& corpus);

void save_dataset_jsonl(const Corpus& corpus, const std::filesystem::path& path);
void save_dataset_csv(const Corpus& corpus, const std::filesystem::path& path);

/// Content checksum over (id, text, label, split) of every document, in
/// order. Format independent: the same corpus hashes the same whether it was
/// loaded from JSONL or CSV.
std::uint64_t corpus_checksum(const Corpus& corpus);

}  // namespace tarkit
