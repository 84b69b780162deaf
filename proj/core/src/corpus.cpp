#include "tarkit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tarkit/csv.hpp"

namespace tarkit {

const char* to_string(Label label) {
  return label == Label::relevant ? "relevant" : "not_relevant";
}

const char* to_string(Split split) {
  return split == Split::training ? "training" : "validation";
}

Label parse_label(std::string_view text) {
  if (text == "relevant") return Label::relevant;
  if (text == "not_relevant") return Label::not_relevant;
  throw ParseError("unknown label value \"" + std::string(text) +
                   "\" (expected relevant or not_relevant)");
}

Split parse_split(std::string_view text) {
  if (text == "training") return Split::training;
  if (text == "validation") return Split::validation;
  throw ParseError("unknown split value \"" + std::string(text) +
                   "\" (expected training or validation)");
}

Corpus::Corpus(std::string name, std::vector<Document> documents)
    : name_(std::move(name)), documents_(std::move(documents)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(documents_.size());
  for (const Document& doc : documents_) {
    if (doc.id.empty()) throw Error("corpus \"" + name_ + "\": document with empty id");
    if (!seen.insert(doc.id).second)
      throw Error("corpus \"" + name_ + "\": duplicate document id \"" + doc.id + "\"");
  }
}

std::vector<std::size_t> Corpus::training_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < documents_.size(); ++i)
    if (documents_[i].split == Split::training) out.push_back(i);
  return out;
}

std::vector<std::size_t> Corpus::validation_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < documents_.size(); ++i)
    if (documents_[i].split == Split::validation) out.push_back(i);
  return out;
}

DatasetFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".csv") return DatasetFormat::csv;
  if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") return DatasetFormat::jsonl;
  throw ParameterError("cannot infer dataset format from extension \"" + ext +
                       "\" (use .jsonl or .csv)");
}

namespace {

// Tracks ids so duplicates report both offending lines.
class IdRegistry {
public:
  void add(const std::string& id, std::size_t line, const std::string& file) {
    auto [it, inserted] = first_line_.emplace(id, line);
    if (!inserted)
      throw ParseError(file + ":" + std::to_string(line) + ": duplicate id \"" + id +
                       "\" (first seen on line " + std::to_string(it->second) + ")");
  }

private:
  std::unordered_map<std::string, std::size_t> first_line_;
};

Corpus load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset: " + path.string());
  const std::string file = path.filename().string();

  std::vector<Document> docs;
  IdRegistry ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      throw ParseError(file + ":" + std::to_string(line_no) + ": empty line in JSONL dataset");
    }
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(file + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!record.is_object())
      throw ParseError(file + ":" + std::to_string(line_no) + ": record is not a JSON object");

    auto field = [&](const char* name) -> std::string {
      auto it = record.find(name);
      if (it == record.end())
        throw ParseError(file + ":" + std::to_string(line_no) + ": missing field \"" +
                         name + "\"");
      if (!it->is_string())
        throw ParseError(file + ":" + std::to_string(line_no) + ": field \"" + name +
                         "\" is not a string");
      return it->get<std::string>();
    };

    Document doc;
    doc.id = field("id");
    if (doc.id.empty())
      throw ParseError(file + ":" + std::to_string(line_no) + ": field \"id\" is empty");
    doc.text = field("text");
    try {
      doc.label = parse_label(field("label"));
      doc.split = parse_split(field("split"));
    } catch (const ParseError& e) {
      throw ParseError(file + ":" + std::to_string(line_no) + ": " + e.what());
    }
    ids.add(doc.id, line_no, file);
    docs.push_back(std::move(doc));
  }
  return Corpus(path.stem().string(), std::move(docs));
}

Corpus load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset: " + path.string());
  const std::string file = path.filename().string();

  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw ParseError(file + ": empty file, expected a header row");

  int col_id = -1, col_text = -1, col_label = -1, col_split = -1;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string& name = fields[i];
    if (name == "id") col_id = static_cast<int>(i);
    else if (name == "text") col_text = static_cast<int>(i);
    else if (name == "label") col_label = static_cast<int>(i);
    else if (name == "split") col_split = static_cast<int>(i);
    else throw ParseError(file + ":1: unknown column \"" + name + "\"");
  }
  if (col_id < 0 || col_text < 0 || col_label < 0 || col_split < 0)
    throw ParseError(file + ":1: header must name the id, text, label and split columns");
  const std::size_t n_cols = fields.size();

  std::vector<Document> docs;
  IdRegistry ids;
  while (reader.next(fields)) {
    const std::size_t line_no = reader.record_line();
    if (fields.size() != n_cols)
      throw ParseError(file + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(n_cols) + " fields, got " + std::to_string(fields.size()));
    Document doc;
    doc.id = fields[static_cast<std::size_t>(col_id)];
    if (doc.id.empty())
      throw ParseError(file + ":" + std::to_string(line_no) + ": field \"id\" is empty");
    doc.text = fields[static_cast<std::size_t>(col_text)];
    try {
      doc.label = parse_label(fields[static_cast<std::size_t>(col_label)]);
      doc.split = parse_split(fields[static_cast<std::size_t>(col_split)]);
    } catch (const ParseError& e) {
      throw ParseError(file + ":" + std::to_string(line_no) + ": " + e.what());
    }
    ids.add(doc.id, line_no, file);
    docs.push_back(std::move(doc));
  }
  return Corpus(path.stem().string(), std::move(docs));
}

}  // namespace

Corpus load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  return format == DatasetFormat::jsonl ? load_jsonl(path) : load_csv(path);
}

Corpus load_dataset(const std::filesystem::path& path) {
  return load_dataset(path, format_from_path(path));
}

ClassDistribution dataset_stats(const Corpus& corpus) {
  ClassDistribution dist;
  for (const Document& doc : corpus.documents()) {
    if (doc.split == Split::training) {
      if (doc.label == Label::relevant) ++dist.training_relevant;
      else ++dist.training_not_relevant;
    } else {
      if (doc.label == Label::relevant) ++dist.validation_relevant;
      else ++dist.validation_not_relevant;
    }
  }
  return dist;
}

void require_trainable(const Corpus& corpus) {
  ClassDistribution dist = dataset_stats(corpus);
  if (dist.training_relevant == 0 || dist.training_not_relevant == 0)
    throw Error("corpus \"" + corpus.name() +
                "\" needs at least one training document of each label (relevant: " +
                std::to_string(dist.training_relevant) + ", not_relevant: " +
                std::to_string(dist.training_not_relevant) + ")");
}

std::uint64_t corpus_checksum(const Corpus& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0xff;  // field separator
    h *= 0x100000001b3ull;
  };
  for (const Document& doc : corpus.documents()) {
    mix(doc.id);
    mix(doc.text);
    mix(to_string(doc.label));
    mix(to_string(doc.split));
  }
  return h;
}

void save_dataset_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset: " + path.string());
  for (const Document& doc : corpus.documents()) {
    nlohmann::json record{{"id", doc.id},
                          {"text", doc.text},
                          {"label", to_string(doc.label)},
                          {"split", to_string(doc.split)}};
    out << record.dump() << '\n';
  }
}

void save_dataset_csv(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset: " + path.string());
  out << "id,text,label,split\n";
  for (const Document& doc : corpus.documents()) {
    // Text is always quoted; ids and enums never need it.
    out << csv::escape(doc.id) << ",\"";
    for (char c : doc.text) {
      if (c == '"') out.put('"');
      out.put(c);
    }
    out << "\"," << to_string(doc.label) << ',' << to_string(doc.split) << '\n';
  }
}

}  // namespace tarkit
