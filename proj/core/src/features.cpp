#include "tarkit/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tarkit/csv.hpp"
#include "tarkit/error.hpp"

namespace tarkit {

const char* to_string(TokenValueType type) {
  switch (type) {
    case TokenValueType::binary: return "binary";
    case TokenValueType::frequency: return "frequency";
    case TokenValueType::normalized_term_frequency: return "ntf";
    case TokenValueType::tfidf: return "tfidf";
  }
  return "?";
}

TokenValueType parse_token_value_type(std::string_view text) {
  if (text == "binary") return TokenValueType::binary;
  if (text == "frequency") return TokenValueType::frequency;
  if (text == "ntf" || text == "normalized_term_frequency")
    return TokenValueType::normalized_term_frequency;
  if (text == "tfidf") return TokenValueType::tfidf;
  throw ParseError("unknown token value type \"" + std::string(text) +
                   "\" (expected binary, frequency, ntf or tfidf)");
}

Vocabulary Vocabulary::build(std::span<const TokenSequence> training_docs,
                             std::span<const Label> labels,
                             std::vector<std::vector<std::int32_t>>* interned_out) {
  if (training_docs.size() != labels.size())
    throw ParameterError("build_vocabulary: document and label counts differ");

  Vocabulary vocab;
  vocab.n_docs_ = training_docs.size();
  if (interned_out) {
    interned_out->clear();
    interned_out->reserve(training_docs.size());
  }

  std::vector<std::uint32_t> distinct;
  for (std::size_t d = 0; d < training_docs.size(); ++d) {
    const bool positive = labels[d] == Label::relevant;
    if (positive) ++vocab.n_pos_;
    else ++vocab.n_neg_;

    std::vector<std::int32_t> ids;
    ids.reserve(training_docs[d].tokens.size());
    for (const std::string& gram : training_docs[d].tokens) {
      auto [it, inserted] = vocab.index_.try_emplace(
          gram, static_cast<std::uint32_t>(vocab.tokens_.size()));
      if (inserted) {
        vocab.tokens_.push_back(gram);
        vocab.doc_freq_.push_back(0);
        vocab.pos_count_.push_back(0);
      }
      ids.push_back(static_cast<std::int32_t>(it->second));
    }

    distinct.assign(ids.begin(), ids.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::uint32_t id : distinct) {
      ++vocab.doc_freq_[id];
      if (positive) ++vocab.pos_count_[id];
    }

    if (interned_out) interned_out->push_back(std::move(ids));
  }

  if (vocab.tokens_.empty())
    throw Error("empty vocabulary: no training document contributes a token");
  return vocab;
}

std::int64_t Vocabulary::id_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::vector<std::int32_t> Vocabulary::intern(const TokenSequence& sequence) const {
  std::vector<std::int32_t> ids;
  ids.reserve(sequence.tokens.size());
  for (const std::string& gram : sequence.tokens) {
    auto it = index_.find(gram);
    ids.push_back(it == index_.end() ? -1 : static_cast<std::int32_t>(it->second));
  }
  return ids;
}

double token_value(TokenValueType type, std::uint32_t term_frequency,
                   std::uint32_t max_term_frequency, std::size_t collection_size,
                   std::uint32_t document_frequency) {
  if (term_frequency < 1)
    throw ParameterError("token_value: term frequency must be >= 1");
  if (max_term_frequency < term_frequency)
    throw ParameterError("token_value: max term frequency " +
                         std::to_string(max_term_frequency) + " < term frequency " +
                         std::to_string(term_frequency));
  switch (type) {
    case TokenValueType::binary:
      return 1.0;
    case TokenValueType::frequency:
      return static_cast<double>(term_frequency);
    case TokenValueType::normalized_term_frequency:
      return 0.5 + 0.5 * static_cast<double>(term_frequency) /
                       static_cast<double>(max_term_frequency);
    case TokenValueType::tfidf: {
      if (document_frequency < 1)
        throw ParameterError("token_value: document frequency must be >= 1 for tfidf");
      if (collection_size < document_frequency)
        throw ParameterError("token_value: collection size " +
                             std::to_string(collection_size) + " < document frequency " +
                             std::to_string(document_frequency));
      double ntf = 0.5 + 0.5 * static_cast<double>(term_frequency) /
                             static_cast<double>(max_term_frequency);
      return ntf * std::log(static_cast<double>(collection_size) /
                            static_cast<double>(document_frequency));
    }
  }
  throw ParameterError("token_value: unknown value type");
}

namespace {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace

std::vector<double> information_gain(const Vocabulary& vocabulary) {
  const double n = static_cast<double>(vocabulary.training_documents());
  const std::size_t pos = vocabulary.positive_documents();
  const std::size_t neg = vocabulary.negative_documents();
  if (pos == 0 || neg == 0)
    throw ParameterError("information gain requires both classes in the training set");

  const double class_entropy = binary_entropy(static_cast<double>(pos) / n);
  std::vector<double> ig(vocabulary.size());
  for (std::uint32_t t = 0; t < vocabulary.size(); ++t) {
    const double nt = vocabulary.document_frequency(t);
    const double pt = vocabulary.positive_document_count(t);
    const double na = n - nt;
    const double pa = static_cast<double>(pos) - pt;
    double conditional = 0.0;
    if (nt > 0) conditional += (nt / n) * binary_entropy(pt / nt);
    if (na > 0) conditional += (na / n) * binary_entropy(pa / na);
    ig[t] = std::max(0.0, class_entropy - conditional);
  }
  return ig;
}

std::vector<std::uint32_t> rank_by_information_gain(const Vocabulary& vocabulary,
                                                    std::span<const double> ig) {
  if (ig.size() != vocabulary.size())
    throw ParameterError("ranking: gain scores do not match the vocabulary");
  std::vector<std::uint32_t> order(vocabulary.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (ig[a] != ig[b]) return ig[a] > ig[b];
    return vocabulary.token(a) < vocabulary.token(b);
  });
  return order;
}

ReducedVocabulary select_top_k(const Vocabulary& vocabulary, std::span<const double> ig,
                               std::size_t k) {
  return select_top_k(vocabulary, ig, rank_by_information_gain(vocabulary, ig), k);
}

ReducedVocabulary select_top_k(const Vocabulary& vocabulary, std::span<const double> ig,
                               std::span<const std::uint32_t> ranked, std::size_t k) {
  if (k < 1) throw ParameterError("select_top_k: k must be >= 1");
  if (ranked.size() != vocabulary.size())
    throw ParameterError("select_top_k: ranking does not match the vocabulary");
  const std::size_t kept = std::min(k, vocabulary.size());

  ReducedVocabulary out;
  out.n_docs_ = vocabulary.training_documents();
  out.tokens_.reserve(kept);
  out.doc_freq_.reserve(kept);
  out.ig_.reserve(kept);
  out.reduced_of_parent_.assign(vocabulary.size(), -1);
  for (std::size_t r = 0; r < kept; ++r) {
    const std::uint32_t parent = ranked[r];
    out.reduced_of_parent_[parent] = static_cast<std::int32_t>(r);
    out.tokens_.push_back(vocabulary.token(parent));
    out.doc_freq_.push_back(vocabulary.document_frequency(parent));
    out.ig_.push_back(ig[parent]);
    out.index_.emplace(vocabulary.token(parent), static_cast<std::uint32_t>(r));
  }
  return out;
}

std::int64_t ReducedVocabulary::reduced_id_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

namespace {

// Shared tail of both vectorize paths: `present` holds one reduced id per
// surviving gram occurrence.
SparseVector vectorize_present(std::vector<std::uint32_t>& present,
                               const ReducedVocabulary& vocabulary, TokenValueType type,
                               std::string doc_id) {
  SparseVector vec;
  vec.doc_id = std::move(doc_id);
  if (present.empty()) return vec;

  std::sort(present.begin(), present.end());

  std::uint32_t max_tf = 0;
  for (std::size_t i = 0; i < present.size();) {
    std::size_t j = i;
    while (j < present.size() && present[j] == present[i]) ++j;
    max_tf = std::max(max_tf, static_cast<std::uint32_t>(j - i));
    i = j;
  }

  for (std::size_t i = 0; i < present.size();) {
    std::size_t j = i;
    while (j < present.size() && present[j] == present[i]) ++j;
    const std::uint32_t tf = static_cast<std::uint32_t>(j - i);
    const double value = token_value(type, tf, max_tf, vocabulary.training_documents(),
                                     vocabulary.document_frequency(present[i]));
    if (value != 0.0) vec.entries.push_back({present[i], value});
    i = j;
  }
  return vec;
}

}  // namespace

SparseVector vectorize(const TokenSequence& sequence, const ReducedVocabulary& vocabulary,
                       TokenValueType type, std::string doc_id) {
  std::vector<std::uint32_t> present;
  present.reserve(sequence.tokens.size());
  for (const std::string& gram : sequence.tokens) {
    std::int64_t id = vocabulary.reduced_id_of(gram);
    if (id >= 0) present.push_back(static_cast<std::uint32_t>(id));
  }
  return vectorize_present(present, vocabulary, type, std::move(doc_id));
}

SparseVector vectorize_interned(std::span<const std::int32_t> parent_ids,
                                const ReducedVocabulary& vocabulary, TokenValueType type,
                                std::string doc_id) {
  std::vector<std::uint32_t> present;
  present.reserve(parent_ids.size());
  for (std::int32_t parent : parent_ids) {
    if (parent < 0) continue;
    std::int32_t reduced = vocabulary.reduced_id_of_parent(static_cast<std::uint32_t>(parent));
    if (reduced >= 0) present.push_back(static_cast<std::uint32_t>(reduced));
  }
  return vectorize_present(present, vocabulary, type, std::move(doc_id));
}

void dump_vocabulary_csv(const Vocabulary& vocabulary, std::span<const double> ig,
                         std::ostream& out) {
  if (ig.size() != vocabulary.size())
    throw ParameterError("vocabulary dump: gain scores do not match the vocabulary");
  out << "token,N_t,pos_doc_count,neg_doc_count,ig_bits\n";
  for (std::uint32_t t = 0; t < vocabulary.size(); ++t) {
    out << csv::escape(vocabulary.token(t)) << ',' << vocabulary.document_frequency(t) << ','
        << vocabulary.positive_document_count(t) << ','
        << vocabulary.negative_document_count(t) << ',' << csv::format_double(ig[t]) << '\n';
  }
}

}  // namespace tarkit
