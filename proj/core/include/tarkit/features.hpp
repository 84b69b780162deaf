#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tarkit/corpus.hpp"
#include "tarkit/textprep.hpp"

namespace tarkit {

enum class TokenValueType { binary, frequency, normalized_term_frequency, tfidf };

const char* to_string(TokenValueType type);
TokenValueType parse_token_value_type(std::string_view text);

/// Token statistics over the training documents: per token its document
/// frequency and per-class document counts, plus collection-level totals.
/// Token ids are dense 0..V-1 in first-appearance order.
class Vocabulary {
public:
  /// One entry per distinct gram in any training document. Empty documents
  /// still count toward the collection size N. Throws when no document
  /// contributes a token (no model could be built from an empty vocabulary).
  /// When `interned_out` is given it receives each document's token ids,
  /// multiplicity preserved.
  static Vocabulary build(std::span<const TokenSequence> training_docs,
                          std::span<const Label> labels,
                          std::vector<std::vector<std::int32_t>>* interned_out = nullptr);

  std::size_t size() const { return tokens_.size(); }
  std::size_t training_documents() const { return n_docs_; }
  std::size_t positive_documents() const { return n_pos_; }
  std::size_t negative_documents() const { return n_neg_; }

  /// Token id, or -1 when the token is out of vocabulary.
  std::int64_t id_of(std::string_view token) const;
  const std::string& token(std::uint32_t id) const { return tokens_[id]; }

  std::uint32_t document_frequency(std::uint32_t id) const { return doc_freq_[id]; }
  std::uint32_t positive_document_count(std::uint32_t id) const { return pos_count_[id]; }
  std::uint32_t negative_document_count(std::uint32_t id) const {
    return doc_freq_[id] - pos_count_[id];
  }

  /// Map a token sequence to ids, -1 for out-of-vocabulary grams.
  std::vector<std::int32_t> intern(const TokenSequence& sequence) const;

private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint32_t> doc_freq_;
  std::vector<std::uint32_t> pos_count_;
  std::size_t n_docs_ = 0;
  std::size_t n_pos_ = 0;
  std::size_t n_neg_ = 0;
};

/// Value of one token occurrence pattern inside one document.
///   binary -> 1
///   frequency -> TR
///   normalized term frequency -> 0.5 + 0.5 * TR / max_tf
///   tfidf -> NTF * ln(N / N_t)
/// Preconditions (violations throw ParameterError, never clamp):
///   TR >= 1, max_tf >= TR, and for tfidf N >= N_t >= 1.
double token_value(TokenValueType type, std::uint32_t term_frequency,
                   std::uint32_t max_term_frequency, std::size_t collection_size,
                   std::uint32_t document_frequency);

/// Information gain of each token in bits: the entropy of the class label
/// minus its expected entropy conditioned on token presence/absence, computed
/// over binary presence in the training documents. Requires both classes.
std::vector<double> information_gain(const Vocabulary& vocabulary);

/// Token ids sorted by descending gain; equal gains break by token text so
/// the ranking is canonical regardless of input order.
std::vector<std::uint32_t> rank_by_information_gain(const Vocabulary& vocabulary,
                                                    std::span<const double> ig);

/// The surviving top-k tokens after selection, re-indexed densely in ranking
/// order. Self-contained: keeps the statistics vectorization needs.
class ReducedVocabulary {
public:
  ReducedVocabulary() = default;

  std::size_t size() const { return tokens_.size(); }
  std::size_t training_documents() const { return n_docs_; }
  const std::string& token(std::uint32_t reduced_id) const { return tokens_[reduced_id]; }
  std::uint32_t document_frequency(std::uint32_t reduced_id) const {
    return doc_freq_[reduced_id];
  }
  double ig_bits(std::uint32_t reduced_id) const { return ig_[reduced_id]; }

  /// Reduced id for a parent-vocabulary token id; -1 when dropped.
  std::int32_t reduced_id_of_parent(std::uint32_t parent_id) const {
    return reduced_of_parent_[parent_id];
  }
  std::int64_t reduced_id_of(std::string_view token) const;

private:
  friend ReducedVocabulary select_top_k(const Vocabulary&, std::span<const double>,
                                        std::span<const std::uint32_t>, std::size_t);
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint32_t> doc_freq_;
  std::vector<double> ig_;
  std::vector<std::int32_t> reduced_of_parent_;
  std::size_t n_docs_ = 0;
};

/// Keep the k highest-gain tokens (all of them when k >= vocabulary size).
/// k must be >= 1.
ReducedVocabulary select_top_k(const Vocabulary& vocabulary, std::span<const double> ig,
                               std::size_t k);
/// Same, reusing a precomputed ranking (sweeps share one per vocabulary).
ReducedVocabulary select_top_k(const Vocabulary& vocabulary, std::span<const double> ig,
                               std::span<const std::uint32_t> ranked, std::size_t k);

struct SparseEntry {
  std::uint32_t index;
  double value;
  bool operator==(const SparseEntry&) const = default;
};

/// Sparse feature vector: entries sorted by index, zero values omitted.
struct SparseVector {
  std::string doc_id;
  std::vector<SparseEntry> entries;
};

/// One entry per in-vocabulary gram present in the document; out-of-vocabulary
/// grams are ignored. max_tf for NTF/TFIDF is taken over the document's
/// surviving grams. A document with no in-vocabulary gram yields an empty
/// vector, which downstream accepts.
SparseVector vectorize(const TokenSequence& sequence, const ReducedVocabulary& vocabulary,
                       TokenValueType type, std::string doc_id = {});

/// Fast path over parent-vocabulary token ids (-1 entries are out of
/// vocabulary). Same results as `vectorize`.
SparseVector vectorize_interned(std::span<const std::int32_t> parent_ids,
                                const ReducedVocabulary& vocabulary, TokenValueType type,
                                std::string doc_id = {});

/// Audit dump: token, N_t, pos_doc_count, neg_doc_count, ig_bits.
void dump_vocabulary_csv(const Vocabulary& vocabulary, std::span<const double> ig,
                         std::ostream& out);

}  // namespace tarkit
