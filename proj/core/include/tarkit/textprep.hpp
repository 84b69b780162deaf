#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tarkit {

/// Lowercase and split on any run of non-alphanumeric characters. Digits are
/// kept, repeats are kept, order is preserved. Empty text yields no tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Porter stem of a single lowercase token. Tokens containing non-letters
/// (e.g. "2017", "abc123") pass through unchanged.
std::string porter_stem(std::string_view token);

/// Identity when disabled; otherwise each token replaced by its Porter stem,
/// order and multiplicity preserved.
std::vector<std::string> stem_tokens(std::vector<std::string> tokens, bool enabled);

/// Token sequence after n-gram expansion: every contiguous gram of order
/// 1..ngram_order the source admits, multiword grams joined with one space.
struct TokenSequence {
  std::vector<std::string> tokens;
  int ngram_order = 1;
};

/// Expand unigrams into grams of order 1 through `order`, grouped by order,
/// positional order preserved within each group. Throws ParameterError when
/// order < 1.
TokenSequence expand_ngrams(const std::vector<std::string>& unigrams, int order);

/// The full preprocessing pipeline: tokenize, stem (optional), then n-grams.
/// Stemming is applied to unigrams before gram assembly.
TokenSequence preprocess(std::string_view text, bool stemming, int ngram_order);

}  // namespace tarkit
