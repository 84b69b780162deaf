#include "tarkit/textprep.hpp"

#include <cctype>

#include "tarkit/error.hpp"

namespace tarkit {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> stem_tokens(std::vector<std::string> tokens, bool enabled) {
  if (!enabled) return tokens;
  for (std::string& token : tokens) token = porter_stem(token);
  return tokens;
}

TokenSequence expand_ngrams(const std::vector<std::string>& unigrams, int order) {
  if (order < 1)
    throw ParameterError("ngram order must be >= 1, got " + std::to_string(order));
  TokenSequence out;
  out.ngram_order = order;
  const std::size_t m = unigrams.size();
  // Emitted count is sum over k of (m - k + 1); reserve exactly.
  std::size_t total = 0;
  for (std::size_t k = 1; k <= std::min<std::size_t>(static_cast<std::size_t>(order), m); ++k)
    total += m - k + 1;
  out.tokens.reserve(total);

  for (std::size_t k = 1; k <= static_cast<std::size_t>(order); ++k) {
    if (k > m) break;
    for (std::size_t i = 0; i + k <= m; ++i) {
      if (k == 1) {
        out.tokens.push_back(unigrams[i]);
        continue;
      }
      std::string gram = unigrams[i];
      for (std::size_t j = 1; j < k; ++j) {
        gram.push_back(' ');
        gram.append(unigrams[i + j]);
      }
      out.tokens.push_back(std::move(gram));
    }
  }
  return out;
}

TokenSequence preprocess(std::string_view text, bool stemming, int ngram_order) {
  return expand_ngrams(stem_tokens(tokenize(text), stemming), ngram_order);
}

}  // namespace tarkit
