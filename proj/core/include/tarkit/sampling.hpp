#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tarkit/corpus.hpp"

namespace tarkit {

struct SamplingSpec {
  double percentage = 100.0;  // in (0, 100]
  std::uint64_t seed = 42;
};

/// Indices of the retained training documents, ascending (original order).
/// All positives are kept; exactly floor(percentage/100 * negative_count)
/// negatives are kept, drawn uniformly without replacement from the seed.
/// Throws when no negative document exists or none would survive.
std::vector<std::size_t> down_sample_indices(std::span<const Label> training_labels,
                                             const SamplingSpec& spec);

std::vector<Document> down_sample(const std::vector<Document>& training_docs,
                                  const SamplingSpec& spec);

}  // namespace tarkit
