#include "tarkit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tarkit/error.hpp"

namespace tarkit {

std::vector<std::size_t> down_sample_indices(std::span<const Label> training_labels,
                                             const SamplingSpec& spec) {
  if (!(spec.percentage > 0.0 && spec.percentage <= 100.0))
    throw ParameterError("sampling percentage must be in (0, 100], got " +
                         std::to_string(spec.percentage));

  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < training_labels.size(); ++i) {
    if (training_labels[i] == Label::relevant) positives.push_back(i);
    else negatives.push_back(i);
  }
  if (negatives.empty())
    throw Error("down-sampling requires at least one negative training document");

  const std::size_t keep = static_cast<std::size_t>(
      std::floor(spec.percentage / 100.0 * static_cast<double>(negatives.size())));
  if (keep == 0)
    throw Error("down-sampling to " + std::to_string(spec.percentage) +
                "% would leave zero negative documents");

  if (keep < negatives.size()) {
    // Partial Fisher-Yates on the raw engine output: fully specified, so the
    // retained set is reproducible from the seed alone.
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = 0; i < keep; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng() % (negatives.size() - i));
      std::swap(negatives[i], negatives[j]);
    }
    negatives.resize(keep);
    std::sort(negatives.begin(), negatives.end());
  }

  std::vector<std::size_t> retained;
  retained.reserve(positives.size() + negatives.size());
  std::merge(positives.begin(), positives.end(), negatives.begin(), negatives.end(),
             std::back_inserter(retained));
  return retained;
}

std::vector<Document> down_sample(const std::vector<Document>& training_docs,
                                  const SamplingSpec& spec) {
  std::vector<Label> labels;
  labels.reserve(training_docs.size());
  for (const Document& doc : training_docs) labels.push_back(doc.label);

  std::vector<Document> out;
  for (std::size_t i : down_sample_indices(labels, spec)) out.push_back(training_docs[i]);
  return out;
}

}  // namespace tarkit
