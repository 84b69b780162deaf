#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tarkit/corpus.hpp"

namespace tarkit {

struct RankedDocument {
  std::string doc_id;
  double score = 0.0;
  bool relevant = false;
};

/// Validation documents ranked by descending score, ties broken by ascending
/// doc id, with cumulative relevant counts per rank prefix.
class ReviewCurve {
public:
  /// Throws when no document is relevant (every metric would be undefined).
  static ReviewCurve from_ranked(std::vector<RankedDocument> docs);

  const std::vector<RankedDocument>& ranked() const { return ranked_; }
  const std::vector<std::size_t>& cumulative_relevant() const { return cumulative_; }
  std::size_t total_relevant() const { return cumulative_.empty() ? 0 : cumulative_.back(); }
  std::size_t size() const { return ranked_.size(); }

private:
  std::vector<RankedDocument> ranked_;
  std::vector<std::size_t> cumulative_;
};

/// Rank every validation document by its score. Throws when a validation
/// document is missing from `scores`.
ReviewCurve build_curve(const std::unordered_map<std::string, double>& scores,
                        std::span<const Document> validation);

using RecallTargets = std::vector<double>;

/// 30% through 90% in 10-point steps.
RecallTargets default_recall_targets();

/// Throws unless targets are strictly increasing and each in (0, 1].
void validate_recall_targets(std::span<const double> targets);

/// Smallest prefix length whose relevant count reaches ceil(r * total
/// relevant). r = 1 is always achievable at the full set.
std::size_t review_prefix_for_recall(const ReviewCurve& curve, double recall);

/// 100 * prefix length / validation size for the prefix above.
double percent_reviewed_at_recall(const ReviewCurve& curve, double recall);

/// 100 * relevant-in-prefix / prefix length at the same prefix.
double precision_at_recall(const ReviewCurve& curve, double recall);

/// Arithmetic mean of percent_reviewed_at_recall over the targets — the
/// single-number summary of a model's ranking quality.
double model_summary(const ReviewCurve& curve, std::span<const double> targets);

/// Plot-ready dump: rank, doc_id, score, label, cum_relevant.
void dump_curve_csv(const ReviewCurve& curve, std::ostream& out);

}  // namespace tarkit
