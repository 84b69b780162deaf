#include "tarkit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tarkit/csv.hpp"
#include "tarkit/error.hpp"

namespace tarkit {

ReviewCurve ReviewCurve::from_ranked(std::vector<RankedDocument> docs) {
  std::sort(docs.begin(), docs.end(), [](const RankedDocument& a, const RankedDocument& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });

  ReviewCurve curve;
  curve.cumulative_.reserve(docs.size());
  std::size_t relevant = 0;
  for (const RankedDocument& doc : docs) {
    if (doc.relevant) ++relevant;
    curve.cumulative_.push_back(relevant);
  }
  if (relevant == 0)
    throw Error("review curve needs at least one relevant document; metrics are undefined");
  curve.ranked_ = std::move(docs);
  return curve;
}

ReviewCurve build_curve(const std::unordered_map<std::string, double>& scores,
                        std::span<const Document> validation) {
  std::vector<RankedDocument> docs;
  docs.reserve(validation.size());
  for (const Document& doc : validation) {
    auto it = scores.find(doc.id);
    if (it == scores.end())
      throw Error("missing score for validation document \"" + doc.id + "\"");
    docs.push_back({doc.id, it->second, doc.label == Label::relevant});
  }
  return ReviewCurve::from_ranked(std::move(docs));
}

RecallTargets default_recall_targets() { return {0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90}; }

void validate_recall_targets(std::span<const double> targets) {
  if (targets.empty()) throw ParameterError("recall targets must be non-empty");
  double prev = 0.0;
  for (double t : targets) {
    if (!(t > prev && t <= 1.0))
      throw ParameterError("recall targets must be strictly increasing and in (0, 1]");
    prev = t;
  }
}

std::size_t review_prefix_for_recall(const ReviewCurve& curve, double recall) {
  if (!(recall > 0.0 && recall <= 1.0))
    throw ParameterError("recall must be in (0, 1], got " + std::to_string(recall));
  const std::size_t total = curve.total_relevant();
  // ceil(r * total); the epsilon absorbs cases like 0.3 * 10 landing a hair
  // above the integer it represents.
  const double scaled = recall * static_cast<double>(total);
  std::size_t required = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
  required = std::clamp<std::size_t>(required, 1, total);

  const auto& cumulative = curve.cumulative_relevant();
  auto it = std::lower_bound(cumulative.begin(), cumulative.end(), required);
  return static_cast<std::size_t>(it - cumulative.begin()) + 1;
}

double percent_reviewed_at_recall(const ReviewCurve& curve, double recall) {
  return 100.0 * static_cast<double>(review_prefix_for_recall(curve, recall)) /
         static_cast<double>(curve.size());
}

double precision_at_recall(const ReviewCurve& curve, double recall) {
  const std::size_t prefix = review_prefix_for_recall(curve, recall);
  return 100.0 * static_cast<double>(curve.cumulative_relevant()[prefix - 1]) /
         static_cast<double>(prefix);
}

double model_summary(const ReviewCurve& curve, std::span<const double> targets) {
  if (targets.empty()) throw ParameterError("model summary needs at least one recall target");
  double sum = 0.0;
  for (double t : targets) sum += percent_reviewed_at_recall(curve, t);
  return sum / static_cast<double>(targets.size());
}

void dump_curve_csv(const ReviewCurve& curve, std::ostream& out) {
  out << "rank,doc_id,score,label,cum_relevant\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const RankedDocument& doc = curve.ranked()[i];
    out << (i + 1) << ',' << csv::escape(doc.doc_id) << ',' << csv::format_double(doc.score)
        << ',' << (doc.relevant ? "relevant" : "not_relevant") << ','
        << curve.cumulative_relevant()[i] << '\n';
  }
}

}  // namespace tarkit
