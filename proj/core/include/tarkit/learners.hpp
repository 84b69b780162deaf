#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tarkit/features.hpp"

namespace tarkit {

enum class AlgorithmChoice { svm, logistic_regression };

const char* to_string(AlgorithmChoice algorithm);
AlgorithmChoice parse_algorithm(std::string_view text);

/// Stopping tolerance when none is given: logistic regression stops on the
/// gradient norm, the SVM on the relative objective improvement per iteration.
double default_tolerance(AlgorithmChoice algorithm);

struct TrainOptions {
  double cost = 1.0;       // C in the regularized objective
  double tolerance = 0.0;  // 0 selects the per-algorithm default
  int max_iterations = 1000;
};

struct TrainedModel {
  std::vector<double> weights;  // one weight per reduced-vocabulary index
  double bias = 0.0;
  AlgorithmChoice algorithm = AlgorithmChoice::logistic_regression;
  double cost = 1.0;
  // Diagnostics from the final iterate.
  double final_objective = 0.0;
  double gradient_norm = 0.0;  // subgradient norm for the SVM
  int iterations = 0;
  bool converged = false;  // set only when the stopping criterion was met
};

/// Minimize 0.5*||w||^2 + C * sum loss(y_i, w.x_i + b) over (w, b), with the
/// bias unregularized. Loss is log(1 + exp(-y f)) for logistic regression and
/// max(0, 1 - y f) for the SVM. Labels must be +1/-1 with both present.
/// Deterministic: identical inputs produce a bit-identical model.
TrainedModel train(std::span<const SparseVector> vectors, std::span<const int> labels,
                   std::size_t dimension, AlgorithmChoice algorithm,
                   const TrainOptions& options = {});

/// Raw margin w.x + b. The logistic link is monotone in it, so ranking by
/// margin and by probability are identical.
double score(const TrainedModel& model, const SparseVector& vector);

/// Objective value and (sub)gradient at `params` = [w_0..w_{d-1}, bias].
/// At the hinge kink (margin exactly 1) the zero branch is used.
std::pair<double, std::vector<double>> objective_and_gradient(
    std::span<const double> params, std::span<const SparseVector> vectors,
    std::span<const int> labels, AlgorithmChoice algorithm, double cost);

/// Audit dump: index, token, weight rows plus bias and diagnostics.
void dump_model_csv(const TrainedModel& model, const ReducedVocabulary& vocabulary,
                    std::ostream& out);

}  // namespace tarkit
