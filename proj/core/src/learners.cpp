#include "tarkit/learners.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>

#include "tarkit/csv.hpp"
#include "tarkit/error.hpp"

namespace tarkit {

const char* to_string(AlgorithmChoice algorithm) {
  return algorithm == AlgorithmChoice::svm ? "svm" : "lr";
}

AlgorithmChoice parse_algorithm(std::string_view text) {
  if (text == "svm") return AlgorithmChoice::svm;
  if (text == "lr" || text == "logistic_regression") return AlgorithmChoice::logistic_regression;
  throw ParseError("unknown algorithm \"" + std::string(text) + "\" (expected svm or lr)");
}

double default_tolerance(AlgorithmChoice algorithm) {
  return algorithm == AlgorithmChoice::logistic_regression ? 1e-4 : 1e-3;
}

namespace {

// Compressed row storage; dense vector math over [w, b] dominates training
// time, so the per-document entries are flattened once up front.
struct Dataset {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::vector<std::size_t> offsets;  // size n+1
  std::vector<double> labels;        // +1 / -1
  std::size_t dimension = 0;

  std::size_t size() const { return labels.size(); }

  double margin(std::span<const double> params, std::size_t row) const {
    double f = params[dimension];  // bias
    for (std::size_t k = offsets[row]; k < offsets[row + 1]; ++k)
      f += params[indices[k]] * values[k];
    return f;
  }
};

Dataset make_dataset(std::span<const SparseVector> vectors, std::span<const int> labels,
                     std::size_t dimension) {
  Dataset data;
  data.dimension = dimension;
  data.offsets.reserve(vectors.size() + 1);
  data.offsets.push_back(0);
  data.labels.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (const SparseEntry& entry : vectors[i].entries) {
      if (entry.index >= dimension)
        throw Error("feature index " + std::to_string(entry.index) +
                    " out of bounds for dimension " + std::to_string(dimension));
      if (!std::isfinite(entry.value))
        throw Error("non-finite feature value in document \"" + vectors[i].doc_id + "\"");
      data.indices.push_back(entry.index);
      data.values.push_back(entry.value);
    }
    data.offsets.push_back(data.indices.size());
    data.labels.push_back(labels[i] > 0 ? 1.0 : -1.0);
  }
  return data;
}

// log(1 + exp(-z)) without overflow.
double log1p_exp_neg(double z) {
  if (z >= 0) return std::log1p(std::exp(-z));
  return -z + std::log1p(std::exp(z));
}

// sigma(-z) = 1 / (1 + exp(z)) without overflow.
double sigmoid_neg(double z) {
  if (z >= 0) {
    double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

double objective_only(const Dataset& data, std::span<const double> params,
                      AlgorithmChoice algorithm, double cost) {
  double obj = 0.0;
  for (std::size_t j = 0; j < data.dimension; ++j) obj += params[j] * params[j];
  obj *= 0.5;

  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = data.labels[i] * data.margin(params, i);
    if (algorithm == AlgorithmChoice::logistic_regression) {
      loss += log1p_exp_neg(z);
    } else {
      if (z < 1.0) loss += 1.0 - z;
    }
  }
  return obj + cost * loss;
}

double objective_gradient(const Dataset& data, std::span<const double> params,
                          AlgorithmChoice algorithm, double cost, std::vector<double>& grad) {
  grad.assign(data.dimension + 1, 0.0);
  double obj = 0.0;
  for (std::size_t j = 0; j < data.dimension; ++j) {
    obj += params[j] * params[j];
    grad[j] = params[j];
  }
  obj *= 0.5;

  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double y = data.labels[i];
    const double z = y * data.margin(params, i);
    double coeff;  // d loss / d margin, times y
    if (algorithm == AlgorithmChoice::logistic_regression) {
      loss += log1p_exp_neg(z);
      coeff = -y * sigmoid_neg(z);
    } else {
      if (z < 1.0) {  // margin exactly 1 takes the zero branch
        loss += 1.0 - z;
        coeff = -y;
      } else {
        continue;
      }
    }
    const double scaled = cost * coeff;
    for (std::size_t k = data.offsets[i]; k < data.offsets[i + 1]; ++k)
      grad[data.indices[k]] += scaled * data.values[k];
    grad[data.dimension] += scaled;
  }
  return obj + cost * loss;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct SolverState {
  std::vector<double> params;
  double objective = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// L-BFGS with Armijo backtracking. The logistic objective is smooth and the
// L2 term keeps it well conditioned, so a short history is enough.
SolverState solve_logistic(const Dataset& data, double cost, double tolerance,
                           int max_iterations) {
  constexpr std::size_t kHistory = 8;
  constexpr double kArmijo = 1e-4;

  SolverState state;
  state.params.assign(data.dimension + 1, 0.0);

  std::vector<double> grad;
  double f = objective_gradient(data, state.params, AlgorithmChoice::logistic_regression,
                                cost, grad);
  std::deque<std::pair<std::vector<double>, std::vector<double>>> history;  // (s, y)
  std::vector<double> direction(grad.size());
  std::vector<double> candidate(grad.size());
  std::vector<double> grad_new;

  for (int iter = 0; iter < max_iterations; ++iter) {
    const double gnorm = norm2(grad);
    if (gnorm <= tolerance) {
      state.converged = true;
      break;
    }

    // Two-loop recursion.
    direction.assign(grad.begin(), grad.end());
    std::vector<double> alpha(history.size());
    for (std::size_t h = history.size(); h-- > 0;) {
      const auto& [s, y] = history[h];
      const double rho = 1.0 / dot(s, y);
      alpha[h] = rho * dot(s, direction);
      for (std::size_t j = 0; j < direction.size(); ++j) direction[j] -= alpha[h] * y[j];
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      const double gamma = dot(s, y) / dot(y, y);
      for (double& dj : direction) dj *= gamma;
    }
    for (std::size_t h = 0; h < history.size(); ++h) {
      const auto& [s, y] = history[h];
      const double rho = 1.0 / dot(s, y);
      const double beta = rho * dot(y, direction);
      for (std::size_t j = 0; j < direction.size(); ++j)
        direction[j] += (alpha[h] - beta) * s[j];
    }
    for (double& dj : direction) dj = -dj;

    double descent = dot(grad, direction);
    if (descent >= 0) {  // not a descent direction; fall back to steepest
      for (std::size_t j = 0; j < direction.size(); ++j) direction[j] = -grad[j];
      descent = -gnorm * gnorm;
    }

    double step = history.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
    double f_new = f;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      for (std::size_t j = 0; j < candidate.size(); ++j)
        candidate[j] = state.params[j] + step * direction[j];
      f_new = objective_only(data, candidate, AlgorithmChoice::logistic_regression, cost);
      if (f_new <= f + kArmijo * step * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      state.converged = gnorm <= tolerance;
      break;
    }

    f = objective_gradient(data, candidate, AlgorithmChoice::logistic_regression, cost,
                           grad_new);
    std::vector<double> s(grad.size()), y(grad.size());
    for (std::size_t j = 0; j < grad.size(); ++j) {
      s[j] = candidate[j] - state.params[j];
      y[j] = grad_new[j] - grad[j];
    }
    if (double sy = dot(s, y); sy > 1e-12 * norm2(s) * norm2(y)) {
      history.emplace_back(std::move(s), std::move(y));
      if (history.size() > kHistory) history.pop_front();
    }
    state.params.swap(candidate);
    grad.swap(grad_new);
    state.iterations = iter + 1;
  }

  state.objective = f;
  state.gradient_norm = norm2(grad);
  if (state.gradient_norm <= tolerance) state.converged = true;
  return state;
}

// Subgradient descent with backtracking on the objective. Stops when the
// relative objective improvement of an iteration falls below the tolerance.
SolverState solve_svm(const Dataset& data, double cost, double tolerance,
                      int max_iterations) {
  constexpr double kArmijo = 1e-4;

  SolverState state;
  state.params.assign(data.dimension + 1, 0.0);

  std::vector<double> grad;
  double f = objective_gradient(data, state.params, AlgorithmChoice::svm, cost, grad);
  std::vector<double> candidate(grad.size());
  double step_hint = 0.0;

  for (int iter = 0; iter < max_iterations; ++iter) {
    const double gnorm = norm2(grad);
    if (gnorm == 0.0) {
      state.converged = true;
      break;
    }

    double step = iter == 0 ? 1.0 / std::max(1.0, gnorm) : std::min(1.0, 2.0 * step_hint);
    double f_new = f;
    bool accepted = false;
    for (int half = 0; half < 50; ++half) {
      for (std::size_t j = 0; j < candidate.size(); ++j)
        candidate[j] = state.params[j] - step * grad[j];
      f_new = objective_only(data, candidate, AlgorithmChoice::svm, cost);
      if (f_new <= f - kArmijo * step * gnorm * gnorm) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent step found along this subgradient: the improvement this
      // iteration is zero, which meets the stopping criterion.
      state.converged = true;
      break;
    }
    step_hint = step;

    const double improvement = (f - f_new) / std::max(1.0, std::abs(f));
    state.params.swap(candidate);
    f = objective_gradient(data, state.params, AlgorithmChoice::svm, cost, grad);
    state.iterations = iter + 1;
    if (improvement < tolerance) {
      state.converged = true;
      break;
    }
  }

  state.objective = f;
  state.gradient_norm = norm2(grad);
  return state;
}

}  // namespace

TrainedModel train(std::span<const SparseVector> vectors, std::span<const int> labels,
                   std::size_t dimension, AlgorithmChoice algorithm,
                   const TrainOptions& options) {
  if (vectors.size() != labels.size())
    throw ParameterError("train: vector and label counts differ");
  if (vectors.empty()) throw Error("train: empty training set");
  if (dimension == 0) throw Error("train: empty feature space");
  if (options.cost <= 0) throw ParameterError("train: C must be positive");
  if (options.tolerance < 0) throw ParameterError("train: tolerance must be >= 0");
  if (options.max_iterations < 1)
    throw ParameterError("train: max_iterations must be >= 1");

  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y > 0) has_pos = true;
    else if (y < 0) has_neg = true;
    else throw ParameterError("train: labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw Error("train: both classes must be present");

  const Dataset data = make_dataset(vectors, labels, dimension);
  const double tolerance =
      options.tolerance > 0 ? options.tolerance : default_tolerance(algorithm);

  SolverState state = algorithm == AlgorithmChoice::logistic_regression
                          ? solve_logistic(data, options.cost, tolerance,
                                           options.max_iterations)
                          : solve_svm(data, options.cost, tolerance, options.max_iterations);

  TrainedModel model;
  model.weights.assign(state.params.begin(), state.params.end() - 1);
  model.bias = state.params.back();
  model.algorithm = algorithm;
  model.cost = options.cost;
  model.final_objective = state.objective;
  model.gradient_norm = state.gradient_norm;
  model.iterations = state.iterations;
  model.converged = state.converged;
  return model;
}

double score(const TrainedModel& model, const SparseVector& vector) {
  double f = model.bias;
  for (const SparseEntry& entry : vector.entries) {
    if (entry.index >= model.weights.size())
      throw Error("score: feature index " + std::to_string(entry.index) +
                  " out of bounds for model of dimension " +
                  std::to_string(model.weights.size()));
    f += model.weights[entry.index] * entry.value;
  }
  return f;
}

std::pair<double, std::vector<double>> objective_and_gradient(
    std::span<const double> params, std::span<const SparseVector> vectors,
    std::span<const int> labels, AlgorithmChoice algorithm, double cost) {
  if (params.empty()) throw ParameterError("objective_and_gradient: empty parameters");
  for (double p : params)
    if (!std::isfinite(p)) throw Error("objective_and_gradient: non-finite parameter");
  if (!std::isfinite(cost) || cost <= 0)
    throw ParameterError("objective_and_gradient: C must be positive and finite");

  const Dataset data = make_dataset(vectors, labels, params.size() - 1);
  std::vector<double> grad;
  double obj = objective_gradient(data, params, algorithm, cost, grad);
  return {obj, std::move(grad)};
}

void dump_model_csv(const TrainedModel& model, const ReducedVocabulary& vocabulary,
                    std::ostream& out) {
  if (vocabulary.size() != model.weights.size())
    throw ParameterError("model dump: vocabulary does not match model dimension");
  out << "index,token,weight\n";
  for (std::size_t i = 0; i < model.weights.size(); ++i)
    out << i << ',' << csv::escape(vocabulary.token(static_cast<std::uint32_t>(i))) << ','
        << csv::format_double(model.weights[i]) << '\n';
  out << "# bias," << csv::format_double(model.bias) << '\n';
  out << "# algorithm," << to_string(model.algorithm) << '\n';
  out << "# objective," << csv::format_double(model.final_objective) << '\n';
  out << "# gradient_norm," << csv::format_double(model.gradient_norm) << '\n';
  out << "# iterations," << model.iterations << '\n';
  out << "# converged," << (model.converged ? "true" : "false") << '\n';
}

}  // namespace tarkit
