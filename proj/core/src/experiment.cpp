#include <chrono>
#include <cmath>

#include "tarkit/error.hpp"
#include "tarkit/sweep.hpp"

namespace tarkit {

std::shared_ptr<const PreprocessCache::Prepared> PreprocessCache::get(bool stemming,
                                                                      int ngram_order) {
  const std::pair<bool, int> key{stemming, ngram_order};
  std::shared_future<std::shared_ptr<const Prepared>> future;
  std::promise<std::shared_ptr<const Prepared>> promise;
  bool builder = false;
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      future = promise.get_future().share();
      cache_.emplace(key, future);
      builder = true;
    } else {
      future = it->second;
    }
  }

  if (builder) {
    try {
      auto prepared = std::make_shared<Prepared>();
      std::vector<TokenSequence> training_sequences;
      std::vector<TokenSequence> validation_sequences;
      for (const Document& doc : corpus_->documents()) {
        TokenSequence seq = preprocess(doc.text, stemming, ngram_order);
        if (doc.split == Split::training) {
          training_sequences.push_back(std::move(seq));
          prepared->training_labels.push_back(doc.label);
          prepared->training_ids.push_back(doc.id);
        } else {
          validation_sequences.push_back(std::move(seq));
          prepared->validation_ids.push_back(doc.id);
          prepared->validation_relevant.push_back(doc.label == Label::relevant);
        }
      }

      prepared->vocabulary = Vocabulary::build(training_sequences, prepared->training_labels,
                                               &prepared->training_grams);
      prepared->validation_grams.reserve(validation_sequences.size());
      for (const TokenSequence& seq : validation_sequences)
        prepared->validation_grams.push_back(prepared->vocabulary.intern(seq));

      prepared->ig = information_gain(prepared->vocabulary);
      prepared->ranking = rank_by_information_gain(prepared->vocabulary, prepared->ig);
      promise.set_value(std::move(prepared));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return future.get();
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Corpus& corpus,
                                std::span<const double> targets, PreprocessCache* cache) {
  validate_recall_targets(targets);
  const auto start = std::chrono::steady_clock::now();

  ExperimentResult result;
  result.config = config;
  try {
    require_trainable(corpus);

    PreprocessCache local_cache(corpus);
    PreprocessCache& effective = cache ? *cache : local_cache;
    auto prepared = effective.get(config.stemming, config.ngram_order);

    result.vocabulary_size = prepared->vocabulary.size();
    if (config.token_count < 1)
      throw ParameterError("token count must be >= 1, got " +
                           std::to_string(config.token_count));
    ReducedVocabulary reduced =
        select_top_k(prepared->vocabulary, prepared->ig, prepared->ranking,
                     static_cast<std::size_t>(config.token_count));
    result.selected_tokens = reduced.size();

    const std::vector<std::size_t> retained = down_sample_indices(
        prepared->training_labels, {config.sampling_percentage, config.seed});
    result.training_docs = retained.size();

    std::vector<SparseVector> train_vectors;
    std::vector<int> train_labels;
    train_vectors.reserve(retained.size());
    train_labels.reserve(retained.size());
    for (std::size_t i : retained) {
      train_vectors.push_back(vectorize_interned(prepared->training_grams[i], reduced,
                                                 config.value_type));
      train_labels.push_back(prepared->training_labels[i] == Label::relevant ? 1 : -1);
    }

    TrainOptions options;
    options.cost = config.cost;
    options.tolerance = config.tolerance;
    options.max_iterations = config.max_iterations;
    TrainedModel model =
        train(train_vectors, train_labels, reduced.size(), config.algorithm, options);
    result.converged = model.converged;
    result.iterations = model.iterations;

    std::vector<RankedDocument> ranked;
    ranked.reserve(prepared->validation_ids.size());
    for (std::size_t v = 0; v < prepared->validation_ids.size(); ++v) {
      SparseVector vec =
          vectorize_interned(prepared->validation_grams[v], reduced, config.value_type);
      ranked.push_back({prepared->validation_ids[v], score(model, vec),
                        prepared->validation_relevant[v]});
    }
    ReviewCurve curve = ReviewCurve::from_ranked(std::move(ranked));

    result.percent_reviewed.reserve(targets.size());
    result.precision.reserve(targets.size());
    for (double t : targets) {
      result.percent_reviewed.push_back(percent_reviewed_at_recall(curve, t));
      result.precision.push_back(precision_at_recall(curve, t));
    }
    result.avg_percent_reviewed = model_summary(curve, targets);
  } catch (const std::exception& e) {
    throw Error(std::string(e.what()) + " [" + config.describe() + "]");
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Corpus& corpus) {
  const RecallTargets targets = default_recall_targets();
  return run_experiment(config, corpus, targets, nullptr);
}

}  // namespace tarkit
