#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "tarkit/evaluation.hpp"
#include "tarkit/features.hpp"
#include "tarkit/learners.hpp"
#include "tarkit/sweep.hpp"
#include "tarkit/textprep.hpp"

using namespace tarkit;

namespace {

std::string make_text(std::mt19937_64& rng, std::size_t words) {
  std::string text;
  for (std::size_t w = 0; w < words; ++w) {
    if (!text.empty()) text.push_back(' ');
    text += "word" + std::to_string(rng() % 400);
  }
  return text;
}

Corpus bench_corpus(std::size_t n_docs) {
  std::mt19937_64 rng(1);
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n_docs; ++i) {
    std::string text = make_text(rng, 20 + rng() % 10);
    const bool relevant = i % 5 == 0;
    if (relevant) text += " marker" + std::to_string(rng() % 8);
    docs.push_back({"d" + std::to_string(i), std::move(text),
                    relevant ? Label::relevant : Label::not_relevant,
                    i % 4 == 3 ? Split::validation : Split::training});
  }
  return Corpus("bench", std::move(docs));
}

}  // namespace

static void BM_Tokenize(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const std::string text = make_text(rng, 200);
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

static void BM_PorterStem(benchmark::State& state) {
  const std::vector<std::string> words = {"generalizations", "running", "hopefulness",
                                          "oscillators", "relational", "cats"};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(porter_stem(words[i % words.size()]));
    ++i;
  }
}
BENCHMARK(BM_PorterStem);

static void BM_ExpandNgrams(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto unigrams = tokenize(make_text(rng, 30));
  for (auto _ : state)
    benchmark::DoNotOptimize(expand_ngrams(unigrams, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ExpandNgrams)->Arg(1)->Arg(2)->Arg(4);

static void BM_BuildVocabulary(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::vector<TokenSequence> docs;
  std::vector<Label> labels;
  for (int d = 0; d < 500; ++d) {
    docs.push_back(preprocess(make_text(rng, 25), false, static_cast<int>(state.range(0))));
    labels.push_back(d % 5 ? Label::not_relevant : Label::relevant);
  }
  for (auto _ : state) benchmark::DoNotOptimize(Vocabulary::build(docs, labels));
}
BENCHMARK(BM_BuildVocabulary)->Arg(1)->Arg(4);

static void BM_Vectorize(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::vector<TokenSequence> docs;
  std::vector<Label> labels;
  for (int d = 0; d < 400; ++d) {
    docs.push_back(preprocess(make_text(rng, 25), false, 2));
    labels.push_back(d % 5 ? Label::not_relevant : Label::relevant);
  }
  Vocabulary vocab = Vocabulary::build(docs, labels);
  ReducedVocabulary reduced = select_top_k(vocab, information_gain(vocab), 2000);
  const TokenSequence probe = preprocess(make_text(rng, 25), false, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        vectorize(probe, reduced, TokenValueType::normalized_term_frequency));
}
BENCHMARK(BM_Vectorize);

static void BM_Train(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::vector<SparseVector> vectors;
  std::vector<int> labels;
  const std::size_t dim = 500;
  for (int i = 0; i < 300; ++i) {
    SparseVector v;
    for (int k = 0; k < 25; ++k)
      v.entries.push_back({static_cast<std::uint32_t>(rng() % dim),
                           0.5 + static_cast<double>(rng() % 100) / 100.0});
    std::sort(v.entries.begin(), v.entries.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    v.entries.erase(std::unique(v.entries.begin(), v.entries.end(),
                                [](const SparseEntry& a, const SparseEntry& b) {
                                  return a.index == b.index;
                                }),
                    v.entries.end());
    const bool relevant = rng() % 4 == 0;
    if (relevant) v.entries[0].index = 0;  // weak planted signal
    vectors.push_back(std::move(v));
    labels.push_back(relevant ? 1 : -1);
  }
  const auto algo = state.range(0) == 0 ? AlgorithmChoice::svm
                                        : AlgorithmChoice::logistic_regression;
  for (auto _ : state) benchmark::DoNotOptimize(train(vectors, labels, dim, algo));
}
BENCHMARK(BM_Train)->Arg(0)->Arg(1);

static void BM_RunExperiment(benchmark::State& state) {
  Corpus corpus = bench_corpus(400);
  PreprocessCache cache(corpus);
  const RecallTargets targets = default_recall_targets();
  ExperimentConfig config;
  config.ngram_order = 2;
  config.token_count = 2000;
  config.tolerance = default_tolerance(config.algorithm);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_experiment(config, corpus, targets, &cache));
}
BENCHMARK(BM_RunExperiment);

BENCHMARK_MAIN();
