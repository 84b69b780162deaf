#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tarkit/corpus.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("tarkit_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

#ifdef TARKIT_BIN_PATH
/// Run the tarkit binary with the given arguments.
inline CommandResult run_cli(const std::string& args) {
  const std::string command = std::string(TARKIT_BIN_PATH) + " " + args + " 2>&1";
  CommandResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = ::fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), n);
  int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}
#endif

inline std::string read_file(const std::filesystem::path& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return {};
  std::string content;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), f)) > 0)
    content.append(buffer.data(), n);
  std::fclose(f);
  return content;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  FILE* f = std::fopen(path.c_str(), "wb");
  std::fwrite(content.data(), 1, content.size(), f);
  std::fclose(f);
}

// ---------------------------------------------------------------------------
// Synthetic corpora

/// Documents whose relevance is determined by planted signal tokens. Filler
/// words carry no class information; most relevant documents carry 1-3 signal
/// tokens, every tenth carries none, and a small fraction of negatives carry
/// a stray one.
inline tarkit::Corpus make_planted_corpus(std::size_t n_docs, std::uint64_t seed,
                                          std::size_t filler_pool = 250,
                                          std::size_t n_signal = 20) {
  std::mt19937_64 rng(seed);
  auto filler = [&](std::size_t i) { return "w" + std::to_string(i % filler_pool); };
  auto signal = [&](std::size_t i) { return "sig" + std::to_string(i % n_signal); };

  std::vector<tarkit::Document> docs;
  docs.reserve(n_docs);
  std::size_t train_seen = 0, valid_seen = 0, relevant_train = 0, relevant_valid = 0;
  for (std::size_t i = 0; i < n_docs; ++i) {
    const bool validation = i % 4 == 3;
    std::size_t& seen = validation ? valid_seen : train_seen;
    // 15% prevalence, exact within each split: 3 of every 20 documents
    const bool relevant = seen % 20 < 3;
    ++seen;
    if (relevant) ++(validation ? relevant_valid : relevant_train);

    std::vector<std::string> words;
    const std::size_t len = 18 + rng() % 13;
    for (std::size_t w = 0; w < len; ++w) words.push_back(filler(rng()));

    if (relevant) {
      const bool blind = (validation ? relevant_valid : relevant_train) % 10 == 0;
      if (!blind) {
        const std::size_t k = 1 + rng() % 3;
        for (std::size_t s = 0; s < k; ++s)
          words.insert(words.begin() + static_cast<long>(rng() % (words.size() + 1)),
                       signal(rng()));
      }
    } else if (rng() % 50 == 0) {
      words.insert(words.begin() + static_cast<long>(rng() % (words.size() + 1)),
                   signal(rng()));
    }

    std::string text;
    for (const std::string& w : words) {
      if (!text.empty()) text.push_back(' ');
      text += w;
    }
    docs.push_back({"d" + std::to_string(i), std::move(text),
                    relevant ? tarkit::Label::relevant : tarkit::Label::not_relevant,
                    validation ? tarkit::Split::validation : tarkit::Split::training});
  }
  return tarkit::Corpus("planted", std::move(docs));
}

/// 1:10 class imbalance with a weak, noisy signal: some positives barely
/// distinguishable, negatives numerous and diverse.
inline tarkit::Corpus make_imbalanced_corpus(std::size_t n_positive_train,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t filler_pool = 300;
  const std::size_t n_signal = 10;
  auto filler = [&](std::size_t i) { return "w" + std::to_string(i % filler_pool); };
  auto signal = [&](std::size_t i) { return "sig" + std::to_string(i % n_signal); };

  std::vector<tarkit::Document> docs;
  std::size_t id = 0;
  auto add = [&](bool relevant, tarkit::Split split) {
    std::vector<std::string> words;
    const std::size_t len = 15 + rng() % 10;
    for (std::size_t w = 0; w < len; ++w) words.push_back(filler(rng()));
    if (relevant) {
      // weak signal: one marker most of the time, sometimes none
      if (rng() % 5 != 0)
        words.insert(words.begin() + static_cast<long>(rng() % (words.size() + 1)),
                     signal(rng()));
    } else if (rng() % 12 == 0) {
      words.insert(words.begin() + static_cast<long>(rng() % (words.size() + 1)),
                   signal(rng()));
    }
    std::string text;
    for (const std::string& w : words) {
      if (!text.empty()) text.push_back(' ');
      text += w;
    }
    docs.push_back({"d" + std::to_string(id++), std::move(text),
                    relevant ? tarkit::Label::relevant : tarkit::Label::not_relevant,
                    split});
  };

  for (std::size_t i = 0; i < n_positive_train; ++i) add(true, tarkit::Split::training);
  for (std::size_t i = 0; i < 10 * n_positive_train; ++i)
    add(false, tarkit::Split::training);
  for (std::size_t i = 0; i < n_positive_train / 2; ++i)
    add(true, tarkit::Split::validation);
  for (std::size_t i = 0; i < 5 * n_positive_train; ++i)
    add(false, tarkit::Split::validation);
  return tarkit::Corpus("imbalanced", std::move(docs));
}

/// Uniformly random labels/splits/texts for property tests.
inline tarkit::Corpus make_random_corpus(std::size_t n_docs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<tarkit::Document> docs;
  for (std::size_t i = 0; i < n_docs; ++i) {
    std::string text;
    const std::size_t len = rng() % 12;
    for (std::size_t w = 0; w < len; ++w) {
      if (!text.empty()) text.push_back(' ');
      text += "t" + std::to_string(rng() % 30);
    }
    docs.push_back({"r" + std::to_string(i), std::move(text),
                    rng() % 2 ? tarkit::Label::relevant : tarkit::Label::not_relevant,
                    rng() % 3 == 0 ? tarkit::Split::validation : tarkit::Split::training});
  }
  return tarkit::Corpus("random", std::move(docs));
}

}  // namespace testutil
