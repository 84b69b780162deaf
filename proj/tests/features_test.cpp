#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "tarkit/features.hpp"
#include "testutil.hpp"

using namespace tarkit;

namespace {

std::vector<TokenSequence> sequences(const std::vector<std::string>& texts, int n = 1) {
  std::vector<TokenSequence> out;
  for (const auto& text : texts) out.push_back(preprocess(text, false, n));
  return out;
}

std::vector<Label> labels(std::initializer_list<int> ys) {
  std::vector<Label> out;
  for (int y : ys) out.push_back(y > 0 ? Label::relevant : Label::not_relevant);
  return out;
}

}  // namespace

TEST_CASE("vocabulary counts document frequencies") {
  auto docs = sequences({"a b", "b c"});
  Vocabulary vocab = Vocabulary::build(docs, labels({1, -1}));
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.training_documents() == 2);
  CHECK(vocab.document_frequency(static_cast<std::uint32_t>(vocab.id_of("a"))) == 1);
  CHECK(vocab.document_frequency(static_cast<std::uint32_t>(vocab.id_of("b"))) == 2);
  CHECK(vocab.document_frequency(static_cast<std::uint32_t>(vocab.id_of("c"))) == 1);
  CHECK(vocab.id_of("d") == -1);
}

TEST_CASE("empty documents still count toward N") {
  auto docs = sequences({"", "a"});
  Vocabulary vocab = Vocabulary::build(docs, labels({-1, 1}));
  CHECK(vocab.training_documents() == 2);
  REQUIRE(vocab.size() == 1);
  CHECK(vocab.document_frequency(0) == 1);
}

TEST_CASE("all-empty training set cannot build a vocabulary") {
  auto docs = sequences({"", ""});
  CHECK_THROWS_AS(Vocabulary::build(docs, labels({1, -1})), Error);
}

TEST_CASE("class document counts match a set-based recount") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n_docs = 2 + rng() % 12;
    std::vector<std::string> texts;
    std::vector<Label> doc_labels;
    std::vector<std::vector<std::string>> tokens;
    std::vector<bool> positive;
    for (std::size_t d = 0; d < n_docs; ++d) {
      std::string text;
      const std::size_t len = rng() % 10;
      std::vector<std::string> words;
      for (std::size_t w = 0; w < len; ++w) {
        words.push_back("t" + std::to_string(rng() % 6));
        if (!text.empty()) text.push_back(' ');
        text += words.back();
      }
      texts.push_back(text);
      tokens.push_back(words);
      const bool pos = rng() % 2 == 0;
      positive.push_back(pos);
      doc_labels.push_back(pos ? Label::relevant : Label::not_relevant);
    }
    auto docs = sequences(texts);
    bool any_token = false;
    for (const auto& t : tokens) any_token = any_token || !t.empty();
    if (!any_token) continue;

    Vocabulary vocab = Vocabulary::build(docs, doc_labels);
    auto expected = oracles::recount_vocabulary(tokens, positive);
    REQUIRE(vocab.size() == expected.size());
    for (const auto& [token, counts] : expected) {
      const auto id = static_cast<std::uint32_t>(vocab.id_of(token));
      CHECK(vocab.document_frequency(id) == counts.doc_frequency);
      CHECK(vocab.positive_document_count(id) == counts.positive_docs);
      CHECK(vocab.negative_document_count(id) == counts.negative_docs);
    }
  }
}

TEST_CASE("token_value reproduces the worked normalized-term-frequency example") {
  CHECK(token_value(TokenValueType::normalized_term_frequency, 10, 10, 1, 1) == 1.0);
  CHECK(token_value(TokenValueType::normalized_term_frequency, 2, 10, 1, 1) == 0.6);
}

TEST_CASE("token_value basics") {
  CHECK(token_value(TokenValueType::binary, 7, 9, 1, 1) == 1.0);
  CHECK(token_value(TokenValueType::frequency, 7, 9, 1, 1) == 7.0);
  // a term in every document carries no idf weight
  CHECK(token_value(TokenValueType::tfidf, 3, 5, 100, 100) == 0.0);
  // hand-evaluated: ntf = 0.6, idf = ln(10)
  CHECK(token_value(TokenValueType::tfidf, 2, 10, 100, 10) ==
        doctest::Approx(0.6 * std::log(10.0)).epsilon(1e-12));
  CHECK(token_value(TokenValueType::tfidf, 2, 10, 100, 10) ==
        doctest::Approx(oracles::tfidf_reference(2, 10, 100, 10)).epsilon(1e-12));
}

TEST_CASE("token_value rejects precondition violations instead of clamping") {
  CHECK_THROWS_AS(token_value(TokenValueType::binary, 0, 1, 1, 1), ParameterError);
  CHECK_THROWS_AS(token_value(TokenValueType::frequency, 5, 4, 1, 1), ParameterError);
  CHECK_THROWS_AS(token_value(TokenValueType::tfidf, 1, 1, 10, 0), ParameterError);
  CHECK_THROWS_AS(token_value(TokenValueType::tfidf, 1, 1, 10, 11), ParameterError);
}

TEST_CASE("token_value matches the independent re-evaluation on random tuples") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint32_t tr = 1 + rng() % 60;
    const std::uint32_t max_tf = tr + rng() % 60;
    const std::uint32_t n_t = 1 + rng() % 150;
    const std::size_t n = n_t + rng() % 500;
    CHECK(token_value(TokenValueType::normalized_term_frequency, tr, max_tf, n, n_t) ==
          doctest::Approx(oracles::ntf_reference(tr, max_tf)).epsilon(1e-12));
    CHECK(token_value(TokenValueType::tfidf, tr, max_tf, n, n_t) ==
          doctest::Approx(oracles::tfidf_reference(tr, max_tf, n, n_t)).epsilon(1e-12));
  }
}

TEST_CASE("information gain of deterministic tokens") {
  SUBCASE("perfect discriminator on balanced classes is one bit") {
    auto docs = sequences({"t", "t", "u", "u"});
    Vocabulary vocab = Vocabulary::build(docs, labels({1, 1, -1, -1}));
    auto ig = information_gain(vocab);
    CHECK(ig[static_cast<std::uint32_t>(vocab.id_of("t"))] == doctest::Approx(1.0));
    CHECK(ig[static_cast<std::uint32_t>(vocab.id_of("u"))] == doctest::Approx(1.0));
  }
  SUBCASE("identical presence rates carry no information") {
    auto docs = sequences({"t x", "t", "t x", "t"});
    Vocabulary vocab = Vocabulary::build(docs, labels({1, 1, -1, -1}));
    auto ig = information_gain(vocab);
    CHECK(ig[static_cast<std::uint32_t>(vocab.id_of("t"))] == 0.0);
    CHECK(ig[static_cast<std::uint32_t>(vocab.id_of("x"))] == 0.0);
  }
  SUBCASE("six documents, token in 2 of 3 positives and 1 of 3 negatives") {
    auto docs = sequences({"t", "t", "x", "t", "x", "x"});
    Vocabulary vocab = Vocabulary::build(docs, labels({1, 1, 1, -1, -1, -1}));
    auto ig = information_gain(vocab);
    const double expected = oracles::information_gain_reference(2, 1, 1, 2);
    CHECK(ig[static_cast<std::uint32_t>(vocab.id_of("t"))] ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("single-class training set is rejected") {
    auto docs = sequences({"a", "b"});
    Vocabulary vocab = Vocabulary::build(docs, labels({1, 1}));
    CHECK_THROWS_AS(information_gain(vocab), ParameterError);
  }
}

TEST_CASE("information gain is bounded and label-symmetric") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n_docs = 4 + rng() % 10;
    std::vector<std::string> texts;
    std::vector<Label> ys, flipped;
    bool pos = false, neg = false;
    for (std::size_t d = 0; d < n_docs; ++d) {
      std::string text;
      for (std::size_t w = 0; w < 1 + rng() % 6; ++w) {
        if (!text.empty()) text.push_back(' ');
        text += "t" + std::to_string(rng() % 5);
      }
      texts.push_back(text);
      const bool p = rng() % 2 == 0;
      pos = pos || p;
      neg = neg || !p;
      ys.push_back(p ? Label::relevant : Label::not_relevant);
      flipped.push_back(p ? Label::not_relevant : Label::relevant);
    }
    if (!pos || !neg) continue;
    auto docs = sequences(texts);
    Vocabulary vocab = Vocabulary::build(docs, ys);
    Vocabulary vocab_flipped = Vocabulary::build(docs, flipped);
    auto ig = information_gain(vocab);
    auto ig_flipped = information_gain(vocab_flipped);
    for (std::uint32_t t = 0; t < vocab.size(); ++t) {
      CHECK(ig[t] >= 0.0);
      CHECK(ig[t] <= 1.0 + 1e-15);
      const auto id = static_cast<std::uint32_t>(vocab_flipped.id_of(vocab.token(t)));
      CHECK(ig[t] == doctest::Approx(ig_flipped[id]).epsilon(1e-12));
    }
  }
}

TEST_CASE("select_top_k keeps the highest-gain tokens") {
  auto docs = sequences({"a b d", "a c d", "b c", "c d"});
  Vocabulary vocab = Vocabulary::build(docs, labels({1, 1, -1, -1}));
  auto ig = information_gain(vocab);

  SUBCASE("k at least the vocabulary size keeps everything") {
    ReducedVocabulary all = select_top_k(vocab, ig, 100);
    CHECK(all.size() == vocab.size());
  }
  SUBCASE("k of zero is rejected") {
    CHECK_THROWS_AS(select_top_k(vocab, ig, 0), ParameterError);
  }
  SUBCASE("selection matches a full-sort oracle on a random corpus") {
    std::mt19937_64 rng(47);
    std::vector<std::string> texts;
    std::vector<Label> ys;
    for (int d = 0; d < 40; ++d) {
      std::string text;
      for (int w = 0; w < 12; ++w) {
        if (!text.empty()) text.push_back(' ');
        text += "t" + std::to_string(rng() % 50);
      }
      texts.push_back(text);
      ys.push_back(d % 2 ? Label::relevant : Label::not_relevant);
    }
    auto rdocs = sequences(texts);
    Vocabulary rvocab = Vocabulary::build(rdocs, ys);
    auto rig = information_gain(rvocab);

    std::vector<std::pair<double, std::string>> scored;
    for (std::uint32_t t = 0; t < rvocab.size(); ++t)
      scored.push_back({rig[t], rvocab.token(t)});
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });

    const std::size_t k = 10;
    ReducedVocabulary reduced = select_top_k(rvocab, rig, k);
    REQUIRE(reduced.size() == k);
    for (std::size_t i = 0; i < k; ++i) CHECK(reduced.token(i) == scored[i].second);
  }
}

TEST_CASE("select_top_k ties break lexicographically") {
  // b and a tie on gain; a wins the single slot.
  auto docs = sequences({"a b", "a b", "c", "c"});
  Vocabulary vocab = Vocabulary::build(docs, labels({1, 1, -1, -1}));
  auto ig = information_gain(vocab);
  ReducedVocabulary one = select_top_k(vocab, ig, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.token(0) == "a");
}

TEST_CASE("select_top_k is invariant to document order") {
  std::vector<std::string> texts = {"a b c", "b d", "c d e", "a e"};
  std::vector<Label> ys = labels({1, -1, 1, -1});
  auto docs = sequences(texts);
  Vocabulary vocab = Vocabulary::build(docs, ys);
  ReducedVocabulary direct = select_top_k(vocab, information_gain(vocab), 3);

  std::vector<std::string> shuffled_texts = {texts[2], texts[0], texts[3], texts[1]};
  std::vector<Label> shuffled_ys = {ys[2], ys[0], ys[3], ys[1]};
  auto shuffled_docs = sequences(shuffled_texts);
  Vocabulary shuffled = Vocabulary::build(shuffled_docs, shuffled_ys);
  ReducedVocabulary reordered = select_top_k(shuffled, information_gain(shuffled), 3);

  REQUIRE(direct.size() == reordered.size());
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(direct.token(i) == reordered.token(i));
}

namespace {

// Fixture with every token kept; labels chosen so gains differ.
struct VectorizeFixture {
  std::vector<TokenSequence> docs = sequences({"a a a b", "a b", "b c", "c"});
  std::vector<Label> ys = labels({1, 1, -1, -1});
  Vocabulary vocab = Vocabulary::build(docs, ys);
  std::vector<double> ig = information_gain(vocab);
  ReducedVocabulary reduced = select_top_k(vocab, ig, 100);
};

}  // namespace

TEST_CASE("vectorize produces the documented values") {
  VectorizeFixture f;

  SUBCASE("document with no vocabulary overlap is empty") {
    SparseVector vec = vectorize(preprocess("z q", false, 1), f.reduced,
                                 TokenValueType::binary);
    CHECK(vec.entries.empty());
  }
  SUBCASE("binary marks presence") {
    SparseVector vec = vectorize(preprocess("a a b", false, 1), f.reduced,
                                 TokenValueType::binary);
    REQUIRE(vec.entries.size() == 2);
    for (const auto& entry : vec.entries) CHECK(entry.value == 1.0);
  }
  SUBCASE("normalized term frequency uses the document's max tf") {
    // TR(a)=3, TR(b)=1, max_tf=3: a -> 1.0, b -> 0.5 + 0.5/3
    SparseVector vec = vectorize(preprocess("a a a b", false, 1), f.reduced,
                                 TokenValueType::normalized_term_frequency);
    REQUIRE(vec.entries.size() == 2);
    const auto a = static_cast<std::uint32_t>(f.reduced.reduced_id_of("a"));
    const auto b = static_cast<std::uint32_t>(f.reduced.reduced_id_of("b"));
    for (const auto& entry : vec.entries) {
      if (entry.index == a) CHECK(entry.value == 1.0);
      if (entry.index == b)
        CHECK(entry.value == doctest::Approx(oracles::ntf_reference(1, 3)).epsilon(1e-12));
    }
  }
  SUBCASE("frequency stores raw counts") {
    SparseVector vec = vectorize(preprocess("a a a b", false, 1), f.reduced,
                                 TokenValueType::frequency);
    const auto a = static_cast<std::uint32_t>(f.reduced.reduced_id_of("a"));
    for (const auto& entry : vec.entries)
      if (entry.index == a) CHECK(entry.value == 3.0);
  }
}

TEST_CASE("ntf values stay in range and the modal token hits 1.0") {
  std::mt19937_64 rng(53);
  VectorizeFixture f;
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    for (std::size_t w = 0; w < 1 + rng() % 15; ++w) {
      if (!text.empty()) text.push_back(' ');
      text += std::string(1, static_cast<char>('a' + rng() % 4));
    }
    SparseVector vec = vectorize(preprocess(text, false, 1), f.reduced,
                                 TokenValueType::normalized_term_frequency);
    if (vec.entries.empty()) continue;
    double max_value = 0.0;
    for (const auto& entry : vec.entries) {
      CHECK(entry.value >= 0.5);
      CHECK(entry.value <= 1.0);
      max_value = std::max(max_value, entry.value);
    }
    CHECK(max_value == 1.0);
  }
}

TEST_CASE("tfidf of a token present in every training document vanishes") {
  auto docs = sequences({"everywhere a", "everywhere b", "everywhere c"});
  Vocabulary vocab = Vocabulary::build(docs, labels({1, -1, -1}));
  ReducedVocabulary reduced = select_top_k(vocab, information_gain(vocab), 100);
  for (const char* text : {"everywhere", "everywhere a b", "everywhere everywhere c"}) {
    SparseVector vec = vectorize(preprocess(text, false, 1), reduced, TokenValueType::tfidf);
    const auto id = reduced.reduced_id_of("everywhere");
    for (const auto& entry : vec.entries) {
      CHECK(entry.index != static_cast<std::uint32_t>(id));
      CHECK(entry.value != 0.0);  // zero entries are omitted, not stored
    }
  }
}

TEST_CASE("binary vectorization round-trips to the set of present tokens") {
  std::mt19937_64 rng(59);
  VectorizeFixture f;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> words;
    for (std::size_t w = 0; w < rng() % 10; ++w)
      words.push_back(std::string(1, static_cast<char>('a' + rng() % 6)));
    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text.push_back(' ');
      text += w;
    }
    SparseVector vec = vectorize(preprocess(text, false, 1), f.reduced,
                                 TokenValueType::binary);
    std::set<std::string> present;
    for (const auto& w : words)
      if (f.reduced.reduced_id_of(w) >= 0) present.insert(w);
    REQUIRE(vec.entries.size() == present.size());
    for (const auto& entry : vec.entries) {
      CHECK(entry.value > 0.0);
      CHECK(present.contains(f.reduced.token(entry.index)));
    }
  }
}

TEST_CASE("interned vectorization agrees with the string path") {
  std::mt19937_64 rng(61);
  VectorizeFixture f;
  for (TokenValueType vt : {TokenValueType::binary, TokenValueType::frequency,
                            TokenValueType::normalized_term_frequency,
                            TokenValueType::tfidf}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::string text;
      for (std::size_t w = 0; w < rng() % 12; ++w) {
        if (!text.empty()) text.push_back(' ');
        text += std::string(1, static_cast<char>('a' + rng() % 6));
      }
      TokenSequence seq = preprocess(text, false, 1);
      SparseVector by_string = vectorize(seq, f.reduced, vt);
      SparseVector by_id = vectorize_interned(f.vocab.intern(seq), f.reduced, vt);
      CHECK(by_string.entries == by_id.entries);
    }
  }
}

TEST_CASE("vocabulary dump has the audit columns") {
  VectorizeFixture f;
  std::ostringstream out;
  dump_vocabulary_csv(f.vocab, f.ig, out);
  const std::string dump = out.str();
  CHECK(dump.rfind("token,N_t,pos_doc_count,neg_doc_count,ig_bits\n", 0) == 0);
  CHECK(std::count(dump.begin(), dump.end(), '\n') == 1 + static_cast<long>(f.vocab.size()));
}

TEST_CASE("value type names round-trip") {
  for (TokenValueType vt : {TokenValueType::binary, TokenValueType::frequency,
                            TokenValueType::normalized_term_frequency,
                            TokenValueType::tfidf})
    CHECK(parse_token_value_type(to_string(vt)) == vt);
  CHECK(parse_token_value_type("normalized_term_frequency") ==
        TokenValueType::normalized_term_frequency);
  CHECK_THROWS_AS(parse_token_value_type("bm25"), ParseError);
}
