#include <doctest.h>

#include <random>

#include "tarkit/corpus.hpp"
#include "testutil.hpp"

using namespace tarkit;

namespace {

// Dataset fixture with a prescribed class distribution.
Corpus make_fixture(const ClassDistribution& dist) {
  std::vector<Document> docs;
  std::size_t id = 0;
  auto add = [&](std::size_t n, Label label, Split split) {
    for (std::size_t i = 0; i < n; ++i)
      docs.push_back({"doc" + std::to_string(id++), "some text body", label, split});
  };
  add(dist.training_relevant, Label::relevant, Split::training);
  add(dist.training_not_relevant, Label::not_relevant, Split::training);
  add(dist.validation_relevant, Label::relevant, Split::validation);
  add(dist.validation_not_relevant, Label::not_relevant, Split::validation);
  return Corpus("fixture", std::move(docs));
}

}  // namespace

TEST_CASE("load_dataset reads well-formed jsonl") {
  testutil::TempDir dir;
  testutil::write_file(dir.file("two.jsonl"),
                       R"({"id":"a","text":"first text","label":"relevant","split":"training"})"
                       "\n"
                       R"({"id":"b","text":"second","label":"not_relevant","split":"validation"})"
                       "\n");
  Corpus corpus = load_dataset(dir.file("two.jsonl"));
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.documents()[0].id == "a");
  CHECK(corpus.documents()[0].label == Label::relevant);
  CHECK(corpus.documents()[0].split == Split::training);
  CHECK(corpus.documents()[1].text == "second");
  CHECK(corpus.name() == "two");
}

TEST_CASE("load_dataset rejects bad records with line numbers") {
  testutil::TempDir dir;

  SUBCASE("unknown label value") {
    testutil::write_file(dir.file("bad.jsonl"),
                         R"({"id":"a","text":"x","label":"relevant","split":"training"})"
                         "\n"
                         R"({"id":"b","text":"y","label":"maybe","split":"training"})"
                         "\n");
    try {
      load_dataset(dir.file("bad.jsonl"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      CHECK(msg.find(":2") != std::string::npos);
      CHECK(msg.find("maybe") != std::string::npos);
      CHECK(msg.find("label") != std::string::npos);
    }
  }

  SUBCASE("unknown split value") {
    testutil::write_file(dir.file("bad.jsonl"),
                         R"({"id":"a","text":"x","label":"relevant","split":"test"})"
                         "\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.file("bad.jsonl")),
                         doctest::Contains("split"), ParseError);
  }

  SUBCASE("duplicate id reports both lines") {
    testutil::write_file(dir.file("dup.jsonl"),
                         R"({"id":"a","text":"x","label":"relevant","split":"training"})"
                         "\n"
                         R"({"id":"a","text":"y","label":"relevant","split":"training"})"
                         "\n");
    try {
      load_dataset(dir.file("dup.jsonl"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      CHECK(msg.find(":2") != std::string::npos);
      CHECK(msg.find("line 1") != std::string::npos);
    }
  }

  SUBCASE("missing field") {
    testutil::write_file(dir.file("missing.jsonl"), R"({"id":"a","text":"x","label":"relevant"})"
                                                    "\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.file("missing.jsonl")),
                         doctest::Contains("split"), ParseError);
  }

  SUBCASE("invalid json names the line") {
    testutil::write_file(dir.file("broken.jsonl"),
                         R"({"id":"a","text":"x","label":"relevant","split":"training"})"
                         "\n{oops\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.file("broken.jsonl")), doctest::Contains(":2"),
                         ParseError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_dataset(dir.file("absent.jsonl")), Error);
  }
}

TEST_CASE("csv datasets round-trip, text quoted") {
  testutil::TempDir dir;
  std::vector<Document> docs = {
      {"a", "plain text", Label::relevant, Split::training},
      {"b", "commas, \"quotes\" and\nnewlines", Label::not_relevant, Split::training},
      {"c", "", Label::not_relevant, Split::validation},
      {"d", "trailing space ", Label::relevant, Split::validation},
  };
  Corpus corpus("roundtrip", docs);
  save_dataset_csv(corpus, dir.file("data.csv"));
  Corpus loaded = load_dataset(dir.file("data.csv"));
  REQUIRE(loaded.size() == docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(loaded.documents()[i].id == docs[i].id);
    CHECK(loaded.documents()[i].text == docs[i].text);
    CHECK(loaded.documents()[i].label == docs[i].label);
    CHECK(loaded.documents()[i].split == docs[i].split);
  }
}

TEST_CASE("csv header validation") {
  testutil::TempDir dir;

  SUBCASE("unknown column") {
    testutil::write_file(dir.file("bad.csv"), "id,text,label,split,extra\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.file("bad.csv")), doctest::Contains("extra"),
                         ParseError);
  }
  SUBCASE("missing column") {
    testutil::write_file(dir.file("bad.csv"), "id,text,label\n");
    CHECK_THROWS_AS(load_dataset(dir.file("bad.csv")), ParseError);
  }
  SUBCASE("column order is free") {
    testutil::write_file(dir.file("ok.csv"),
                         "split,label,id,text\ntraining,relevant,x,\"hello\"\n");
    Corpus corpus = load_dataset(dir.file("ok.csv"));
    REQUIRE(corpus.size() == 1);
    CHECK(corpus.documents()[0].id == "x");
    CHECK(corpus.documents()[0].text == "hello");
  }
  SUBCASE("bad label names the record line") {
    testutil::write_file(dir.file("bad.csv"),
                         "id,text,label,split\na,\"x\",relevant,training\nb,\"y\",nope,training\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.file("bad.csv")), doctest::Contains(":3"),
                         ParseError);
  }
}

TEST_CASE("dataset_stats matches the table-1 shaped fixtures") {
  // Project 1 and Project 3 class distributions used as format fixtures.
  const ClassDistribution project1{1126, 2897, 206, 1368};
  const ClassDistribution project3{5743, 6540, 801, 788};

  CHECK(dataset_stats(make_fixture(project1)) == project1);
  CHECK(dataset_stats(make_fixture(project3)) == project3);

  // Through a file as well: counts survive serialization.
  testutil::TempDir dir;
  save_dataset_jsonl(make_fixture(project1), dir.file("p1.jsonl"));
  CHECK(dataset_stats(load_dataset(dir.file("p1.jsonl"))) == project1);
}

TEST_CASE("dataset_stats edge cells") {
  CHECK(dataset_stats(Corpus{}) == ClassDistribution{0, 0, 0, 0});
  CHECK(dataset_stats(make_fixture({1, 0, 0, 0})) == ClassDistribution{1, 0, 0, 0});
}

TEST_CASE("dataset_stats cells sum to corpus size on random corpora") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Corpus corpus = testutil::make_random_corpus(1 + seed * 7 % 60, seed);
    CHECK(dataset_stats(corpus).total() == corpus.size());
  }
}

TEST_CASE("loading is deterministic") {
  testutil::TempDir dir;
  Corpus original = testutil::make_random_corpus(40, 99);
  save_dataset_jsonl(original, dir.file("d.jsonl"));
  Corpus first = load_dataset(dir.file("d.jsonl"));
  Corpus second = load_dataset(dir.file("d.jsonl"));
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first.documents()[i].id == second.documents()[i].id);
    CHECK(first.documents()[i].text == second.documents()[i].text);
  }
  CHECK(corpus_checksum(first) == corpus_checksum(second));
  CHECK(corpus_checksum(first) == corpus_checksum(original));
}

TEST_CASE("corpus constructor enforces ids") {
  CHECK_THROWS_AS(Corpus("x", {{"", "t", Label::relevant, Split::training}}), Error);
  CHECK_THROWS_AS(Corpus("x", {{"a", "t", Label::relevant, Split::training},
                               {"a", "u", Label::relevant, Split::training}}),
                  Error);
}

TEST_CASE("require_trainable needs both labels in training") {
  CHECK_THROWS_AS(require_trainable(make_fixture({5, 0, 1, 1})), Error);
  CHECK_THROWS_AS(require_trainable(make_fixture({0, 5, 1, 1})), Error);
  CHECK_NOTHROW(require_trainable(make_fixture({1, 1, 0, 0})));
}

TEST_CASE("format inference") {
  CHECK(format_from_path("x.csv") == DatasetFormat::csv);
  CHECK(format_from_path("x.jsonl") == DatasetFormat::jsonl);
  CHECK(format_from_path("x.CSV") == DatasetFormat::csv);
  CHECK_THROWS_AS(format_from_path("x.txt"), ParameterError);
}

TEST_CASE("training and validation index partitions") {
  Corpus corpus = testutil::make_random_corpus(50, 7);
  auto train = corpus.training_indices();
  auto valid = corpus.validation_indices();
  CHECK(train.size() + valid.size() == corpus.size());
  for (std::size_t i : train) CHECK(corpus.documents()[i].split == Split::training);
  for (std::size_t i : valid) CHECK(corpus.documents()[i].split == Split::validation);
}
