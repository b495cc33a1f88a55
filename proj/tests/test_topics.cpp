// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "elda/error.hpp"
#include "elda/topics.hpp"
#include "support/test_support.hpp"

using namespace elda;
namespace fs = std::filesystem;

namespace {

std::vector<int32_t> rank_order(std::span<const double> values) {
  std::vector<int32_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  return order;
}

std::vector<int32_t> rank_order_int(const std::vector<int32_t>& values) {
  std::vector<int32_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  return order;
}

double row_entropy(std::span<const double> log_probs) {
  double h = 0.0;
  for (double lp : log_probs) h -= std::exp(lp) * lp;
  return h;
}

}  // namespace

TEST_SUITE("topics") {

TEST_CASE("umass generator matches the hand-evaluated fixture row") {
  const Corpus corpus = test::fixture_corpus();
  GeneratorConfig cfg;
  cfg.mode = GeneratorMode::kUMass;
  cfg.epsilon = 0.01;
  const GeneratedTopic topic = gen_topic(corpus, 0, cfg);  // w* = a
  // s = (2.01, 1.01, 0.01) / 2; phi = (2.01, 1.01, 0.01) / 3.03.
  CHECK(std::exp(topic.log_probs[0]) == doctest::Approx(2.01 / 3.03).epsilon(1e-12));
  CHECK(std::exp(topic.log_probs[1]) == doctest::Approx(1.01 / 3.03).epsilon(1e-12));
  CHECK(std::exp(topic.log_probs[2]) == doctest::Approx(0.01 / 3.03).epsilon(1e-12));
}

TEST_CASE("every mode ranks words by co-document count") {
  const Corpus corpus = test::fixture_corpus();
  for (GeneratorMode mode : {GeneratorMode::kUMass, GeneratorMode::kExpUMass,
                             GeneratorMode::kCooccurrence}) {
    GeneratorConfig cfg;
    cfg.mode = mode;
    for (int32_t w = 0; w < corpus.vocab_size(); ++w) {
      const GeneratedTopic topic = gen_topic(corpus, w, cfg);
      CHECK(rank_order(topic.log_probs) ==
            rank_order_int(co_doc_counts(corpus, w)));
    }
  }
}

TEST_CASE("exp-umass concentrates more mass than umass") {
  const Corpus corpus = test::fixture_corpus();
  GeneratorConfig umass{GeneratorMode::kUMass, 0.01, {}};
  GeneratorConfig expu{GeneratorMode::kExpUMass, 0.01, {}};
  const GeneratedTopic a = gen_topic(corpus, 0, umass);
  const GeneratedTopic b = gen_topic(corpus, 0, expu);
  CHECK(rank_order(a.log_probs) == rank_order(b.log_probs));
  CHECK(row_entropy(b.log_probs) <= row_entropy(a.log_probs));
}

TEST_CASE("candidate set construction over the fixture") {
  const Corpus corpus = test::fixture_corpus();
  GeneratorConfig cfg;
  cfg.mode = GeneratorMode::kUMass;
  const TopicMatrix all = build_candidate_set(corpus, cfg);
  CHECK(all.num_topics() == 3);
  CHECK(all.vocab_size == 3);
  CHECK(all.labels == std::vector<std::string>{"a", "b", "c"});
  all.validate();

  GeneratorConfig single = cfg;
  single.keywords = {1};
  const TopicMatrix one = build_candidate_set(corpus, single);
  CHECK(one.num_topics() == 1);
  CHECK(one.labels == std::vector<std::string>{"b"});

  // Purity: identical corpora give bit-identical matrices.
  const TopicMatrix again = build_candidate_set(test::fixture_corpus(), cfg);
  CHECK(again.log_probs == all.log_probs);
}

TEST_CASE("generated rows are normalized on random corpora") {
  Rng rng(21);
  for (int round = 0; round < 5; ++round) {
    const auto instance = test::random_instance(rng, 8, 3, 10);
    for (GeneratorMode mode : {GeneratorMode::kUMass, GeneratorMode::kExpUMass,
                               GeneratorMode::kCooccurrence}) {
      GeneratorConfig cfg;
      cfg.mode = mode;
      const TopicMatrix topics = build_candidate_set(instance.corpus, cfg);
      topics.validate();  // throws when a row does not sum to 1 within 1e-6
    }
  }
}

TEST_CASE("cooccurrence popularity weight is the row log normalizer") {
  const Corpus corpus = test::fixture_corpus();
  GeneratorConfig cfg;
  cfg.mode = GeneratorMode::kCooccurrence;
  const TopicMatrix topics = build_candidate_set(corpus, cfg);
  REQUIRE(topics.has_popularity());
  const double eps = cfg.effective_epsilon();
  for (int32_t t = 0; t < topics.num_topics(); ++t) {
    const std::vector<int32_t> co = co_doc_counts(corpus, t);
    double m = -std::numeric_limits<double>::infinity();
    for (int32_t c : co) m = std::max(m, c + eps);
    double s = 0.0;
    for (int32_t c : co) s += std::exp(c + eps - m);
    CHECK(topics.popularity_logweights[t] ==
          doctest::Approx(m + std::log(s)).epsilon(1e-12));
    // log phi + weight recovers the raw exponent co + eps.
    for (int32_t v = 0; v < topics.vocab_size; ++v) {
      CHECK(topics.row(t)[v] + topics.popularity_logweights[t] ==
            doctest::Approx(co[v] + eps).epsilon(1e-9));
    }
  }
}

TEST_CASE("per-word popularity-weighted argmax matches the raw co-count argmax") {
  const Corpus corpus = test::fixture_corpus();
  GeneratorConfig cfg;
  cfg.mode = GeneratorMode::kCooccurrence;
  const TopicMatrix topics = build_candidate_set(corpus, cfg);
  std::vector<std::vector<int32_t>> co(corpus.vocab_size());
  for (int32_t w = 0; w < corpus.vocab_size(); ++w) {
    co[w] = co_doc_counts(corpus, w);
  }
  for (int32_t v = 0; v < corpus.vocab_size(); ++v) {
    // Raw argmax over topics of |D_{w*_t, v}|, ties to the lower topic index.
    int32_t raw_best = 0;
    for (int32_t t = 1; t < topics.num_topics(); ++t) {
      if (co[t][v] > co[raw_best][v]) raw_best = t;
    }
    // Log-space argmax of log phi + popularity weight, 1e-9 tie band.
    double best_score = -std::numeric_limits<double>::infinity();
    for (int32_t t = 0; t < topics.num_topics(); ++t) {
      best_score = std::max(
          best_score, topics.row(t)[v] + topics.popularity_logweights[t]);
    }
    int32_t log_best = -1;
    for (int32_t t = 0; t < topics.num_topics(); ++t) {
      const double s = topics.row(t)[v] + topics.popularity_logweights[t];
      if (s >= best_score - 1e-9) {
        log_best = t;
        break;
      }
    }
    CHECK(log_best == raw_best);
  }
}

TEST_CASE("export and import round trip exactly") {
  const Corpus corpus = test::fixture_corpus();
  GeneratorConfig cfg;
  cfg.mode = GeneratorMode::kCooccurrence;
  const TopicMatrix topics = build_candidate_set(corpus, cfg);
  const std::string path =
      (fs::temp_directory_path() / "elda_topics_rt.tsv").string();
  export_topics(topics, path);
  const TopicMatrix loaded = import_topics(path, corpus.vocab_size());
  CHECK(loaded.labels == topics.labels);
  REQUIRE(loaded.log_probs.size() == topics.log_probs.size());
  for (size_t i = 0; i < topics.log_probs.size(); ++i) {
    CHECK(loaded.log_probs[i] == doctest::Approx(topics.log_probs[i]).epsilon(1e-9));
  }
  REQUIRE(loaded.has_popularity());
  CHECK(loaded.popularity_logweights == topics.popularity_logweights);
}

TEST_CASE("import rejects unnormalized rows with the row index") {
  const std::string path =
      (fs::temp_directory_path() / "elda_topics_bad.tsv").string();
  {
    std::ofstream out(path);
    out << "ELDA-TOPICS 1 1 2\n";
    out << "t0\t" << std::log(0.25) << '\t' << std::log(0.25) << '\n';
  }
  CHECK_THROWS_WITH_AS(import_topics(path), doctest::Contains("row 0"), Error);
}

TEST_CASE("import floors zero entries and renormalizes") {
  const std::string path =
      (fs::temp_directory_path() / "elda_topics_floor.tsv").string();
  {
    std::ofstream out(path);
    out << "ELDA-TOPICS 1 1 3\n";
    out << "t0\t" << std::log(0.75) << '\t' << std::log(0.25) << "\t-inf\n";
  }
  const TopicMatrix topics = import_topics(path);
  double sum = 0.0;
  for (double lp : topics.row(0)) {
    CHECK(std::isfinite(lp));
    sum += std::exp(lp);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("import checks the vocabulary dimension") {
  const Corpus corpus = test::fixture_corpus();
  GeneratorConfig cfg;
  const TopicMatrix topics = build_candidate_set(corpus, cfg);
  const std::string path =
      (fs::temp_directory_path() / "elda_topics_dim.tsv").string();
  export_topics(topics, path);
  CHECK_THROWS_AS(import_topics(path, 99), Error);
}

TEST_CASE("keyword resolution flags unknown words") {
  const Corpus corpus = test::fixture_corpus();
  CHECK(resolve_keywords(corpus, {"b", "a"}) == std::vector<int32_t>{1, 0});
  CHECK_THROWS_AS(resolve_keywords(corpus, {"zzz"}), Error);
}

TEST_CASE("generator rejects out-of-range keywords") {
  const Corpus corpus = test::fixture_corpus();
  GeneratorConfig cfg;
  CHECK_THROWS_AS(gen_topic(corpus, 42, cfg), Error);
}

}  // TEST_SUITE
