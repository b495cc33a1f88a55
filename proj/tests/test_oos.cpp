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

#include "elda/error.hpp"
#include "elda/greedy.hpp"
#include "elda/oos.hpp"
#include "support/test_support.hpp"

using namespace elda;

namespace {

Corpus one_doc_corpus(const Corpus& base, int32_t doc) {
  Corpus corpus;
  corpus.vocab = base.vocab;
  corpus.docs = {base.docs[doc]};
  corpus.doc_ids = {base.doc_ids[doc]};
  return corpus;
}

}  // namespace

TEST_SUITE("oos") {

TEST_CASE("kappa_d = 1 picks the document's initialization topic") {
  Rng rng(81);
  const auto instance = test::random_instance(rng, 5, 5, 9);
  for (int32_t d = 0; d < instance.corpus.num_docs(); ++d) {
    const OosResult result = infer_out_of_sample(
        OosRequest{instance.corpus.docs[d], 1}, instance.scores);
    const Corpus single = one_doc_corpus(instance.corpus, d);
    auto [init, state] = fast_initialize(single, instance.scores,
                                         PlaceholderConfig{}, SolverConfig{});
    REQUIRE(result.topics.size() == 1);
    CHECK(result.topics[0] == init[0].link.topic);
    CHECK(result.marginals[0] == init[0].marginal);
  }
}

TEST_CASE("full budget reproduces the unconstrained per-word argmax") {
  Rng rng(82);
  const auto instance = test::random_instance(rng, 4, 4, 8);
  const int32_t topics = instance.scores.num_topics();
  const DocRow& doc = instance.corpus.docs[0];
  const OosResult result =
      infer_out_of_sample(OosRequest{doc, topics}, instance.scores);
  CHECK(result.topics.size() == static_cast<size_t>(topics));
  std::vector<int32_t> all(topics);
  for (int32_t t = 0; t < topics; ++t) all[t] = t;
  CHECK(result.word_topics == assign_words(doc, all, instance.scores));
}

TEST_CASE("matches fast_greedy on a one-document corpus for every kappa_d") {
  Rng rng(83);
  const auto instance = test::random_instance(rng, 4, 5, 9);
  const int32_t topics = instance.scores.num_topics();
  for (int32_t d = 0; d < instance.corpus.num_docs(); ++d) {
    const Corpus single = one_doc_corpus(instance.corpus, d);
    for (int32_t kappa_d = 1; kappa_d <= topics; ++kappa_d) {
      const OosResult oos = infer_out_of_sample(
          OosRequest{instance.corpus.docs[d], kappa_d}, instance.scores);
      SolverConfig cfg;
      cfg.kappa = kappa_d;
      const LinkSolution greedy = fast_greedy(single, instance.scores, cfg);
      REQUIRE(oos.topics.size() == greedy.steps.size());
      for (size_t i = 0; i < oos.topics.size(); ++i) {
        CHECK(oos.topics[i] == greedy.steps[i].link.topic);
        CHECK(oos.marginals[i] == greedy.steps[i].marginal);
        CHECK(oos.trace[i] == greedy.steps[i].objective);
      }
    }
  }
}

TEST_CASE("per-document near-optimality against the pair oracle") {
  Rng rng(84);
  int tested = 0;
  while (tested < 10) {
    const auto instance = test::random_instance(rng, 2, 5, 6, 4);
    const DocRow& doc = instance.corpus.docs[0];
    if (doc.entries.size() > 4) continue;
    ++tested;
    const PlaceholderConfig placeholder;
    const OosResult result = infer_out_of_sample(OosRequest{doc, 2},
                                                 instance.scores, placeholder);
    const Corpus single = one_doc_corpus(instance.corpus, 0);
    const double opt =
        test::brute_force_doc_opt(single, instance.scores, placeholder, 0, 2);
    CHECK(result.trace.back() >= test::kOneMinusInvE * opt - 1e-9);
  }
}

TEST_CASE("batch inference equals independent per-document calls") {
  Rng rng(85);
  const auto instance = test::random_instance(rng, 8, 4, 9);
  std::vector<OosRequest> batch;
  for (int32_t d = 0; d < instance.corpus.num_docs(); ++d) {
    batch.push_back(OosRequest{
        instance.corpus.docs[d],
        1 + static_cast<int32_t>(rng.below(instance.scores.num_topics()))});
  }
  const std::vector<OosResult> results = infer_batch(batch, instance.scores);

  // Shuffled and subset batches give the same per-document output.
  std::vector<size_t> order(batch.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<OosRequest> shuffled;
  for (size_t i : order) shuffled.push_back(batch[i]);
  const std::vector<OosResult> shuffled_results =
      infer_batch(shuffled, instance.scores);
  for (size_t i = 0; i < order.size(); ++i) {
    CHECK(shuffled_results[i].topics == results[order[i]].topics);
    CHECK(shuffled_results[i].marginals == results[order[i]].marginals);
  }
  for (size_t i = 0; i < batch.size(); ++i) {
    const OosResult solo = infer_out_of_sample(batch[i], instance.scores);
    CHECK(solo.topics == results[i].topics);
    CHECK(solo.trace == results[i].trace);
  }
}

TEST_CASE("training-document restriction consistency") {
  Rng rng(86);
  const auto instance = test::random_instance(rng, 5, 4, 9);
  SolverConfig cfg;
  cfg.kappa = std::min<double>(2.0, instance.scores.num_topics());
  const LinkSolution full = fast_greedy(instance.corpus, instance.scores, cfg);
  std::vector<std::vector<int32_t>> per_doc(instance.corpus.num_docs());
  for (const LinkStep& s : full.steps) {
    per_doc[s.link.doc].push_back(s.link.topic);
  }
  for (int32_t d = 0; d < instance.corpus.num_docs(); ++d) {
    const OosResult oos = infer_out_of_sample(
        OosRequest{instance.corpus.docs[d],
                   static_cast<int32_t>(per_doc[d].size())},
        instance.scores);
    CHECK(oos.topics == per_doc[d]);
  }
}

TEST_CASE("vocabulary projection counts dropped tokens") {
  const std::vector<std::string> vocab{"alpha", "beta"};
  const std::vector<std::string> tokens{"alpha", "nope", "beta", "alpha",
                                        "unknown"};
  const OosProjection p = project_tokens(tokens, vocab, "doc-x");
  CHECK(p.oov_dropped == 2);
  CHECK(p.doc.length == 3);
  CHECK(p.doc.count_of(0) == 2);
  CHECK(p.doc.count_of(1) == 1);

  const std::vector<std::string> all_oov{"nope"};
  CHECK_THROWS_WITH_AS(project_tokens(all_oov, vocab, "doc-y"),
                       doctest::Contains("doc-y"), Error);
}

TEST_CASE("request validation") {
  Rng rng(87);
  const auto instance = test::random_instance(rng, 2, 3, 6);
  CHECK_THROWS_AS(infer_out_of_sample(OosRequest{DocRow{}, 1}, instance.scores),
                  Error);
  CHECK_THROWS_AS(
      infer_out_of_sample(OosRequest{instance.corpus.docs[0], 0},
                          instance.scores),
      Error);
  CHECK_THROWS_AS(
      infer_out_of_sample(
          OosRequest{instance.corpus.docs[0],
                     instance.scores.num_topics() + 1},
          instance.scores),
      Error);
}

}  // TEST_SUITE
