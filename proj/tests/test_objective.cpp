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

#include "elda/error.hpp"
#include "elda/objective.hpp"
#include "support/test_support.hpp"

using namespace elda;

namespace {

ScoreMatrix two_topic_scores() {
  // Topic 0 favors word 0, topic 1 favors word 1; word 2 shared.
  std::vector<double> probs = {0.8, 0.1, 0.1, 0.1, 0.8, 0.1};
  for (double& p : probs) p = std::log(p);
  return ScoreMatrix::from_values(2, 3, std::move(probs));
}

}  // namespace

TEST_SUITE("objective") {

TEST_CASE("assign_words follows the per-word argmax with low-index ties") {
  const Corpus corpus = test::fixture_corpus();
  const ScoreMatrix scores = two_topic_scores();

  // Singleton linked set: everything goes to that topic.
  const std::vector<int32_t> only{1};
  CHECK(assign_words(corpus.docs[0], only, scores) ==
        std::vector<int32_t>{1, 1});

  // d1 = {a:2, b:1}: topic 0 takes a, topic 1 takes b.
  const std::vector<int32_t> both{0, 1};
  CHECK(assign_words(corpus.docs[0], both, scores) ==
        std::vector<int32_t>{0, 1});

  // Identical topics: ties go to the lower index even when linked later.
  std::vector<double> dup = {0.5, 0.3, 0.2, 0.5, 0.3, 0.2};
  for (double& p : dup) p = std::log(p);
  const ScoreMatrix dup_scores = ScoreMatrix::from_values(2, 3, std::move(dup));
  const std::vector<int32_t> reversed{1, 0};
  CHECK(assign_words(corpus.docs[0], reversed, dup_scores) ==
        std::vector<int32_t>{0, 0});

  CHECK_THROWS_AS(assign_words(corpus.docs[0], {}, scores), Error);
}

TEST_CASE("objective_f evaluates the linked max log scores") {
  const Corpus corpus = test::make_corpus({{{0, 2}, {1, 1}}}, 3);
  std::vector<double> probs = {0.8, 0.1, 0.1};
  for (double& p : probs) p = std::log(p);
  const ScoreMatrix scores = ScoreMatrix::from_values(1, 3, std::move(probs));
  const std::vector<Link> links{Link{0, 0}};
  CHECK(objective_f(links, corpus, scores) ==
        doctest::Approx(2.0 * std::log(0.8) + std::log(0.1)).epsilon(1e-12));
}

TEST_CASE("objective_f requires every document to be linked") {
  const Corpus corpus = test::fixture_corpus();
  const ScoreMatrix scores = two_topic_scores();
  const std::vector<Link> partial{Link{0, 0}, Link{0, 1}};
  CHECK_THROWS_WITH_AS(objective_f(partial, corpus, scores),
                       doctest::Contains("no link"), Error);
}

TEST_CASE("adding a link never decreases objective_f") {
  Rng rng(31);
  for (int round = 0; round < 20; ++round) {
    const auto instance = test::random_instance(rng, 6, 4, 8);
    const int32_t docs = instance.corpus.num_docs();
    const int32_t topics = instance.scores.num_topics();
    // Cover every document, then add one more random link.
    std::vector<Link> links;
    for (int32_t d = 0; d < docs; ++d) {
      links.push_back(Link{static_cast<int32_t>(rng.below(topics)), d});
    }
    const double before = objective_f(links, instance.corpus, instance.scores);
    Link extra;
    do {
      extra = Link{static_cast<int32_t>(rng.below(topics)),
                   static_cast<int32_t>(rng.below(docs))};
    } while (std::find(links.begin(), links.end(), extra) != links.end());
    links.push_back(extra);
    CHECK(objective_f(links, instance.corpus, instance.scores) >= before);
  }
}

TEST_CASE("the full link set attains the unconstrained optimum") {
  Rng rng(32);
  const auto instance = test::random_instance(rng, 5, 4, 8);
  std::vector<Link> all;
  for (int32_t d = 0; d < instance.corpus.num_docs(); ++d) {
    for (int32_t t = 0; t < instance.scores.num_topics(); ++t) {
      all.push_back(Link{t, d});
    }
  }
  double expected = 0.0;
  for (int32_t d = 0; d < instance.corpus.num_docs(); ++d) {
    for (const auto& [w, c] : instance.corpus.docs[d].entries) {
      double best = -std::numeric_limits<double>::infinity();
      for (int32_t t = 0; t < instance.scores.num_topics(); ++t) {
        best = std::max(best, instance.scores.at(t, w));
      }
      expected += c * best;
    }
  }
  CHECK(objective_f(all, instance.corpus, instance.scores) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fdot of the empty set is zero and one link expands as stated") {
  const Corpus corpus = test::make_corpus({{{0, 2}, {1, 1}}, {{2, 1}}}, 3);
  const ScoreMatrix scores = two_topic_scores();
  const PlaceholderConfig placeholder;
  CHECK(objective_fdot({}, corpus, scores, placeholder) == 0.0);

  const std::vector<Link> one{Link{0, 0}};
  double expected = 0.0;
  for (const auto& [w, c] : corpus.docs[0].entries) {
    expected +=
        c * (std::max(scores.at(0, w), placeholder.log_p) - placeholder.log_p);
  }
  CHECK(objective_fdot(one, corpus, scores, placeholder) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fdot differences equal f differences under full coverage") {
  Rng rng(33);
  const auto instance = test::random_instance(rng, 5, 4, 8);
  const PlaceholderConfig placeholder;
  std::vector<Link> base;
  for (int32_t d = 0; d < instance.corpus.num_docs(); ++d) {
    base.push_back(Link{0, d});
  }
  std::vector<Link> extended = base;
  extended.push_back(Link{1, 0});
  const double fdot_delta =
      objective_fdot(extended, instance.corpus, instance.scores, placeholder) -
      objective_fdot(base, instance.corpus, instance.scores, placeholder);
  const double f_delta =
      objective_f(extended, instance.corpus, instance.scores) -
      objective_f(base, instance.corpus, instance.scores);
  CHECK(fdot_delta == doctest::Approx(f_delta).epsilon(1e-9));
}

TEST_CASE("placeholder must lie below every score entry") {
  const ScoreMatrix scores = two_topic_scores();
  PlaceholderConfig bad;
  bad.log_p = -0.5;  // above the smallest entry log(0.1)
  CHECK_THROWS_AS(objective_fdot({}, test::fixture_corpus(), scores, bad),
                  Error);
}

TEST_CASE("naive marginal of a useless link is exactly zero") {
  const Corpus corpus = test::make_corpus({{{0, 1}, {1, 1}}}, 3);
  std::vector<double> probs = {0.8, 0.15, 0.05, 0.7, 0.1, 0.2};
  for (double& p : probs) p = std::log(p);
  const ScoreMatrix scores = ScoreMatrix::from_values(2, 3, std::move(probs));
  const PlaceholderConfig placeholder;
  // Topic 0 dominates topic 1 on words 0 and 1, so adding topic 1 is a no-op.
  const std::vector<Link> base{Link{0, 0}};
  CHECK(marginal_value_naive(base, Link{1, 0}, corpus, scores, placeholder) ==
        0.0);
}

TEST_CASE("naive marginal rejects duplicate links") {
  const Corpus corpus = test::fixture_corpus();
  const ScoreMatrix scores = two_topic_scores();
  const std::vector<Link> base{Link{0, 0}};
  CHECK_THROWS_WITH_AS(
      marginal_value_naive(base, Link{0, 0}, corpus, scores, {}),
      doctest::Contains("already"), Error);
}

TEST_CASE("submodularity and monotonicity hold exactly on random triples") {
  Rng rng(34);
  for (int round = 0; round < 300; ++round) {
    const auto instance = test::random_instance(rng, 6, 4, 8);
    const int32_t docs = instance.corpus.num_docs();
    const int32_t topics = instance.scores.num_topics();
    const int64_t ground = static_cast<int64_t>(docs) * topics;
    const PlaceholderConfig placeholder;

    std::vector<Link> larger =
        test::random_link_set(rng, docs, topics, 1 + rng.below(ground));
    const size_t small_size = rng.below(larger.size() + 1);
    std::vector<Link> smaller(larger.begin(), larger.begin() + small_size);

    Link extra;
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      extra = Link{static_cast<int32_t>(rng.below(topics)),
                   static_cast<int32_t>(rng.below(docs))};
      found = std::find(larger.begin(), larger.end(), extra) == larger.end();
    }
    if (!found) continue;

    const double gain_small = marginal_value_naive(
        smaller, extra, instance.corpus, instance.scores, placeholder);
    const double gain_large = marginal_value_naive(
        larger, extra, instance.corpus, instance.scores, placeholder);
    CHECK(gain_small >= gain_large);
    CHECK(gain_large >= 0.0);
    CHECK(objective_fdot(smaller, instance.corpus, instance.scores,
                         placeholder) <=
          objective_fdot(larger, instance.corpus, instance.scores,
                         placeholder));
  }
}

TEST_CASE("fdot decomposes over documents") {
  Rng rng(35);
  const auto instance = test::random_instance(rng, 6, 4, 8);
  const PlaceholderConfig placeholder;
  const std::vector<Link> links = test::random_link_set(
      rng, instance.corpus.num_docs(), instance.scores.num_topics(), 9);
  const double whole =
      objective_fdot(links, instance.corpus, instance.scores, placeholder);
  double sum = 0.0;
  for (int32_t d = 0; d < instance.corpus.num_docs(); ++d) {
    std::vector<Link> restricted;
    for (const Link& l : links) {
      if (l.doc == d) restricted.push_back(l);
    }
    sum += objective_fdot(restricted, instance.corpus, instance.scores,
                          placeholder);
  }
  CHECK(whole == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("objective_f equals the likelihood term of the induced assignment") {
  Rng rng(36);
  const auto instance = test::random_instance(rng, 6, 4, 8);
  const int32_t topics_n = instance.scores.num_topics();
  TopicMatrix tm;
  tm.vocab_size = instance.corpus.vocab_size();
  for (int32_t t = 0; t < topics_n; ++t) {
    tm.labels.push_back("t" + std::to_string(t));
    const auto row = instance.scores.row(t);
    tm.log_probs.insert(tm.log_probs.end(), row.begin(), row.end());
  }
  std::vector<Link> links;
  for (int32_t d = 0; d < instance.corpus.num_docs(); ++d) {
    links.push_back(Link{static_cast<int32_t>(rng.below(topics_n)), d});
    if (rng.below(2) == 0) {
      const int32_t other = (links.back().topic + 1) % topics_n;
      links.push_back(Link{other, d});
    }
  }
  const Assignment a =
      induced_assignment(instance.corpus, instance.scores, links);
  CHECK(objective_f(links, instance.corpus, instance.scores) ==
        doctest::Approx(log_likelihood_term(a, instance.corpus, tm))
            .epsilon(1e-9));
}

TEST_CASE("single word, single topic posterior collapses to the likelihood") {
  const Corpus corpus = test::make_corpus({{{0, 1}}}, 2);
  TopicMatrix tm;
  tm.vocab_size = 2;
  tm.labels = {"t0"};
  tm.log_probs = {std::log(0.7), std::log(0.3)};
  Assignment a;
  a.z = {{0}};
  const std::vector<double> alpha{1.0};
  CHECK(log_posterior_full(a, corpus, tm, alpha) ==
        doctest::Approx(std::log(0.7)).epsilon(1e-12));
}

TEST_CASE("posterior matches an independent term-by-term evaluation") {
  const Corpus corpus = test::make_corpus({{{0, 2}, {1, 1}}, {{1, 2}}}, 3);
  TopicMatrix tm;
  tm.vocab_size = 3;
  tm.labels = {"t0", "t1"};
  tm.log_probs = {std::log(0.5), std::log(0.3), std::log(0.2),
                  std::log(0.2), std::log(0.6), std::log(0.2)};
  const std::vector<double> alpha{0.7, 1.3};

  // Enumerate every token-level assignment; evaluate the product form of the
  // marginal posterior independently and compare.
  const int64_t combos = 8 * 4;  // 3 tokens in d0, 2 tokens in d1
  for (int64_t code = 0; code < combos; ++code) {
    Assignment a;
    a.z = {{0, 0, 0}, {0, 0}};
    int64_t c = code;
    for (auto& zd : a.z) {
      for (auto& z : zd) {
        z = static_cast<int32_t>(c & 1);
        c >>= 1;
      }
    }
    double expected = 0.0;
    for (int32_t d = 0; d < corpus.num_docs(); ++d) {
      double lik = 1.0;  // product of categorical probabilities
      int64_t n0 = 0, n1 = 0;
      size_t pos = 0;
      for (const auto& [w, cnt] : corpus.docs[d].entries) {
        for (int32_t k = 0; k < cnt; ++k, ++pos) {
          const int32_t z = a.z[d][pos];
          lik *= std::exp(tm.row(z)[w]);
          (z == 0 ? n0 : n1) += 1;
        }
      }
      const double gamma_ratio =
          std::tgamma(alpha[0] + alpha[1]) * std::tgamma(n0 + alpha[0]) *
          std::tgamma(n1 + alpha[1]) /
          (std::tgamma(alpha[0] + alpha[1] + corpus.docs[d].length) *
           std::tgamma(alpha[0]) * std::tgamma(alpha[1]));
      expected += std::log(gamma_ratio * lik);
    }
    CHECK(log_posterior_full(a, corpus, tm, alpha) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("posterior validates alpha") {
  const Corpus corpus = test::make_corpus({{{0, 1}}}, 2);
  TopicMatrix tm;
  tm.vocab_size = 2;
  tm.labels = {"t0"};
  tm.log_probs = {std::log(0.7), std::log(0.3)};
  Assignment a;
  a.z = {{0}};
  CHECK_THROWS_AS(log_posterior_full(a, corpus, tm, std::vector<double>{0.0}),
                  Error);
  CHECK_THROWS_AS(
      log_posterior_full(a, corpus, tm, std::vector<double>{1.0, 1.0}), Error);
}

TEST_CASE("expected unique topics per document") {
  // |Phi| = 100, |d| = 100: the approximation gives 63.2 unique topics.
  const std::vector<int64_t> hundred{100};
  const ExpectedTopics e = expected_topics_per_doc(hundred, 100);
  CHECK(e.approx == doctest::Approx(63.21).epsilon(2e-4));
  CHECK(std::abs(e.exact - e.approx) / e.approx < 0.01);

  const std::vector<int64_t> lengths{3, 17, 50};
  CHECK(expected_topics_per_doc(lengths, 1).exact == doctest::Approx(1.0));
  const std::vector<int64_t> ones{1, 1};
  CHECK(expected_topics_per_doc(ones, 57).exact == doctest::Approx(1.0));
}

TEST_CASE("exact and approximate sparsity agree within 1% for 50+ topics") {
  Rng rng(37);
  for (int64_t topics : {50, 120, 400}) {
    std::vector<int64_t> lengths;
    for (int i = 0; i < 30; ++i) {
      lengths.push_back(1 + static_cast<int64_t>(rng.below(300)));
    }
    const ExpectedTopics e = expected_topics_per_doc(lengths, topics);
    CHECK(std::abs(e.exact - e.approx) / e.approx < 0.01);
  }
}

}  // TEST_SUITE
