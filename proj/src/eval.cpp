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

#include "elda/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "elda/error.hpp"

namespace elda {

std::vector<int32_t> top_words(std::span<const double> topic_row,
                               int32_t h_star) {
  const int32_t v_size = static_cast<int32_t>(topic_row.size());
  if (h_star < 2 || h_star > v_size) {
    throw_invalid("h_star must be in [2, |V|]");
  }
  std::vector<int32_t> order(v_size);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + h_star, order.end(),
                    [&](int32_t a, int32_t b) {
                      if (topic_row[a] != topic_row[b]) {
                        return topic_row[a] > topic_row[b];
                      }
                      return a < b;
                    });
  order.resize(h_star);
  return order;
}

double umass_coherence(std::span<const double> topic_row, const Corpus& corpus,
                       const CoherenceConfig& cfg,
                       const CorpusPostings* postings) {
  if (!(cfg.epsilon > 0.0)) throw_invalid("coherence epsilon must be positive");
  if (static_cast<int32_t>(topic_row.size()) != corpus.vocab_size()) {
    throw_invalid("topic row does not match the corpus vocabulary");
  }
  const std::vector<int32_t> top = top_words(topic_row, cfg.h_star);
  const std::vector<int32_t> freq = doc_frequencies(corpus);

  auto pair_count = [&](int32_t a, int32_t b) -> int32_t {
    if (postings) return postings->co_doc_count_pair(a, b);
    int32_t n = 0;
    for (const DocRow& doc : corpus.docs) {
      if (doc.contains(a) && doc.contains(b)) ++n;
    }
    return n;
  };

  double sum = 0.0;
  for (int32_t h = 1; h < cfg.h_star; ++h) {
    for (int32_t l = 0; l < h; ++l) {
      const int32_t co = pair_count(top[h], top[l]);
      sum += std::log((static_cast<double>(co) + cfg.epsilon) /
                      static_cast<double>(freq[top[l]]));
    }
  }
  const double pairs =
      static_cast<double>(cfg.h_star) * (cfg.h_star - 1) / 2.0;
  return sum / pairs;
}

SolutionReport solution_report(const LinkSolution& solution,
                               const Corpus& corpus, const TopicMatrix& topics,
                               const ScoreMatrix& scores,
                               const PlaceholderConfig& placeholder,
                               std::span<const int32_t> h_stars,
                               double coherence_epsilon) {
  if (solution.steps.empty()) throw_invalid("empty solution");
  SolutionReport report;
  const std::vector<Link> links = solution.links();
  report.objective = objective_fdot(links, corpus, scores, placeholder);
  report.mean_links_per_doc = static_cast<double>(links.size()) /
                              static_cast<double>(corpus.num_docs());

  std::set<int32_t> distinct;
  for (const Link& l : links) {
    distinct.insert(l.topic);
    ++report.topic_usage[topics.labels[l.topic]];
  }

  const CorpusPostings postings(corpus);
  for (int32_t h : h_stars) {
    CoherenceConfig cfg{h, coherence_epsilon};
    CoherenceStats stats;
    stats.min = std::numeric_limits<double>::infinity();
    stats.max = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (int32_t t : distinct) {
      const double c = umass_coherence(topics.row(t), corpus, cfg, &postings);
      total += c;
      stats.min = std::min(stats.min, c);
      stats.max = std::max(stats.max, c);
    }
    stats.mean = total / static_cast<double>(distinct.size());
    report.coherence[h] = stats;
  }

  // Objective at whole mean-sparsity levels; one greedy run serves every
  // budget from 1 to kappa links per document.
  const int64_t levels =
      static_cast<int64_t>(links.size()) / corpus.num_docs();
  for (int64_t t = 1; t <= levels; ++t) {
    const size_t j = static_cast<size_t>(t) * corpus.num_docs();
    report.trace.push_back(solution.steps[j - 1].objective);
  }
  return report;
}

namespace {

double mean_distinct_topics(const Assignment& a) {
  double total = 0.0;
  for (const auto& zd : a.z) {
    std::set<int32_t> distinct(zd.begin(), zd.end());
    total += static_cast<double>(distinct.size());
  }
  return total / static_cast<double>(a.z.size());
}

}  // namespace

AssignmentComparison compare_assignments(const Assignment& a,
                                         const Assignment& b,
                                         const Corpus& corpus,
                                         const TopicMatrix& topics,
                                         std::span<const double> alpha) {
  if (a.z.size() != b.z.size() ||
      static_cast<int32_t>(a.z.size()) != corpus.num_docs()) {
    throw_invalid("assignments must cover the same corpus");
  }
  AssignmentComparison cmp;
  cmp.delta_likelihood = log_likelihood_term(a, corpus, topics) -
                         log_likelihood_term(b, corpus, topics);
  cmp.delta_posterior = log_posterior_full(a, corpus, topics, alpha) -
                        log_posterior_full(b, corpus, topics, alpha);
  cmp.mean_topics_a = mean_distinct_topics(a);
  cmp.mean_topics_b = mean_distinct_topics(b);
  return cmp;
}

}  // namespace elda
