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

#ifndef ELDA_OBJECTIVE_HPP_
#define ELDA_OBJECTIVE_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "elda/corpus.hpp"
#include "elda/topics.hpp"

namespace elda {

// A topic=>document link, the ground-set element of the optimization.
struct Link {
  int32_t topic = 0;
  int32_t doc = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

// Dense per-word log scores the solvers optimize over. Usually the topic log
// probabilities, optionally with each row shifted by its popularity
// log-weight (the co-occurrence regime); tests also build raw score grids.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;

  static ScoreMatrix from_topics(const TopicMatrix& topics,
                                 bool use_popularity = false);
  static ScoreMatrix from_values(int32_t num_topics, int32_t vocab_size,
                                 std::vector<double> values);

  int32_t num_topics() const { return num_topics_; }
  int32_t vocab_size() const { return vocab_size_; }
  double at(int32_t topic, int32_t word) const {
    return values_[static_cast<size_t>(topic) * vocab_size_ + word];
  }
  std::span<const double> row(int32_t topic) const {
    return {values_.data() + static_cast<size_t>(topic) * vocab_size_,
            static_cast<size_t>(vocab_size_)};
  }
  double min_entry() const { return min_entry_; }

 private:
  int32_t num_topics_ = 0;
  int32_t vocab_size_ = 0;
  std::vector<double> values_;
  double min_entry_ = 0.0;
};

// The improper constant-probability topic implicitly linked to every
// document. Must lie strictly below every score entry so that results never
// depend on its exact value.
struct PlaceholderConfig {
  double log_p = kDefaultLogP;

  static constexpr double kDefaultLogP = -23.025850929940457;  // log(1e-10)

  void check_against(const ScoreMatrix& scores) const;
};

// One solver step: the link added, its marginal value, and the cumulative
// objective after adding it.
struct LinkStep {
  Link link;
  double marginal = 0.0;
  double objective = 0.0;
};

struct SolutionMeta {
  std::string algorithm;
  double kappa = 0.0;
  uint64_t seed = 0;
  int64_t queries = 0;
  int64_t adaptive_rounds = 0;
  double v_star = std::nan("");
  bool certified = false;
  bool truncated = false;  // solver stopped before filling the budget
  double init_seconds = 0.0;
  double loop_seconds = 0.0;
};

// Ordered solver output. `steps[j].objective` is the cumulative objective
// after the first j+1 links (non-decreasing); marginals are non-negative and
// non-increasing within each document for greedy solvers.
struct LinkSolution {
  std::vector<LinkStep> steps;
  SolutionMeta meta;

  std::vector<Link> links() const;
  double objective_value() const {
    return steps.empty() ? 0.0 : steps.back().objective;
  }
};

// Per-document topic-per-token map. Token position i of document d expands
// the document's entries in order (count consecutive positions per type).
struct Assignment {
  std::vector<std::vector<int32_t>> z;
};

// Groups a link set by document: result[d] lists topics linked to d in input
// order. Duplicate links raise an error.
std::vector<std::vector<int32_t>> links_by_doc(std::span<const Link> links,
                                               int32_t num_docs,
                                               int32_t num_topics);

// For each word type of `doc`, the linked topic with the highest score;
// ties go to the lowest topic index. Result is aligned with doc.entries.
std::vector<int32_t> assign_words(const DocRow& doc,
                                  std::span<const int32_t> linked_topics,
                                  const ScoreMatrix& scores);

// Token-level assignment induced by a link set (every document needs >= 1
// link).
Assignment induced_assignment(const Corpus& corpus, const ScoreMatrix& scores,
                              std::span<const Link> links);

// f(E) = sum_d sum_i max_{t in E_d} score(t, w_{d,i}); requires full coverage.
double objective_f(std::span<const Link> links, const Corpus& corpus,
                   const ScoreMatrix& scores);

// fdot(E) = f(E u P) - f(P): the placeholder-rooted objective, defined for
// any link set (unlinked documents contribute zero).
double objective_fdot(std::span<const Link> links, const Corpus& corpus,
                      const ScoreMatrix& scores,
                      const PlaceholderConfig& placeholder);

// fdot(E u {link}) - fdot(E), recomputed from scratch over the whole corpus
// with term-aligned subtraction. Reference oracle for every memoized path;
// the fast implementations reproduce it bitwise.
double marginal_value_naive(std::span<const Link> links, const Link& link,
                            const Corpus& corpus, const ScoreMatrix& scores,
                            const PlaceholderConfig& placeholder);

// Full finite-alpha log posterior of a token-level assignment:
//   sum_d [ sum_i log phi_{z_i}[w_i] + sum_t lgamma(n_{d,t} + alpha_t)
//           + lgamma(sum alpha) - lgamma(sum alpha + |d|)
//           - sum_t lgamma(alpha_t) ]
// (stated up to the usual dropped proportionality constant).
double log_posterior_full(const Assignment& assignment, const Corpus& corpus,
                          const TopicMatrix& topics,
                          std::span<const double> alpha);

// The likelihood term of the full posterior on its own.
double log_likelihood_term(const Assignment& assignment, const Corpus& corpus,
                           const TopicMatrix& topics);

// Expected unique topics per document for the unconstrained problem:
//   exact  = (1/|D|) sum_d K (1 - ((K-1)/K)^{|d|})
//   approx = (K/|D|) sum_d (1 - e^{-|d|/K})
struct ExpectedTopics {
  double exact = 0.0;
  double approx = 0.0;
};
ExpectedTopics expected_topics_per_doc(std::span<const int64_t> doc_lengths,
                                       int64_t num_topics);

// Pairwise (tree) summation, used for cross-document totals.
double pairwise_sum(std::span<const double> values);

}  // namespace elda

#endif  // ELDA_OBJECTIVE_HPP_
