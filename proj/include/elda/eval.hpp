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

#ifndef ELDA_EVAL_HPP_
#define ELDA_EVAL_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "elda/corpus.hpp"
#include "elda/objective.hpp"

namespace elda {

struct CoherenceConfig {
  int32_t h_star = 10;   // top-word count, >= 2
  double epsilon = 0.01;
};

// The h_star highest-probability words of a topic row; ties by ascending
// word id.
std::vector<int32_t> top_words(std::span<const double> topic_row,
                               int32_t h_star);

// Normalized coherence over the topic's top h* words:
//   C = 2/(h*(h*-1)) * sum_{h=2..h*} sum_{l=1..h-1}
//       log((|D_{w_h, w_l}| + eps) / |D_{w_l}|)
double umass_coherence(std::span<const double> topic_row, const Corpus& corpus,
                       const CoherenceConfig& cfg,
                       const CorpusPostings* postings = nullptr);

struct CoherenceStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SolutionReport {
  double objective = 0.0;
  double mean_links_per_doc = 0.0;
  std::map<int32_t, CoherenceStats> coherence;  // keyed by h*
  std::vector<double> trace;  // objective at mean sparsity 1..kappa
  std::map<std::string, int64_t> topic_usage;  // label -> link count
};

// Summary of a solver run: recomputed objective, per-h* coherence of the
// distinct selected topics, sparsity trace and topic usage.
SolutionReport solution_report(const LinkSolution& solution,
                               const Corpus& corpus, const TopicMatrix& topics,
                               const ScoreMatrix& scores,
                               const PlaceholderConfig& placeholder,
                               std::span<const int32_t> h_stars,
                               double coherence_epsilon = 0.01);

struct AssignmentComparison {
  double delta_likelihood = 0.0;  // likelihood(a) - likelihood(b)
  double delta_posterior = 0.0;   // full posterior difference
  double mean_topics_a = 0.0;     // mean distinct topics per document
  double mean_topics_b = 0.0;
};

// Posterior comparison of two assignments of the same corpus under the same
// candidate set. Antisymmetric in (a, b).
AssignmentComparison compare_assignments(const Assignment& a,
                                         const Assignment& b,
                                         const Corpus& corpus,
                                         const TopicMatrix& topics,
                                         std::span<const double> alpha);

}  // namespace elda

#endif  // ELDA_EVAL_HPP_
