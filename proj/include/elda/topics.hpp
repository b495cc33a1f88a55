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

#ifndef ELDA_TOPICS_HPP_
#define ELDA_TOPICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elda/corpus.hpp"

namespace elda {

// Candidate topic set: one labeled row of log word probabilities per topic.
// Co-occurrence generation also records a per-topic popularity log-weight
// (the log normalizer of the unnormalized row, up to a shared constant).
struct TopicMatrix {
  std::vector<std::string> labels;
  std::vector<double> log_probs;  // row-major, num_topics() x vocab_size
  int32_t vocab_size = 0;
  std::vector<double> popularity_logweights;  // empty unless co-occurrence

  int32_t num_topics() const { return static_cast<int32_t>(labels.size()); }
  std::span<const double> row(int32_t t) const {
    return {log_probs.data() + static_cast<size_t>(t) * vocab_size,
            static_cast<size_t>(vocab_size)};
  }
  bool has_popularity() const { return !popularity_logweights.empty(); }

  // Checks that every row exponentiates to 1 within tol and has finite
  // entries. Throws with the offending row index otherwise.
  void validate(double tol = 1e-6) const;
};

enum class GeneratorMode { kUMass, kExpUMass, kCooccurrence };

struct GeneratorConfig {
  GeneratorMode mode = GeneratorMode::kExpUMass;
  // <= 0 selects the mode default: 0.01 for umass/exp-umass similarity
  // smoothing, 1e-12 for the co-occurrence exponent.
  double epsilon = 0.0;
  // Empty = one topic per vocabulary word.
  std::vector<int32_t> keywords;

  double effective_epsilon() const;
};

struct GeneratedTopic {
  std::vector<double> log_probs;
  double popularity_logweight = 0.0;  // meaningful in co-occurrence mode
};

// One topic row "about" keyword w_star. Rows are normalized in log space:
//   umass:        phi[v] ~ (|D_{w*,v}| + eps) / |D_{w*}|
//   exp-umass:    phi[v] ~ exp((|D_{w*,v}| + eps) / |D_{w*}|)
//   cooccurrence: phi[v] ~ exp(|D_{w*,v}| + eps), computed directly in log
//                 space so large co-counts cannot overflow.
GeneratedTopic gen_topic(const Corpus& corpus, int32_t w_star,
                         const GeneratorConfig& cfg,
                         const CorpusPostings* postings = nullptr);

// One row per keyword, in vocabulary-id order, labeled by the keyword.
TopicMatrix build_candidate_set(const Corpus& corpus,
                                const GeneratorConfig& cfg);

// ELDA-TOPICS text format: header "ELDA-TOPICS 1 <topics> <vocab>" then one
// tab-separated "<label>\t<logp>..." line per topic with round-trip floats.
// Co-occurrence popularity weights go to an optional "<path>.weights"
// sidecar, picked up again on import when present.
void export_topics(const TopicMatrix& topics, const std::string& path,
                   bool write_weight_sidecar = true);
TopicMatrix import_topics(const std::string& path,
                          int32_t expected_vocab = -1);

std::vector<int32_t> resolve_keywords(const Corpus& corpus,
                                      const std::vector<std::string>& words);

}  // namespace elda

#endif  // ELDA_TOPICS_HPP_
