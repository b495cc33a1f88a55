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

#ifndef ELDA_OOS_HPP_
#define ELDA_OOS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "elda/corpus.hpp"
#include "elda/objective.hpp"

namespace elda {

// A held-out document projected onto the training vocabulary, plus its
// per-document sparsity budget.
struct OosRequest {
  DocRow doc;
  int32_t kappa_d = 1;
};

struct OosResult {
  std::vector<int32_t> topics;     // E_d in greedy order
  std::vector<double> marginals;   // gain of each topic when added
  std::vector<double> trace;       // cumulative objective
  std::vector<int32_t> word_topics;  // per word type, aligned with entries
};

// Greedy over this document's |Phi| links only. Output is a pure function of
// (doc, scores, kappa_d, placeholder) and identical to fast_greedy on a
// one-document corpus with kappa = kappa_d.
OosResult infer_out_of_sample(const OosRequest& request,
                              const ScoreMatrix& scores,
                              const PlaceholderConfig& placeholder = {});

// Independent per-document inference over a batch; parallel across requests.
std::vector<OosResult> infer_batch(std::span<const OosRequest> requests,
                                   const ScoreMatrix& scores,
                                   const PlaceholderConfig& placeholder = {});

// Projects raw tokens onto a training vocabulary, dropping and counting
// out-of-vocabulary tokens. Throws if nothing survives.
struct OosProjection {
  DocRow doc;
  int64_t oov_dropped = 0;
};
OosProjection project_tokens(std::span<const std::string> tokens,
                             const std::vector<std::string>& vocab,
                             const std::string& doc_id_for_errors);

}  // namespace elda

#endif  // ELDA_OOS_HPP_
