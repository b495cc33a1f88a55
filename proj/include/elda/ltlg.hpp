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

#ifndef ELDA_LTLG_HPP_
#define ELDA_LTLG_HPP_

#include <cstdint>

#include "elda/greedy.hpp"

namespace elda {

struct LtlgConfig {
  double kappa = 1.0;
  double epsilon = 0.1;  // in (0, 1); drives the sample size
  uint64_t seed = 0;
  bool lazy_word_skip = true;

  // s = ceil((|Phi| / kappa) * ln(1 / epsilon)), at least 1.
  int64_t sample_size(int32_t num_topics) const;
};

// Randomized baseline: after the per-document initialization, each step
// samples `s` of the remaining links uniformly without replacement and adds
// the sampled link of maximum marginal value ((value, doc, topic) ties).
// Expected (1 - 1/e - epsilon) approximation; meta.queries counts marginal
// evaluations.
LinkSolution ltlg(const Corpus& corpus, const ScoreMatrix& scores,
                  const LtlgConfig& cfg,
                  const PlaceholderConfig& placeholder = {});

}  // namespace elda

#endif  // ELDA_LTLG_HPP_
