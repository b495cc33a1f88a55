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

#ifndef ELDA_FAST_PARALLEL_HPP_
#define ELDA_FAST_PARALLEL_HPP_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "elda/greedy.hpp"
#include "elda/rng.hpp"

namespace elda {

// Config for the low-adaptivity solver. epsilon is restricted to (0, 0.1);
// sample_m <= 0 selects the theoretical sample complexity
//   m = (2 + eps) / (eps^2 (1 - 3 eps)) * log(4 l log(|Phi||D|) / (delta eps^2))
// which is conservative at desk scale, hence the override.
struct FastConfig {
  double kappa = 1.0;
  double epsilon = 0.05;
  double delta = 0.05;
  uint64_t seed = 0;
  int64_t sample_m = 0;
  bool lazy_word_skip = true;

  int64_t effective_sample_m(int64_t ground, int64_t budget) const;
};

// Descending geometric grid: hi, hi*ratio, hi*ratio^2, ... down to >= lo,
// then lo itself.
std::vector<double> geometric_grid(double lo, double hi, double ratio);

// Marginal queries against E ∪ A, where E is the state folded into `memo`
// and A is a pending link sequence applied as document-local overlays.
// Results are bitwise equal to marginal_value_naive(E ∪ A, a).
class PrefixQueryContext {
 public:
  explicit PrefixQueryContext(const DocMemo& memo) : memo_(&memo) {}

  void append(const Link& link);            // extend A by one link, O(ell)
  double simulated_marginal(const Link& a) const;

 private:
  const DocMemo* memo_;
  std::unordered_map<int32_t, std::vector<double>> overlays_;
};

struct FastRunStats {
  int64_t adaptive_rounds = 0;
  int64_t queries = 0;
  bool hit_budget = false;
  bool stalled = false;
};

// One guess of the inner adaptive-sequencing algorithm. Returns the selected
// links in insertion order; `memo` ends holding their state.
std::vector<Link> fast_inner(double guess, int64_t budget,
                             const Corpus& corpus, const ScoreMatrix& scores,
                             const FastConfig& cfg,
                             const PlaceholderConfig& placeholder, Rng& rng,
                             FastRunStats* stats);

// Full solver: geometric guess grid over OPT from singleton statistics,
// binary search for the largest certified guess (fdot(E_v) >= (1-1/e) v).
// meta carries v_star, certified, adaptive_rounds and queries.
LinkSolution fast_full(const Corpus& corpus, const ScoreMatrix& scores,
                       const FastConfig& cfg,
                       const PlaceholderConfig& placeholder = {});

}  // namespace elda

#endif  // ELDA_FAST_PARALLEL_HPP_
