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

#include "elda/ltlg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elda/error.hpp"
#include "elda/rng.hpp"

namespace elda {

int64_t LtlgConfig::sample_size(int32_t num_topics) const {
  const double s =
      std::ceil(static_cast<double>(num_topics) / kappa * std::log(1.0 / epsilon));
  return std::max<int64_t>(1, static_cast<int64_t>(s));
}

LinkSolution ltlg(const Corpus& corpus, const ScoreMatrix& scores,
                  const LtlgConfig& cfg, const PlaceholderConfig& placeholder) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw_invalid("ltlg epsilon must be in (0, 1)");
  }
  const int64_t budget =
      link_budget(cfg.kappa, corpus.num_docs(), scores.num_topics());
  const int32_t d_count = corpus.num_docs();
  const int32_t t_count = scores.num_topics();
  const int64_t ground = static_cast<int64_t>(d_count) * t_count;
  const int64_t s = cfg.sample_size(t_count);

  DocMemo memo(corpus.docs, scores, placeholder, cfg.lazy_word_skip);
  Rng rng(cfg.seed);

  LinkSolution solution;
  solution.meta.algorithm = "ltlg";
  solution.meta.kappa = cfg.kappa;
  solution.meta.seed = cfg.seed;
  int64_t queries = 0;

  std::vector<uint8_t> taken(ground, 0);
  auto take = [&](int32_t topic, int32_t doc, double value) {
    solution.steps.push_back(LinkStep{Link{topic, doc}, value, 0.0});
    taken[static_cast<size_t>(doc) * t_count + topic] = 1;
    memo.apply(doc, topic);
  };

  // Initialization round: each document's best first link, document order.
  for (int32_t d = 0; d < d_count; ++d) {
    int32_t best_topic = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int32_t t = 0; t < t_count; ++t) {
      const double m = memo.marginal(d, t);
      ++queries;
      if (m > best) {
        best = m;
        best_topic = t;
      }
    }
    take(best_topic, d, best);
  }

  // Sampled steps. Link id = doc * |Phi| + topic, so id order is the
  // (doc, topic) tie order.
  std::vector<int64_t> sample;
  std::vector<uint64_t> sampled_at(ground, 0);
  uint64_t round = 0;
  while (static_cast<int64_t>(solution.steps.size()) < budget) {
    ++round;
    const int64_t remaining =
        ground - static_cast<int64_t>(solution.steps.size());
    sample.clear();
    if (s >= remaining) {
      for (int64_t id = 0; id < ground; ++id) {
        if (!taken[id]) sample.push_back(id);
      }
    } else {
      while (static_cast<int64_t>(sample.size()) < s) {
        const int64_t id = static_cast<int64_t>(rng.below(ground));
        if (taken[id] || sampled_at[id] == round) continue;
        sampled_at[id] = round;
        sample.push_back(id);
      }
    }

    int32_t best_doc = -1, best_topic = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int64_t id : sample) {
      const int32_t d = static_cast<int32_t>(id / t_count);
      const int32_t t = static_cast<int32_t>(id % t_count);
      const double m = memo.marginal(d, t);
      ++queries;
      if (m > best || (m == best && (d < best_doc ||
                                     (d == best_doc && t < best_topic)))) {
        best = m;
        best_doc = d;
        best_topic = t;
      }
    }
    take(best_topic, best_doc, best);
  }

  solution.meta.queries = queries;
  double cum = 0.0;
  for (LinkStep& step : solution.steps) {
    cum += step.marginal;
    step.objective = cum;
  }
  return solution;
}

}  // namespace elda
