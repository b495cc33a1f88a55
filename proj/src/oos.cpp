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

#include "elda/oos.hpp"

#include <limits>
#include <map>
#include <unordered_map>

#include "elda/error.hpp"
#include "elda/greedy.hpp"
#include "elda/parallel.hpp"

namespace elda {

OosResult infer_out_of_sample(const OosRequest& request,
                              const ScoreMatrix& scores,
                              const PlaceholderConfig& placeholder) {
  if (request.doc.entries.empty()) {
    throw_invalid("out-of-sample document is empty after vocabulary projection");
  }
  if (request.kappa_d < 1 || request.kappa_d > scores.num_topics()) {
    throw_invalid("kappa_d must be in [1, |Phi|]");
  }

  DocMemo memo({&request.doc, 1}, scores, placeholder);
  const int32_t t_count = scores.num_topics();
  std::vector<uint8_t> linked(t_count, 0);

  OosResult result;
  double cum = 0.0;
  for (int32_t step = 0; step < request.kappa_d; ++step) {
    int32_t best_topic = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int32_t t = 0; t < t_count; ++t) {
      if (linked[t]) continue;
      const double m = memo.marginal(0, t);
      if (m > best) {
        best = m;
        best_topic = t;
      }
    }
    linked[best_topic] = 1;
    memo.apply(0, best_topic);
    cum += best;
    result.topics.push_back(best_topic);
    result.marginals.push_back(best);
    result.trace.push_back(cum);
  }
  result.word_topics = assign_words(request.doc, result.topics, scores);
  return result;
}

std::vector<OosResult> infer_batch(std::span<const OosRequest> requests,
                                   const ScoreMatrix& scores,
                                   const PlaceholderConfig& placeholder) {
  std::vector<OosResult> out(requests.size());
  parallel_for(0, static_cast<int64_t>(requests.size()), [&](int64_t i) {
    out[i] = infer_out_of_sample(requests[i], scores, placeholder);
  });
  return out;
}

OosProjection project_tokens(std::span<const std::string> tokens,
                             const std::vector<std::string>& vocab,
                             const std::string& doc_id_for_errors) {
  std::unordered_map<std::string, int32_t> index;
  index.reserve(vocab.size());
  for (int32_t v = 0; v < static_cast<int32_t>(vocab.size()); ++v) {
    index[vocab[v]] = v;
  }
  std::map<int32_t, int32_t> counts;
  OosProjection projection;
  for (const std::string& tok : tokens) {
    auto it = index.find(tok);
    if (it == index.end()) {
      ++projection.oov_dropped;
    } else {
      ++counts[it->second];
    }
  }
  if (counts.empty()) {
    throw_invalid("document " + doc_id_for_errors +
                  " is empty after vocabulary projection");
  }
  projection.doc.entries.assign(counts.begin(), counts.end());
  for (const auto& [w, c] : projection.doc.entries) projection.doc.length += c;
  return projection;
}

}  // namespace elda
