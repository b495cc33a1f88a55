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

#ifndef ELDA_TESTS_SUPPORT_TEST_SUPPORT_HPP_
#define ELDA_TESTS_SUPPORT_TEST_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "elda/corpus.hpp"
#include "elda/objective.hpp"
#include "elda/rng.hpp"
#include "elda/topics.hpp"

namespace elda::test {

// The 3-document corpus used across the module examples:
//   d1 = {a:2, b:1}, d2 = {b:1, c:1}, d3 = {a:1}; vocab [a, b, c].
inline Corpus fixture_corpus() {
  std::vector<RawDoc> raw(3);
  raw[0].id = "d1";
  raw[0].text = "A a b";
  raw[1].id = "d2";
  raw[1].text = "b c";
  raw[2].id = "d3";
  raw[2].text = "a";
  return ingest(raw, TokenizerConfig{});
}

inline Corpus make_corpus(const std::vector<std::map<int32_t, int32_t>>& docs,
                          int32_t vocab_size) {
  Corpus corpus;
  corpus.vocab.resize(vocab_size);
  for (int32_t v = 0; v < vocab_size; ++v) {
    corpus.vocab[v] = "w" + std::to_string(v);
  }
  for (size_t d = 0; d < docs.size(); ++d) {
    DocRow row;
    row.entries.assign(docs[d].begin(), docs[d].end());
    for (const auto& [w, c] : row.entries) row.length += c;
    corpus.docs.push_back(std::move(row));
    corpus.doc_ids.push_back("d" + std::to_string(d));
  }
  corpus.validate();
  return corpus;
}

inline ScoreMatrix random_scores(Rng& rng, int32_t topics, int32_t vocab) {
  std::vector<double> values(static_cast<size_t>(topics) * vocab);
  for (int32_t t = 0; t < topics; ++t) {
    double sum = 0.0;
    double* row = values.data() + static_cast<size_t>(t) * vocab;
    for (int32_t v = 0; v < vocab; ++v) {
      row[v] = 0.01 + rng.unit();
      sum += row[v];
    }
    for (int32_t v = 0; v < vocab; ++v) row[v] = std::log(row[v] / sum);
  }
  return ScoreMatrix::from_values(topics, vocab, std::move(values));
}

// Random topics as a proper TopicMatrix (normalized rows).
inline TopicMatrix random_topics(Rng& rng, int32_t topics, int32_t vocab) {
  TopicMatrix tm;
  tm.vocab_size = vocab;
  tm.log_probs.resize(static_cast<size_t>(topics) * vocab);
  for (int32_t t = 0; t < topics; ++t) {
    tm.labels.push_back("t" + std::to_string(t));
    double sum = 0.0;
    double* row = tm.log_probs.data() + static_cast<size_t>(t) * vocab;
    for (int32_t v = 0; v < vocab; ++v) {
      row[v] = 0.01 + rng.unit();
      sum += row[v];
    }
    for (int32_t v = 0; v < vocab; ++v) row[v] = std::log(row[v] / sum);
  }
  return tm;
}

struct Instance {
  Corpus corpus;
  ScoreMatrix scores;
};

// Random instance within the given bounds (sizes drawn uniformly).
inline Instance random_instance(Rng& rng, int32_t max_docs, int32_t max_topics,
                                int32_t max_vocab, int32_t max_len = 12) {
  const int32_t docs = 2 + static_cast<int32_t>(rng.below(max_docs - 1));
  const int32_t topics = 2 + static_cast<int32_t>(rng.below(max_topics - 1));
  const int32_t vocab = 3 + static_cast<int32_t>(rng.below(max_vocab - 2));
  std::vector<std::map<int32_t, int32_t>> rows(docs);
  for (int32_t d = 0; d < docs; ++d) {
    const int32_t len = 1 + static_cast<int32_t>(rng.below(max_len));
    for (int32_t i = 0; i < len; ++i) {
      ++rows[d][static_cast<int32_t>(rng.below(vocab))];
    }
  }
  return Instance{make_corpus(rows, vocab), random_scores(rng, topics, vocab)};
}

inline std::vector<Link> random_link_set(Rng& rng, int32_t docs, int32_t topics,
                                         int64_t size) {
  std::vector<Link> all;
  for (int32_t d = 0; d < docs; ++d) {
    for (int32_t t = 0; t < topics; ++t) all.push_back(Link{t, d});
  }
  rng.shuffle(all);
  all.resize(static_cast<size_t>(std::min<int64_t>(size, all.size())));
  return all;
}

// Enumerates all link subsets of exactly `size` links; calls fn for each.
inline void for_each_subset(int32_t docs, int32_t topics, int64_t size,
                            const std::function<void(const std::vector<Link>&)>& fn) {
  const int64_t ground = static_cast<int64_t>(docs) * topics;
  std::vector<Link> current;
  std::function<void(int64_t)> rec = [&](int64_t next) {
    if (static_cast<int64_t>(current.size()) == size) {
      fn(current);
      return;
    }
    const int64_t needed = size - static_cast<int64_t>(current.size());
    for (int64_t id = next; id <= ground - needed; ++id) {
      current.push_back(
          Link{static_cast<int32_t>(id % topics), static_cast<int32_t>(id / topics)});
      rec(id + 1);
      current.pop_back();
    }
  };
  rec(0);
}

// Brute-force optimum over all subsets of exactly `size` links; if
// `covering`, only subsets linking every document count.
inline double brute_force_opt(const Corpus& corpus, const ScoreMatrix& scores,
                              const PlaceholderConfig& placeholder,
                              int64_t size, bool covering) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_subset(
      corpus.num_docs(), scores.num_topics(), size,
      [&](const std::vector<Link>& subset) {
        if (covering) {
          std::vector<uint8_t> seen(corpus.num_docs(), 0);
          for (const Link& l : subset) seen[l.doc] = 1;
          for (uint8_t s : seen) {
            if (!s) return;
          }
        }
        best = std::max(best,
                        objective_fdot(subset, corpus, scores, placeholder));
      });
  return best;
}

// Best value of exactly `count` topics for a single document.
inline double brute_force_doc_opt(const Corpus& corpus,
                                  const ScoreMatrix& scores,
                                  const PlaceholderConfig& placeholder,
                                  int32_t doc, int32_t count) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int32_t> chosen;
  std::function<void(int32_t)> rec = [&](int32_t next) {
    if (static_cast<int32_t>(chosen.size()) == count) {
      std::vector<Link> links;
      for (int32_t t : chosen) links.push_back(Link{t, doc});
      best = std::max(best, objective_fdot(links, corpus, scores, placeholder));
      return;
    }
    for (int32_t t = next; t <= scores.num_topics() - (count - static_cast<int32_t>(chosen.size())); ++t) {
      chosen.push_back(t);
      rec(t + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return best;
}

constexpr double kOneMinusInvE = 0.6321205588285577;

}  // namespace elda::test

#endif  // ELDA_TESTS_SUPPORT_TEST_SUPPORT_HPP_
