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

// Scaling benchmark: mean post-initialization per-iteration time of the
// greedy solver as the document count doubles at fixed |Phi| and max doc
// length. The heap contributes O(log |D|) per iteration against O(ell |Phi|)
// marginal work, so the ratio per doubling should stay close to 1.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "elda/greedy.hpp"
#include "elda/objective.hpp"
#include "elda/rng.hpp"

namespace {

elda::Corpus synth_corpus(elda::Rng& rng, int32_t num_docs, int32_t vocab,
                          int32_t min_len, int32_t max_len) {
  elda::Corpus corpus;
  corpus.vocab.resize(vocab);
  for (int32_t v = 0; v < vocab; ++v) corpus.vocab[v] = "w" + std::to_string(v);
  corpus.docs.resize(num_docs);
  corpus.doc_ids.resize(num_docs);
  for (int32_t d = 0; d < num_docs; ++d) {
    corpus.doc_ids[d] = "d" + std::to_string(d);
    const int32_t len =
        min_len + static_cast<int32_t>(rng.below(max_len - min_len + 1));
    std::map<int32_t, int32_t> counts;
    for (int32_t i = 0; i < len; ++i) {
      // Squared draw skews mass toward low word ids, zipf-ish.
      const double u = rng.unit();
      ++counts[static_cast<int32_t>(u * u * vocab)];
    }
    auto& row = corpus.docs[d];
    row.entries.assign(counts.begin(), counts.end());
    for (const auto& [w, c] : row.entries) row.length += c;
  }
  return corpus;
}

elda::ScoreMatrix synth_scores(elda::Rng& rng, int32_t topics, int32_t vocab) {
  std::vector<double> probs(static_cast<size_t>(topics) * vocab);
  for (int32_t t = 0; t < topics; ++t) {
    double sum = 0.0;
    double* row = probs.data() + static_cast<size_t>(t) * vocab;
    for (int32_t v = 0; v < vocab; ++v) {
      const double x = rng.unit();
      row[v] = 1e-4 + x * x * x;
      sum += row[v];
    }
    for (int32_t v = 0; v < vocab; ++v) row[v] = std::log(row[v] / sum);
  }
  return elda::ScoreMatrix::from_values(topics, vocab, std::move(probs));
}

}  // namespace

int main(int argc, char** argv) {
  int32_t base_docs = 2000;
  int doublings = 3;
  int32_t topics = 200;
  int32_t vocab = 2000;
  int32_t max_len = 300;
  double kappa = 3.0;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    const long value = std::strtol(argv[i + 1], nullptr, 10);
    if (flag == "--base-docs") base_docs = static_cast<int32_t>(value);
    else if (flag == "--doublings") doublings = static_cast<int>(value);
    else if (flag == "--topics") topics = static_cast<int32_t>(value);
    else if (flag == "--vocab") vocab = static_cast<int32_t>(value);
    else if (flag == "--max-len") max_len = static_cast<int32_t>(value);
    else if (flag == "--kappa") kappa = static_cast<double>(value);
    else {
      std::fprintf(stderr, "unknown flag %s\n", flag.c_str());
      return 2;
    }
  }

  elda::Rng rng(7);
  const elda::ScoreMatrix scores = synth_scores(rng, topics, vocab);
  std::printf("%8s %10s %14s %14s %8s\n", "docs", "iters", "init_s",
              "per_iter_us", "ratio");
  double prev = 0.0;
  bool all_ok = true;
  for (int step = 0; step <= doublings; ++step) {
    const int32_t docs = base_docs << step;
    elda::Rng crng(1234 + step);
    const elda::Corpus corpus = synth_corpus(crng, docs, vocab, 60, max_len);
    elda::SolverConfig cfg;
    cfg.kappa = kappa;
    const elda::LinkSolution solution =
        elda::fast_greedy(corpus, scores, cfg, elda::PlaceholderConfig{});
    const int64_t iters =
        static_cast<int64_t>(solution.steps.size()) - docs;
    const double per_iter =
        iters > 0 ? solution.meta.loop_seconds / static_cast<double>(iters)
                  : 0.0;
    const double ratio = prev > 0.0 ? per_iter / prev : 0.0;
    std::printf("%8d %10lld %14.3f %14.3f %8.3f\n", docs,
                static_cast<long long>(iters), solution.meta.init_seconds,
                per_iter * 1e6, ratio);
    if (prev > 0.0 && ratio > 1.3) all_ok = false;
    prev = per_iter;
  }
  std::printf(all_ok ? "per-iteration growth <= 1.3x per doubling\n"
                     : "per-iteration growth exceeded 1.3x on a doubling\n");
  return all_ok ? 0 : 1;
}
