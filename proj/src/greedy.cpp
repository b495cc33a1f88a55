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

#include "elda/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "elda/error.hpp"
#include "elda/parallel.hpp"

namespace elda {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int64_t link_budget(double kappa, int32_t num_docs, int32_t num_topics) {
  if (!(kappa > 0.0)) throw_invalid("kappa must be positive");
  const int64_t budget = static_cast<int64_t>(
      std::floor(kappa * static_cast<double>(num_docs) + 1e-9));
  if (budget < num_docs) {
    throw_invalid("kappa*|D| < |D|: the budget must admit one link per "
                  "document (kappa >= 1)");
  }
  const int64_t ground = static_cast<int64_t>(num_docs) * num_topics;
  if (budget > ground) {
    throw_invalid("budget kappa*|D| = " + std::to_string(budget) +
                  " exceeds the ground set of " + std::to_string(ground) +
                  " links");
  }
  return budget;
}

DocMemo::DocMemo(std::span<const DocRow> docs, const ScoreMatrix& scores,
                 const PlaceholderConfig& placeholder, bool lazy_word_skip)
    : doc_count_(docs.size()),
      scores_(&scores),
      log_p_(placeholder.log_p),
      lazy_(lazy_word_skip) {
  placeholder.check_against(scores);
  offsets_.resize(doc_count_ + 1);
  int64_t total = 0;
  for (size_t d = 0; d < doc_count_; ++d) {
    offsets_[d] = total;
    total += static_cast<int64_t>(docs[d].entries.size());
  }
  offsets_[doc_count_] = total;

  words_.resize(total);
  counts_.resize(total);
  best_.resize(total);
  live_.resize(total);
  live_count_.resize(doc_count_);
  totals_.resize(doc_count_);
  base_.resize(doc_count_);
  if (lazy_) max_weighted_.resize(total);

  // Per-word max score over all topics, used by the live-word pruning rule.
  std::vector<double> max_score;
  if (lazy_) {
    max_score.assign(scores.vocab_size(),
                     -std::numeric_limits<double>::infinity());
    for (int32_t t = 0; t < scores.num_topics(); ++t) {
      const std::span<const double> row = scores.row(t);
      for (int32_t v = 0; v < scores.vocab_size(); ++v) {
        max_score[v] = std::max(max_score[v], row[v]);
      }
    }
  }

  for (size_t d = 0; d < doc_count_; ++d) {
    const int64_t off = offsets_[d];
    const auto& entries = docs[d].entries;
    double base_total = 0.0;
    for (size_t j = 0; j < entries.size(); ++j) {
      const auto& [word, count] = entries[j];
      if (word < 0 || word >= scores.vocab_size()) {
        throw_invalid("document word id out of score-matrix range");
      }
      const double c = static_cast<double>(count);
      words_[off + j] = word;
      counts_[off + j] = c;
      best_[off + j] = c * log_p_;
      base_total += best_[off + j];
      live_[off + j] = static_cast<int32_t>(j);
      if (lazy_) max_weighted_[off + j] = c * max_score[word];
    }
    live_count_[d] = static_cast<int32_t>(entries.size());
    totals_[d] = base_total;
    base_[d] = base_total;
  }
}

double DocMemo::marginal(int32_t doc, int32_t topic) const {
  const int64_t off = offsets_[doc];
  const int32_t* live = live_.data() + off;
  const int32_t n = live_count_[doc];
  const int32_t* words = words_.data() + off;
  const double* counts = counts_.data() + off;
  const double* best = best_.data() + off;
  const double* row =
      scores_->row(topic).data();
  double acc = 0.0;
  for (int32_t k = 0; k < n; ++k) {
    const int32_t j = live[k];
    const double imp = counts[j] * row[words[j]] - best[j];
    if (imp > 0.0) acc += imp;
  }
  return acc;
}

void DocMemo::apply(int32_t doc, int32_t topic) {
  const int64_t off = offsets_[doc];
  const int64_t end = offsets_[doc + 1];
  const double* row = scores_->row(topic).data();
  int32_t* live = live_.data() + off;
  int32_t n = live_count_[doc];
  for (int32_t k = 0; k < n; ++k) {
    const int32_t j = live[k];
    const double ws = counts_[off + j] * row[words_[off + j]];
    if (ws > best_[off + j]) best_[off + j] = ws;
  }
  // Fresh row sum keeps p exactly consistent with P.
  double total = 0.0;
  for (int64_t j = off; j < end; ++j) total += best_[j];
  totals_[doc] = total;

  if (lazy_) {
    int32_t kept = 0;
    for (int32_t k = 0; k < n; ++k) {
      const int32_t j = live[k];
      if (max_weighted_[off + j] > best_[off + j]) live[kept++] = j;
    }
    live_count_[doc] = kept;
  }
}

double DocMemo::fdot() const {
  std::vector<double> gains(doc_count_);
  for (size_t d = 0; d < doc_count_; ++d) gains[d] = totals_[d] - base_[d];
  return pairwise_sum(gains);
}

std::span<const double> DocMemo::best_row(int32_t doc) const {
  return {best_.data() + offsets_[doc],
          static_cast<size_t>(offsets_[doc + 1] - offsets_[doc])};
}
std::span<const int32_t> DocMemo::words(int32_t doc) const {
  return {words_.data() + offsets_[doc],
          static_cast<size_t>(offsets_[doc + 1] - offsets_[doc])};
}
std::span<const double> DocMemo::counts(int32_t doc) const {
  return {counts_.data() + offsets_[doc],
          static_cast<size_t>(offsets_[doc + 1] - offsets_[doc])};
}
std::span<const int32_t> DocMemo::live_slots(int32_t doc) const {
  return {live_.data() + offsets_[doc], static_cast<size_t>(live_count_[doc])};
}

void LinkHeap::push_current(int32_t doc, int32_t topic, double value) {
  queue_.push(Entry{value, doc, topic, ++stamps_[doc]});
}

bool LinkHeap::pop(Entry* out) {
  while (!queue_.empty()) {
    Entry e = queue_.top();
    queue_.pop();
    if (e.stamp == stamps_[e.doc]) {
      ++stamps_[e.doc];  // consumed; the doc has no live entry until re-push
      *out = e;
      return true;
    }
  }
  return false;
}

MemoState::MemoState(const Corpus& corpus, const ScoreMatrix& scores,
                     const PlaceholderConfig& placeholder,
                     const SolverConfig& cfg)
    : memo(corpus.docs, scores, placeholder, cfg.lazy_word_skip),
      heap(corpus.num_docs()),
      num_topics_(scores.num_topics()) {
  const int32_t d_count = corpus.num_docs();
  marginal_matrix.resize(static_cast<size_t>(d_count) * num_topics_);
  linked.resize(d_count);
  linked_flags.assign(static_cast<size_t>(d_count) * num_topics_, 0);

  // The initial marginal rows are independent across documents.
  parallel_for(0, d_count, [&](int64_t d) {
    double* row = marginal_matrix.data() + d * num_topics_;
    for (int32_t t = 0; t < num_topics_; ++t) {
      row[t] = memo.marginal(static_cast<int32_t>(d), t);
    }
  });
  for (int32_t d = 0; d < d_count; ++d) {
    const auto [topic, value] = row_best(d);
    heap.push_current(d, topic, value);
  }
}

std::span<const double> MemoState::marginal_row(int32_t doc) const {
  return {marginal_matrix.data() + static_cast<size_t>(doc) * num_topics_,
          static_cast<size_t>(num_topics_)};
}

bool MemoState::is_linked(int32_t doc, int32_t topic) const {
  return linked_flags[static_cast<size_t>(doc) * num_topics_ + topic] != 0;
}

std::pair<int32_t, double> MemoState::row_best(int32_t doc) const {
  const double* row =
      marginal_matrix.data() + static_cast<size_t>(doc) * num_topics_;
  const uint8_t* flags =
      linked_flags.data() + static_cast<size_t>(doc) * num_topics_;
  int32_t best_topic = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int32_t t = 0; t < num_topics_; ++t) {
    if (flags[t]) continue;
    if (row[t] > best) {
      best = row[t];
      best_topic = t;
    }
  }
  if (best_topic < 0) return {-1, 0.0};
  return {best_topic, best};
}

void MemoState::refresh_row_and_heap(int32_t doc) {
  double* row = marginal_matrix.data() + static_cast<size_t>(doc) * num_topics_;
  for (int32_t t = 0; t < num_topics_; ++t) {
    row[t] = memo.marginal(doc, t);
  }
  const auto [topic, value] = row_best(doc);
  if (topic < 0) {
    heap.retire(doc);
  } else {
    heap.push_current(doc, topic, value);
  }
}

void MemoState::add_link(const Link& link) {
  const size_t flat =
      static_cast<size_t>(link.doc) * num_topics_ + link.topic;
  if (linked_flags[flat]) {
    throw_invalid("link added twice: [" + std::to_string(link.topic) + "=>" +
                  std::to_string(link.doc) + "]");
  }
  linked_flags[flat] = 1;
  linked[link.doc].push_back(link.topic);
  memo.apply(link.doc, link.topic);
  refresh_row_and_heap(link.doc);
}

void update(MemoState& state, const Link& added) { state.add_link(added); }

std::pair<std::vector<LinkStep>, MemoState> fast_initialize(
    const Corpus& corpus, const ScoreMatrix& scores,
    const PlaceholderConfig& placeholder, const SolverConfig& cfg) {
  MemoState state(corpus, scores, placeholder, cfg);
  std::vector<LinkStep> steps;
  steps.reserve(corpus.num_docs());
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    const auto [topic, value] = state.row_best(d);
    steps.push_back(LinkStep{Link{topic, d}, value, 0.0});
    state.add_link(Link{topic, d});
  }
  return {std::move(steps), std::move(state)};
}

namespace {

void fill_trace(LinkSolution* solution, bool track_trace) {
  double cum = 0.0;
  for (LinkStep& s : solution->steps) {
    cum += s.marginal;
    s.objective = track_trace ? cum : 0.0;
  }
  if (!track_trace && !solution->steps.empty()) {
    solution->steps.back().objective = cum;
  }
}

// Debug cross-check: the extracted entry must match a full scan of the
// marginal matrix under the (value desc, doc asc, topic asc) order.
void verify_extraction(const MemoState& state, const LinkHeap::Entry& e) {
  int32_t best_doc = -1, best_topic = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int32_t d = 0; d < state.memo.num_docs(); ++d) {
    const auto row = state.marginal_row(d);
    for (int32_t t = 0; t < state.memo.num_topics(); ++t) {
      if (state.is_linked(d, t)) continue;
      if (row[t] > best) {
        best = row[t];
        best_doc = d;
        best_topic = t;
      }
    }
  }
  if (best_doc != e.doc || best_topic != e.topic || best != e.value) {
    throw Error(ErrorCode::kInternal,
                "heap extraction mismatch: scan found [" +
                    std::to_string(best_topic) + "=>" +
                    std::to_string(best_doc) + "] value " +
                    std::to_string(best) + ", heap returned [" +
                    std::to_string(e.topic) + "=>" + std::to_string(e.doc) +
                    "] value " + std::to_string(e.value));
  }
}

}  // namespace

LinkSolution fast_greedy(const Corpus& corpus, const ScoreMatrix& scores,
                         const SolverConfig& cfg,
                         const PlaceholderConfig& placeholder) {
  const int64_t budget =
      link_budget(cfg.kappa, corpus.num_docs(), scores.num_topics());
  const auto t0 = std::chrono::steady_clock::now();
  auto [steps, state] = fast_initialize(corpus, scores, placeholder, cfg);

  LinkSolution solution;
  solution.steps = std::move(steps);
  solution.meta.algorithm = "fastgreedy";
  solution.meta.kappa = cfg.kappa;
  solution.meta.init_seconds = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  while (static_cast<int64_t>(solution.steps.size()) < budget) {
    LinkHeap::Entry e;
    if (!state.heap.pop(&e)) {
      solution.meta.truncated = true;
      break;
    }
    if (cfg.debug_checks) verify_extraction(state, e);
    solution.steps.push_back(LinkStep{Link{e.topic, e.doc}, e.value, 0.0});
    state.add_link(Link{e.topic, e.doc});
  }
  solution.meta.loop_seconds = seconds_since(t1);
  fill_trace(&solution, cfg.track_trace);
  return solution;
}

LinkSolution simple_greedy(const Corpus& corpus, const ScoreMatrix& scores,
                           double kappa,
                           const PlaceholderConfig& placeholder) {
  const int64_t budget =
      link_budget(kappa, corpus.num_docs(), scores.num_topics());
  const int32_t d_count = corpus.num_docs();
  const int32_t t_count = scores.num_topics();

  LinkSolution solution;
  solution.meta.algorithm = "simple";
  solution.meta.kappa = kappa;
  std::vector<Link> links;
  std::vector<uint8_t> taken(static_cast<size_t>(d_count) * t_count, 0);

  auto take = [&](int32_t topic, int32_t doc, double value) {
    solution.steps.push_back(LinkStep{Link{topic, doc}, value, 0.0});
    links.push_back(Link{topic, doc});
    taken[static_cast<size_t>(doc) * t_count + topic] = 1;
  };

  // Each document's first link, in document order.
  for (int32_t d = 0; d < d_count; ++d) {
    int32_t best_topic = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int32_t t = 0; t < t_count; ++t) {
      const double m =
          marginal_value_naive(links, Link{t, d}, corpus, scores, placeholder);
      if (m > best) {
        best = m;
        best_topic = t;
      }
    }
    take(best_topic, d, best);
  }

  while (static_cast<int64_t>(solution.steps.size()) < budget) {
    int32_t best_doc = -1, best_topic = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int32_t d = 0; d < d_count; ++d) {
      for (int32_t t = 0; t < t_count; ++t) {
        if (taken[static_cast<size_t>(d) * t_count + t]) continue;
        const double m = marginal_value_naive(links, Link{t, d}, corpus,
                                              scores, placeholder);
        if (m > best) {
          best = m;
          best_doc = d;
          best_topic = t;
        }
      }
    }
    take(best_topic, best_doc, best);
  }
  fill_trace(&solution, /*track_trace=*/true);
  return solution;
}

}  // namespace elda
