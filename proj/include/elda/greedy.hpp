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

#ifndef ELDA_GREEDY_HPP_
#define ELDA_GREEDY_HPP_

#include <cstdint>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "elda/corpus.hpp"
#include "elda/objective.hpp"

namespace elda {

struct SolverConfig {
  double kappa = 1.0;
  bool lazy_word_skip = true;
  bool track_trace = true;
  // Cross-checks every heap extraction against a full marginal-matrix scan;
  // O(|D||Phi|) per iteration, for tests on small instances.
  bool debug_checks = false;
};

// floor(kappa * |D|) with a guard against representation error; validates
// |D| <= budget <= |Phi||D|.
int64_t link_budget(double kappa, int32_t num_docs, int32_t num_topics);

// Memoized per-document state: for every word type the count-weighted best
// score under the links applied so far (the P rows), per-document totals
// (p), and a live-word list per document for lazy word skipping. Marginals
// computed here are bitwise equal to marginal_value_naive on the same links.
class DocMemo {
 public:
  DocMemo(std::span<const DocRow> docs, const ScoreMatrix& scores,
          const PlaceholderConfig& placeholder, bool lazy_word_skip = true);

  int32_t num_docs() const { return static_cast<int32_t>(doc_count_); }
  int32_t num_topics() const { return scores_->num_topics(); }

  // Marginal value of adding [topic => doc] to the applied link set.
  double marginal(int32_t doc, int32_t topic) const;

  // Folds one link into the state: P row element-max, fresh p, live pruning.
  void apply(int32_t doc, int32_t topic);

  double doc_total(int32_t doc) const { return totals_[doc]; }       // p[d]
  double doc_base_total(int32_t doc) const { return base_[doc]; }    // placeholder p
  double fdot() const;  // objective of the applied links

  // P row and word/count/live views, aligned with the document's entries.
  std::span<const double> best_row(int32_t doc) const;
  std::span<const int32_t> words(int32_t doc) const;
  std::span<const double> counts(int32_t doc) const;
  std::span<const int32_t> live_slots(int32_t doc) const;

  const ScoreMatrix& scores() const { return *scores_; }
  double placeholder_log_p() const { return log_p_; }

 private:
  size_t doc_count_ = 0;
  const ScoreMatrix* scores_ = nullptr;
  double log_p_ = 0.0;
  bool lazy_ = true;
  std::vector<int64_t> offsets_;       // doc -> flat range start; sentinel end
  std::vector<int32_t> words_;
  std::vector<double> counts_;
  std::vector<double> best_;           // P values
  std::vector<double> max_weighted_;   // count * max_t score(t, w), for pruning
  std::vector<int32_t> live_;          // live slot indices, ascending per doc
  std::vector<int32_t> live_count_;
  std::vector<double> totals_;
  std::vector<double> base_;
};

// One live entry per document, keyed (marginal value desc, doc index asc).
// Entries are invalidated by re-push; stale ones are discarded on pop.
class LinkHeap {
 public:
  struct Entry {
    double value = 0.0;
    int32_t doc = 0;
    int32_t topic = 0;
    uint64_t stamp = 0;
  };

  explicit LinkHeap(int32_t num_docs) : stamps_(num_docs, 0) {}

  void push_current(int32_t doc, int32_t topic, double value);
  void retire(int32_t doc) { ++stamps_[doc]; }
  bool pop(Entry* out);

 private:
  struct Cmp {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.value != b.value) return a.value < b.value;
      return a.doc > b.doc;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Cmp> queue_;
  std::vector<uint64_t> stamps_;
};

// The P/p/M/heap memo bundle driving FastGreedy. Construction computes the
// from-scratch marginal matrix and seeds the heap; no links applied yet.
struct MemoState {
  MemoState(const Corpus& corpus, const ScoreMatrix& scores,
            const PlaceholderConfig& placeholder, const SolverConfig& cfg);

  DocMemo memo;
  std::vector<double> marginal_matrix;  // M, |D| x |Phi| row-major
  std::vector<std::vector<int32_t>> linked;  // per doc, in link order
  std::vector<uint8_t> linked_flags;         // |D| x |Phi|
  LinkHeap heap;

  std::span<const double> marginal_row(int32_t doc) const;
  // Best unlinked topic of a document from its M row (topic-asc ties);
  // {-1, 0} if the document is saturated.
  std::pair<int32_t, double> row_best(int32_t doc) const;
  bool is_linked(int32_t doc, int32_t topic) const;

  // The Update step: appends the link, refreshes P/p, recomputes the
  // document's marginal row and re-inserts its best entry into the heap.
  void add_link(const Link& link);

 private:
  int32_t num_topics_ = 0;
  void refresh_row_and_heap(int32_t doc);
};

// Spec-facing alias for MemoState::add_link.
void update(MemoState& state, const Link& added);

// FastInitialize: every document's first link (its from-scratch argmax
// topic), applied in document order.
std::pair<std::vector<LinkStep>, MemoState> fast_initialize(
    const Corpus& corpus, const ScoreMatrix& scores,
    const PlaceholderConfig& placeholder, const SolverConfig& cfg);

// The production solver: initialization plus (kappa-1)|D| heap extractions.
// Deterministic; ties break (value desc, doc asc, topic asc).
LinkSolution fast_greedy(const Corpus& corpus, const ScoreMatrix& scores,
                         const SolverConfig& cfg,
                         const PlaceholderConfig& placeholder = {});

// Reference solver: identical schedule, every marginal recomputed through
// marginal_value_naive. Oracle for fast_greedy equivalence tests.
LinkSolution simple_greedy(const Corpus& corpus, const ScoreMatrix& scores,
                           double kappa,
                           const PlaceholderConfig& placeholder = {});

}  // namespace elda

#endif  // ELDA_GREEDY_HPP_
