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

#include "elda/fast_parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "elda/error.hpp"
#include "elda/parallel.hpp"

namespace elda {

namespace {

constexpr double kOneMinusInvE = 0.6321205588285577;
constexpr int kStallLimit = 1000;

void validate_fast_config(const FastConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.1)) {
    throw_invalid("fast epsilon must be in (0, 0.1)");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw_invalid("fast delta must be in (0, 1)");
  }
  if (!(cfg.kappa > 0.0)) throw_invalid("kappa must be positive");
}

// Marginal of `a` against the memo state with a per-document overlay row;
// identical inner loop to DocMemo::marginal so values match bitwise.
double overlay_marginal(const DocMemo& memo, const std::vector<double>& row,
                        const Link& a) {
  const auto live = memo.live_slots(a.doc);
  const auto words = memo.words(a.doc);
  const auto counts = memo.counts(a.doc);
  const double* scores = memo.scores().row(a.topic).data();
  double acc = 0.0;
  for (int32_t j : live) {
    const double imp = counts[j] * scores[words[j]] - row[j];
    if (imp > 0.0) acc += imp;
  }
  return acc;
}

void overlay_apply(const DocMemo& memo, std::vector<double>& row,
                   const Link& link) {
  const auto live = memo.live_slots(link.doc);
  const auto words = memo.words(link.doc);
  const auto counts = memo.counts(link.doc);
  const double* scores = memo.scores().row(link.topic).data();
  for (int32_t j : live) {
    const double ws = counts[j] * scores[words[j]];
    if (ws > row[j]) row[j] = ws;
  }
}

}  // namespace

int64_t FastConfig::effective_sample_m(int64_t ground, int64_t budget) const {
  if (sample_m > 0) return std::min(sample_m, ground);
  const double k = static_cast<double>(budget);
  const double ell = std::log(std::log(std::max(k, 3.0)) / epsilon);
  const double m =
      (2.0 + epsilon) / (epsilon * epsilon * (1.0 - 3.0 * epsilon)) *
      std::log(4.0 * ell * std::log(static_cast<double>(ground)) /
               (delta * epsilon * epsilon));
  return std::min<int64_t>(ground,
                           std::max<int64_t>(1, static_cast<int64_t>(std::ceil(m))));
}

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw_invalid("geometric_grid needs 0 < lo <= hi");
  }
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw_invalid("geometric_grid ratio must be in (0, 1)");
  }
  std::vector<double> grid;
  for (double v = hi; v >= lo; v *= ratio) grid.push_back(v);
  if (grid.empty() || grid.back() != lo) grid.push_back(lo);
  return grid;
}

void PrefixQueryContext::append(const Link& link) {
  auto [it, inserted] = overlays_.try_emplace(link.doc);
  if (inserted) {
    const auto row = memo_->best_row(link.doc);
    it->second.assign(row.begin(), row.end());
  }
  overlay_apply(*memo_, it->second, link);
}

double PrefixQueryContext::simulated_marginal(const Link& a) const {
  auto it = overlays_.find(a.doc);
  if (it == overlays_.end()) return memo_->marginal(a.doc, a.topic);
  return overlay_marginal(*memo_, it->second, a);
}

namespace {

// All sequence-prefix marginals f_{E ∪ A_{i-1}}(a_i) for one sequence, one
// adaptive round: documents are walked independently, each folding its own
// links into a private overlay.
std::vector<double> sequence_prefix_marginals(const DocMemo& memo,
                                              const std::vector<Link>& seq) {
  std::vector<double> out(seq.size());
  const int32_t d_count = memo.num_docs();
  std::vector<std::vector<int32_t>> positions(d_count);
  for (size_t i = 0; i < seq.size(); ++i) {
    positions[seq[i].doc].push_back(static_cast<int32_t>(i));
  }
  std::vector<int32_t> touched;
  for (int32_t d = 0; d < d_count; ++d) {
    if (!positions[d].empty()) touched.push_back(d);
  }
  parallel_for(0, static_cast<int64_t>(touched.size()), [&](int64_t k) {
    const int32_t d = touched[k];
    const auto& pos = positions[d];
    if (pos.size() == 1) {
      out[pos[0]] = memo.marginal(d, seq[pos[0]].topic);
      return;
    }
    const auto base = memo.best_row(d);
    std::vector<double> row(base.begin(), base.end());
    for (int32_t i : pos) {
      out[i] = overlay_marginal(memo, row, seq[i]);
      overlay_apply(memo, row, seq[i]);
    }
  });
  return out;
}

// Geometric prefix index set: 1, ceil((1-eps)^-1), ... capped at `cap`,
// deduplicated ascending. Index 1 and the cap are always present.
std::vector<int64_t> geometric_indices(int64_t cap, double epsilon) {
  std::vector<int64_t> idx;
  double v = 1.0;
  const double growth = 1.0 / (1.0 - epsilon);
  while (true) {
    const int64_t i = static_cast<int64_t>(std::ceil(v));
    if (i >= cap) break;
    if (idx.empty() || idx.back() != i) idx.push_back(i);
    v *= growth;
  }
  if (cap >= 1 && (idx.empty() || idx.back() != cap)) idx.push_back(cap);
  return idx;
}

}  // namespace

std::vector<Link> fast_inner(double guess, int64_t budget,
                             const Corpus& corpus, const ScoreMatrix& scores,
                             const FastConfig& cfg,
                             const PlaceholderConfig& placeholder, Rng& rng,
                             FastRunStats* stats) {
  if (!(guess > 0.0)) throw_invalid("fast_inner guess must be positive");
  const int32_t d_count = corpus.num_docs();
  const int32_t t_count = scores.num_topics();
  const int64_t ground = static_cast<int64_t>(d_count) * t_count;
  const double eps = cfg.epsilon;
  const int64_t outer_limit =
      static_cast<int64_t>(std::ceil(1.0 / eps));
  const int64_t m = cfg.effective_sample_m(ground, budget);

  DocMemo memo(corpus.docs, scores, placeholder, cfg.lazy_word_skip);
  std::vector<Link> selected;
  std::vector<uint8_t> taken(ground, 0);
  auto link_id = [t_count](const Link& l) {
    return static_cast<int64_t>(l.doc) * t_count + l.topic;
  };
  auto add_link = [&](const Link& l) {
    selected.push_back(l);
    taken[link_id(l)] = 1;
    memo.apply(l.doc, l.topic);
  };

  int stalls = 0;
  for (int64_t outer = 0;
       outer < outer_limit && static_cast<int64_t>(selected.size()) < budget;
       ++outer) {
    std::vector<Link> pool;
    pool.reserve(ground - selected.size());
    for (int32_t d = 0; d < d_count; ++d) {
      for (int32_t t = 0; t < t_count; ++t) {
        if (!taken[static_cast<size_t>(d) * t_count + t]) {
          pool.push_back(Link{t, d});
        }
      }
    }
    const double t_hat =
        (1.0 - eps) * (guess - memo.fdot()) / static_cast<double>(budget);

    while (!pool.empty() &&
           static_cast<int64_t>(selected.size()) < budget) {
      std::vector<Link> seq = pool;
      rng.shuffle(seq);
      const std::vector<double> prefix_marginals =
          sequence_prefix_marginals(memo, seq);
      if (stats) {
        ++stats->adaptive_rounds;
        stats->queries += static_cast<int64_t>(seq.size());
      }

      // Add every sequence element whose prefix marginal clears the
      // threshold, in sequence order, up to the budget.
      for (size_t i = 0; i < seq.size(); ++i) {
        if (static_cast<int64_t>(selected.size()) >= budget) break;
        if (prefix_marginals[i] >= t_hat) add_link(seq[i]);
      }
      if (static_cast<int64_t>(selected.size()) >= budget) break;

      const size_t pool_size_before = pool.size();
      std::erase_if(pool, [&](const Link& l) { return taken[link_id(l)]; });
      if (pool.empty()) break;

      // Filter the survivors against the updated solution.
      std::vector<uint8_t> pass(pool.size(), 0);
      parallel_for(0, static_cast<int64_t>(pool.size()), [&](int64_t i) {
        pass[i] = memo.marginal(pool[i].doc, pool[i].topic) >= t_hat ? 1 : 0;
      });
      if (stats) {
        ++stats->adaptive_rounds;
        stats->queries += static_cast<int64_t>(pool.size());
      }
      std::vector<Link> survivors;
      survivors.reserve(pool.size());
      for (size_t i = 0; i < pool.size(); ++i) {
        if (pass[i]) survivors.push_back(pool[i]);
      }
      if (survivors.size() <=
          (1.0 - eps) * static_cast<double>(pool_size_before)) {
        pool = std::move(survivors);
        continue;
      }

      // Most links still pass: find the longest sequence prefix that keeps a
      // (1 - 2 eps) fraction of a sample above the threshold.
      std::vector<Link> sample = pool;
      if (static_cast<int64_t>(sample.size()) > m) {
        rng.shuffle(sample);
        sample.resize(m);
      }
      const std::vector<int64_t> indices = geometric_indices(
          std::min<int64_t>(budget - static_cast<int64_t>(selected.size()),
                            static_cast<int64_t>(seq.size())),
          eps);

      // R_i counts for all geometric prefixes, one adaptive round.
      std::vector<std::vector<int32_t>> positions(d_count);
      for (size_t i = 0; i < seq.size(); ++i) {
        positions[seq[i].doc].push_back(static_cast<int32_t>(i));
      }
      std::vector<int64_t> pass_count(indices.size(), 0);
      std::vector<std::vector<uint8_t>> sample_pass(
          sample.size(), std::vector<uint8_t>(indices.size(), 0));
      parallel_for(0, static_cast<int64_t>(sample.size()), [&](int64_t si) {
        const Link a = sample[si];
        const auto& pos = positions[a.doc];
        std::vector<double> row;
        size_t applied = 0;
        for (size_t ii = 0; ii < indices.size(); ++ii) {
          const int64_t prefix_len = indices[ii] - 1;  // A_{i-1}
          while (applied < pos.size() && pos[applied] < prefix_len) {
            if (row.empty()) {
              const auto base = memo.best_row(a.doc);
              row.assign(base.begin(), base.end());
            }
            overlay_apply(memo, row, seq[pos[applied]]);
            ++applied;
          }
          const double value = row.empty()
                                   ? memo.marginal(a.doc, a.topic)
                                   : overlay_marginal(memo, row, a);
          sample_pass[si][ii] = value >= t_hat ? 1 : 0;
        }
      });
      if (stats) {
        ++stats->adaptive_rounds;
        stats->queries +=
            static_cast<int64_t>(sample.size() * indices.size());
      }
      for (size_t si = 0; si < sample.size(); ++si) {
        for (size_t ii = 0; ii < indices.size(); ++ii) {
          pass_count[ii] += sample_pass[si][ii];
        }
      }

      const double needed = (1.0 - 2.0 * eps) * static_cast<double>(sample.size());
      int64_t lo = 0, hi = static_cast<int64_t>(indices.size()) - 1;
      int64_t best_ii = -1;
      while (lo <= hi) {
        const int64_t mid = lo + (hi - lo) / 2;
        if (static_cast<double>(pass_count[mid]) >= needed) {
          best_ii = mid;
          lo = mid + 1;
        } else {
          hi = mid - 1;
        }
      }
      if (best_ii < 0) {
        if (++stalls > kStallLimit) {
          if (stats) stats->stalled = true;
          return selected;
        }
        continue;
      }
      const int64_t i_star = indices[best_ii];
      for (int64_t i = 0; i < i_star; ++i) {
        if (static_cast<int64_t>(selected.size()) >= budget) break;
        if (!taken[link_id(seq[i])]) add_link(seq[i]);
      }
      std::erase_if(pool, [&](const Link& l) { return taken[link_id(l)]; });
    }
  }
  if (stats) {
    stats->hit_budget = static_cast<int64_t>(selected.size()) == budget;
  }
  return selected;
}

LinkSolution fast_full(const Corpus& corpus, const ScoreMatrix& scores,
                       const FastConfig& cfg,
                       const PlaceholderConfig& placeholder) {
  validate_fast_config(cfg);
  const int32_t d_count = corpus.num_docs();
  const int32_t t_count = scores.num_topics();
  const int64_t ground = static_cast<int64_t>(d_count) * t_count;
  const int64_t budget = static_cast<int64_t>(
      std::floor(cfg.kappa * static_cast<double>(d_count) + 1e-9));
  if (budget < 1) throw_invalid("kappa*|D| must be at least 1");
  if (budget > ground) {
    throw_invalid("budget kappa*|D| exceeds the ground set");
  }

  FastRunStats totals;

  // Singleton statistics bracket OPT: max single-link value from below, sum
  // of the top kappa*|D| singleton values from above (subadditivity).
  DocMemo singleton_memo(corpus.docs, scores, placeholder,
                         cfg.lazy_word_skip);
  std::vector<double> singleton(ground);
  parallel_for(0, ground, [&](int64_t id) {
    singleton[id] = singleton_memo.marginal(
        static_cast<int32_t>(id / t_count), static_cast<int32_t>(id % t_count));
  });
  ++totals.adaptive_rounds;
  totals.queries += ground;

  std::vector<double> sorted = singleton;
  std::nth_element(sorted.begin(), sorted.begin() + (budget - 1), sorted.end(),
                   std::greater<double>());
  const double lo = *std::max_element(sorted.begin(), sorted.begin() + budget);
  double hi = 0.0;
  for (int64_t i = 0; i < budget; ++i) hi += sorted[i];
  const std::vector<double> grid = geometric_grid(lo, hi, 1.0 - cfg.epsilon);

  struct Attempt {
    std::vector<Link> links;
    double value = 0.0;
    bool certified = false;
  };
  std::vector<Attempt> attempts(grid.size());
  std::vector<uint8_t> evaluated(grid.size(), 0);
  auto certify = [&](size_t idx) -> bool {
    if (!evaluated[idx]) {
      Rng rng(mix_seed(cfg.seed, idx));
      FastRunStats stats;
      Attempt attempt;
      attempt.links = fast_inner(grid[idx], budget, corpus, scores, cfg,
                                 placeholder, rng, &stats);
      attempt.value =
          objective_fdot(attempt.links, corpus, scores, placeholder);
      attempt.certified = attempt.value >= kOneMinusInvE * grid[idx];
      attempts[idx] = std::move(attempt);
      evaluated[idx] = 1;
      totals.adaptive_rounds += stats.adaptive_rounds;
      totals.queries += stats.queries;
      if (stats.stalled) totals.stalled = true;
    }
    return attempts[idx].certified;
  };

  // Binary search the descending grid for the largest certified guess.
  int64_t lo_i = 0, hi_i = static_cast<int64_t>(grid.size()) - 1;
  int64_t best = -1;
  while (lo_i <= hi_i) {
    const int64_t mid = lo_i + (hi_i - lo_i) / 2;
    if (certify(static_cast<size_t>(mid))) {
      best = mid;
      hi_i = mid - 1;  // try larger guesses (smaller index)
    } else {
      lo_i = mid + 1;
    }
  }
  if (best < 0) {
    throw Error(ErrorCode::kInternal,
                "fast_full: no guess certified a (1-1/e) solution");
  }
  const Attempt& chosen = attempts[static_cast<size_t>(best)];

  // Export bookkeeping: exact sequential gains so the trace telescopes to
  // fdot(E); these replays are not algorithm queries.
  LinkSolution solution;
  solution.meta.algorithm = "fast";
  solution.meta.kappa = cfg.kappa;
  solution.meta.seed = cfg.seed;
  solution.meta.v_star = grid[static_cast<size_t>(best)];
  solution.meta.certified = true;
  solution.meta.adaptive_rounds = totals.adaptive_rounds;
  solution.meta.queries = totals.queries;
  solution.meta.truncated =
      static_cast<int64_t>(chosen.links.size()) < budget;
  DocMemo replay(corpus.docs, scores, placeholder, cfg.lazy_word_skip);
  double cum = 0.0;
  for (const Link& l : chosen.links) {
    const double gain = replay.marginal(l.doc, l.topic);
    replay.apply(l.doc, l.topic);
    cum += gain;
    solution.steps.push_back(LinkStep{l, gain, cum});
  }
  return solution;
}

}  // namespace elda
