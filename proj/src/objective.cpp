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

#include "elda/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elda/error.hpp"

namespace elda {

ScoreMatrix ScoreMatrix::from_topics(const TopicMatrix& topics,
                                     bool use_popularity) {
  if (use_popularity && !topics.has_popularity()) {
    throw_invalid("topic matrix carries no popularity weights");
  }
  ScoreMatrix s;
  s.num_topics_ = topics.num_topics();
  s.vocab_size_ = topics.vocab_size;
  s.values_ = topics.log_probs;
  if (use_popularity) {
    for (int32_t t = 0; t < s.num_topics_; ++t) {
      const double w = topics.popularity_logweights[t];
      double* row = s.values_.data() + static_cast<size_t>(t) * s.vocab_size_;
      for (int32_t v = 0; v < s.vocab_size_; ++v) row[v] += w;
    }
  }
  s.min_entry_ = *std::min_element(s.values_.begin(), s.values_.end());
  return s;
}

ScoreMatrix ScoreMatrix::from_values(int32_t num_topics, int32_t vocab_size,
                                     std::vector<double> values) {
  if (num_topics < 1 || vocab_size < 1 ||
      values.size() != static_cast<size_t>(num_topics) * vocab_size) {
    throw_invalid("score matrix shape mismatch");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw_invalid("score matrix entries must be finite");
  }
  ScoreMatrix s;
  s.num_topics_ = num_topics;
  s.vocab_size_ = vocab_size;
  s.values_ = std::move(values);
  s.min_entry_ = *std::min_element(s.values_.begin(), s.values_.end());
  return s;
}

void PlaceholderConfig::check_against(const ScoreMatrix& scores) const {
  if (!(log_p < scores.min_entry())) {
    throw_invalid(
        "placeholder log probability must lie strictly below every topic "
        "score (log_p=" + std::to_string(log_p) + ", min score=" +
        std::to_string(scores.min_entry()) + ")");
  }
}

std::vector<Link> LinkSolution::links() const {
  std::vector<Link> out;
  out.reserve(steps.size());
  for (const LinkStep& s : steps) out.push_back(s.link);
  return out;
}

std::vector<std::vector<int32_t>> links_by_doc(std::span<const Link> links,
                                               int32_t num_docs,
                                               int32_t num_topics) {
  std::vector<std::vector<int32_t>> by_doc(num_docs);
  for (const Link& l : links) {
    if (l.doc < 0 || l.doc >= num_docs || l.topic < 0 || l.topic >= num_topics) {
      throw_invalid("link index out of range");
    }
    auto& topics = by_doc[l.doc];
    if (std::find(topics.begin(), topics.end(), l.topic) != topics.end()) {
      throw_invalid("duplicate link [" + std::to_string(l.topic) + "=>" +
                    std::to_string(l.doc) + "]");
    }
    topics.push_back(l.topic);
  }
  return by_doc;
}

std::vector<int32_t> assign_words(const DocRow& doc,
                                  std::span<const int32_t> linked_topics,
                                  const ScoreMatrix& scores) {
  if (linked_topics.empty()) {
    throw_invalid("assign_words: empty linked topic set");
  }
  std::vector<int32_t> out;
  out.reserve(doc.entries.size());
  for (const auto& [word, count] : doc.entries) {
    int32_t best_topic = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int32_t t : linked_topics) {
      const double s = scores.at(t, word);
      if (s > best || (s == best && t < best_topic)) {
        best = s;
        best_topic = t;
      }
    }
    out.push_back(best_topic);
  }
  return out;
}

Assignment induced_assignment(const Corpus& corpus, const ScoreMatrix& scores,
                              std::span<const Link> links) {
  const auto by_doc =
      links_by_doc(links, corpus.num_docs(), scores.num_topics());
  Assignment a;
  a.z.resize(corpus.num_docs());
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    if (by_doc[d].empty()) {
      throw_invalid("document " + corpus.doc_ids[d] + " has no link");
    }
    const std::vector<int32_t> per_type =
        assign_words(corpus.docs[d], by_doc[d], scores);
    auto& zd = a.z[d];
    zd.reserve(static_cast<size_t>(corpus.docs[d].length));
    for (size_t j = 0; j < corpus.docs[d].entries.size(); ++j) {
      zd.insert(zd.end(), corpus.docs[d].entries[j].second, per_type[j]);
    }
  }
  return a;
}

double pairwise_sum(std::span<const double> values) {
  const size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(values.subspan(0, half)) +
         pairwise_sum(values.subspan(half));
}

double objective_f(std::span<const Link> links, const Corpus& corpus,
                   const ScoreMatrix& scores) {
  const auto by_doc =
      links_by_doc(links, corpus.num_docs(), scores.num_topics());
  std::vector<double> doc_totals(corpus.num_docs());
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    if (by_doc[d].empty()) {
      throw_invalid("objective_f: document " + corpus.doc_ids[d] +
                    " has no link");
    }
    double total = 0.0;
    for (const auto& [word, count] : corpus.docs[d].entries) {
      double best = -std::numeric_limits<double>::infinity();
      for (int32_t t : by_doc[d]) best = std::max(best, scores.at(t, word));
      total += static_cast<double>(count) * best;
    }
    doc_totals[d] = total;
  }
  return pairwise_sum(doc_totals);
}

namespace {

// Count-weighted best value of one word under a linked set, clamped at the
// placeholder: max(count*log_p, max_t count*score(t, w)). All memoized paths
// reproduce exactly these doubles.
inline double weighted_best(const ScoreMatrix& scores,
                            std::span<const int32_t> linked, int32_t word,
                            double count, double log_p) {
  double best = count * log_p;
  for (int32_t t : linked) {
    best = std::max(best, count * scores.at(t, word));
  }
  return best;
}

}  // namespace

double objective_fdot(std::span<const Link> links, const Corpus& corpus,
                      const ScoreMatrix& scores,
                      const PlaceholderConfig& placeholder) {
  placeholder.check_against(scores);
  const auto by_doc =
      links_by_doc(links, corpus.num_docs(), scores.num_topics());
  std::vector<double> doc_totals(corpus.num_docs());
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    double total = 0.0;
    for (const auto& [word, count] : corpus.docs[d].entries) {
      const double c = static_cast<double>(count);
      total += weighted_best(scores, by_doc[d], word, c, placeholder.log_p) -
               c * placeholder.log_p;
    }
    doc_totals[d] = total;
  }
  return pairwise_sum(doc_totals);
}

double marginal_value_naive(std::span<const Link> links, const Link& link,
                            const Corpus& corpus, const ScoreMatrix& scores,
                            const PlaceholderConfig& placeholder) {
  placeholder.check_against(scores);
  if (link.doc < 0 || link.doc >= corpus.num_docs() || link.topic < 0 ||
      link.topic >= scores.num_topics()) {
    throw_invalid("link index out of range");
  }
  const auto by_doc =
      links_by_doc(links, corpus.num_docs(), scores.num_topics());
  const auto& linked = by_doc[link.doc];
  if (std::find(linked.begin(), linked.end(), link.topic) != linked.end()) {
    throw_invalid("marginal of a link already in the solution");
  }

  // Two full evaluations with term-aligned subtraction: for every (doc, word)
  // the before/after best values are computed from scratch and subtracted
  // per-term, so documents untouched by the link contribute exact zeros.
  double acc = 0.0;
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    const bool touched = d == link.doc;
    for (const auto& [word, count] : corpus.docs[d].entries) {
      const double c = static_cast<double>(count);
      const double before =
          weighted_best(scores, by_doc[d], word, c, placeholder.log_p);
      double after = before;
      if (touched) {
        after = std::max(after, c * scores.at(link.topic, word));
      }
      const double gain = after - before;
      if (gain > 0.0) acc += gain;
    }
  }
  return acc;
}

double log_likelihood_term(const Assignment& assignment, const Corpus& corpus,
                           const TopicMatrix& topics) {
  if (static_cast<int32_t>(assignment.z.size()) != corpus.num_docs()) {
    throw_invalid("assignment does not cover the corpus");
  }
  std::vector<double> doc_totals(corpus.num_docs());
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    const DocRow& doc = corpus.docs[d];
    const auto& zd = assignment.z[d];
    if (static_cast<int64_t>(zd.size()) != doc.length) {
      throw_invalid("assignment length mismatch for document " +
                    corpus.doc_ids[d]);
    }
    double total = 0.0;
    size_t pos = 0;
    for (const auto& [word, count] : doc.entries) {
      for (int32_t k = 0; k < count; ++k, ++pos) {
        const int32_t t = zd[pos];
        if (t < 0 || t >= topics.num_topics()) {
          throw_invalid("assignment topic index out of range");
        }
        total += topics.row(t)[word];
      }
    }
    doc_totals[d] = total;
  }
  return pairwise_sum(doc_totals);
}

double log_posterior_full(const Assignment& assignment, const Corpus& corpus,
                          const TopicMatrix& topics,
                          std::span<const double> alpha) {
  const int32_t k = topics.num_topics();
  if (static_cast<int32_t>(alpha.size()) != k) {
    throw_invalid("alpha must have one entry per candidate topic");
  }
  double alpha_sum = 0.0;
  double lgamma_alpha_sum_terms = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0)) throw_invalid("alpha entries must be positive");
    alpha_sum += a;
    lgamma_alpha_sum_terms += std::lgamma(a);
  }
  const double lgamma_alpha_sum = std::lgamma(alpha_sum);

  if (static_cast<int32_t>(assignment.z.size()) != corpus.num_docs()) {
    throw_invalid("assignment does not cover the corpus");
  }
  std::vector<double> doc_totals(corpus.num_docs());
  std::vector<int64_t> topic_counts(k);
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    const DocRow& doc = corpus.docs[d];
    const auto& zd = assignment.z[d];
    if (static_cast<int64_t>(zd.size()) != doc.length) {
      throw_invalid("assignment length mismatch for document " +
                    corpus.doc_ids[d]);
    }
    std::fill(topic_counts.begin(), topic_counts.end(), 0);
    double likelihood = 0.0;
    size_t pos = 0;
    for (const auto& [word, count] : doc.entries) {
      for (int32_t c = 0; c < count; ++c, ++pos) {
        const int32_t t = zd[pos];
        if (t < 0 || t >= k) {
          throw_invalid("assignment topic index out of range");
        }
        likelihood += topics.row(t)[word];
        ++topic_counts[t];
      }
    }
    double sparsity = 0.0;
    for (int32_t t = 0; t < k; ++t) {
      sparsity += std::lgamma(static_cast<double>(topic_counts[t]) + alpha[t]);
    }
    doc_totals[d] = likelihood + sparsity + lgamma_alpha_sum -
                    std::lgamma(alpha_sum + static_cast<double>(doc.length)) -
                    lgamma_alpha_sum_terms;
  }
  return pairwise_sum(doc_totals);
}

ExpectedTopics expected_topics_per_doc(std::span<const int64_t> doc_lengths,
                                       int64_t num_topics) {
  if (num_topics < 1) throw_invalid("num_topics must be >= 1");
  if (doc_lengths.empty()) throw_invalid("doc_lengths must be non-empty");
  const double K = static_cast<double>(num_topics);
  double exact = 0.0;
  double approx = 0.0;
  for (int64_t len : doc_lengths) {
    if (len < 1) throw_invalid("doc lengths must be >= 1");
    const double l = static_cast<double>(len);
    exact += K * (1.0 - std::pow((K - 1.0) / K, l));
    approx += K * (1.0 - std::exp(-l / K));
  }
  const double n = static_cast<double>(doc_lengths.size());
  return ExpectedTopics{exact / n, approx / n};
}

}  // namespace elda
