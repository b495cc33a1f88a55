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

#include "elda/topics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "elda/error.hpp"
#include "elda/parallel.hpp"

namespace elda {

namespace {

constexpr double kImportFloorLogProb = -27.631021115928547;  // log(1e-12)

// log(sum_v exp(x_v)) with the usual max shift.
double log_sum_exp(std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) m = std::max(m, v);
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, const std::string& context) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    // from_chars does not accept "inf"/"nan" spellings uniformly; be strict.
    throw_format("bad float \"" + std::string(field) + "\" in " + context);
  }
  return v;
}

}  // namespace

void TopicMatrix::validate(double tol) const {
  if (num_topics() < 1) throw_invalid("topic matrix must have at least one row");
  if (static_cast<size_t>(num_topics()) * vocab_size != log_probs.size()) {
    throw Error(ErrorCode::kInternal, "topic matrix shape mismatch");
  }
  if (has_popularity() &&
      popularity_logweights.size() != labels.size()) {
    throw Error(ErrorCode::kInternal, "popularity weight count mismatch");
  }
  for (int32_t t = 0; t < num_topics(); ++t) {
    double sum = 0.0;
    for (double lp : row(t)) {
      if (!std::isfinite(lp)) {
        throw_format("topic row " + std::to_string(t) +
                     " has a non-finite log probability");
      }
      sum += std::exp(lp);
    }
    if (std::abs(sum - 1.0) > tol) {
      throw_format("topic row " + std::to_string(t) +
                   " is not normalized: probabilities sum to " +
                   format_double(sum));
    }
  }
}

double GeneratorConfig::effective_epsilon() const {
  if (epsilon > 0.0) return epsilon;
  return mode == GeneratorMode::kCooccurrence ? 1e-12 : 0.01;
}

GeneratedTopic gen_topic(const Corpus& corpus, int32_t w_star,
                         const GeneratorConfig& cfg,
                         const CorpusPostings* postings) {
  if (w_star < 0 || w_star >= corpus.vocab_size()) {
    throw_invalid("gen_topic: keyword id out of range");
  }
  const double eps = cfg.effective_epsilon();
  const std::vector<int32_t> co = postings ? postings->co_doc_counts(w_star)
                                           : co_doc_counts(corpus, w_star);
  const int32_t df = co[w_star];  // |D_{w*}|; co with itself is containment
  if (df < 1) throw_invalid("gen_topic: keyword occurs in no document");

  const int32_t v_size = corpus.vocab_size();
  GeneratedTopic topic;
  topic.log_probs.resize(v_size);
  std::vector<double>& lp = topic.log_probs;

  switch (cfg.mode) {
    case GeneratorMode::kUMass: {
      // phi[v] = s(w*,v) / sum s; in log space: log s - log(sum s).
      double total = 0.0;
      for (int32_t v = 0; v < v_size; ++v) {
        total += (co[v] + eps) / df;
      }
      const double log_total = std::log(total);
      for (int32_t v = 0; v < v_size; ++v) {
        lp[v] = std::log((co[v] + eps) / df) - log_total;
      }
      break;
    }
    case GeneratorMode::kExpUMass: {
      // Unnormalized log weight is s itself; normalize with logsumexp.
      for (int32_t v = 0; v < v_size; ++v) lp[v] = (co[v] + eps) / df;
      const double lse = log_sum_exp(lp);
      for (double& x : lp) x -= lse;
      break;
    }
    case GeneratorMode::kCooccurrence: {
      // exp(|D_{w*,v}| + eps) overflows for popular words; stay in log space.
      for (int32_t v = 0; v < v_size; ++v) lp[v] = co[v] + eps;
      const double lse = log_sum_exp(lp);
      for (double& x : lp) x -= lse;
      topic.popularity_logweight = lse;
      break;
    }
  }
  return topic;
}

TopicMatrix build_candidate_set(const Corpus& corpus,
                                const GeneratorConfig& cfg) {
  std::vector<int32_t> keywords = cfg.keywords;
  if (keywords.empty()) {
    keywords.resize(corpus.vocab_size());
    for (int32_t v = 0; v < corpus.vocab_size(); ++v) keywords[v] = v;
  } else {
    std::sort(keywords.begin(), keywords.end());
    keywords.erase(std::unique(keywords.begin(), keywords.end()),
                   keywords.end());
    for (int32_t k : keywords) {
      if (k < 0 || k >= corpus.vocab_size()) {
        throw_invalid("build_candidate_set: keyword id out of range");
      }
    }
  }
  if (keywords.empty()) throw_invalid("build_candidate_set: empty keyword set");

  const CorpusPostings postings(corpus);
  TopicMatrix topics;
  topics.vocab_size = corpus.vocab_size();
  topics.labels.resize(keywords.size());
  topics.log_probs.resize(keywords.size() *
                          static_cast<size_t>(corpus.vocab_size()));
  const bool with_popularity = cfg.mode == GeneratorMode::kCooccurrence;
  if (with_popularity) topics.popularity_logweights.resize(keywords.size());

  // Rows are independent; each task writes only its own slot, so the result
  // is identical for any worker count.
  parallel_for(0, static_cast<int64_t>(keywords.size()), [&](int64_t i) {
    const int32_t w = keywords[static_cast<size_t>(i)];
    GeneratedTopic t = gen_topic(corpus, w, cfg, &postings);
    topics.labels[i] = corpus.vocab[w];
    std::copy(t.log_probs.begin(), t.log_probs.end(),
              topics.log_probs.begin() +
                  static_cast<size_t>(i) * corpus.vocab_size());
    if (with_popularity) {
      topics.popularity_logweights[i] = t.popularity_logweight;
    }
  });
  return topics;
}

void export_topics(const TopicMatrix& topics, const std::string& path,
                   bool write_weight_sidecar) {
  std::ofstream out(path);
  if (!out) throw_io("cannot write topics file: " + path);
  out << "ELDA-TOPICS 1 " << topics.num_topics() << ' ' << topics.vocab_size
      << '\n';
  std::string line;
  for (int32_t t = 0; t < topics.num_topics(); ++t) {
    line = topics.labels[t];
    for (double lp : topics.row(t)) {
      line += '\t';
      line += format_double(lp);
    }
    out << line << '\n';
  }
  if (!out) throw_io("failed writing topics file: " + path);
  if (write_weight_sidecar && topics.has_popularity()) {
    std::ofstream w(path + ".weights");
    if (!w) throw_io("cannot write weights sidecar: " + path + ".weights");
    w << "ELDA-WEIGHTS 1 " << topics.num_topics() << '\n';
    for (double x : topics.popularity_logweights) {
      w << format_double(x) << '\n';
    }
  }
}

TopicMatrix import_topics(const std::string& path, int32_t expected_vocab) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open topics file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw_format("topics file is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::istringstream header(line);
  std::string magic;
  int version = 0;
  int64_t ntopics = 0, nvocab = 0;
  header >> magic >> version >> ntopics >> nvocab;
  if (magic != "ELDA-TOPICS" || version != 1 || header.fail() || ntopics < 1 ||
      nvocab < 1) {
    throw_format("bad ELDA-TOPICS header: \"" + line + "\"");
  }
  if (expected_vocab >= 0 && nvocab != expected_vocab) {
    throw_format("topics vocabulary size " + std::to_string(nvocab) +
                 " does not match the supplied vocabulary (" +
                 std::to_string(expected_vocab) + ")");
  }

  TopicMatrix topics;
  topics.vocab_size = static_cast<int32_t>(nvocab);
  topics.log_probs.reserve(static_cast<size_t>(ntopics) * nvocab);
  int32_t row_index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t pos = line.find('\t');
    if (pos == std::string::npos) {
      throw_format("topics row " + std::to_string(row_index) +
                   " has no tab-separated values");
    }
    topics.labels.push_back(line.substr(0, pos));
    std::vector<double> row;
    row.reserve(nvocab);
    size_t start = pos + 1;
    const std::string ctx = "topics row " + std::to_string(row_index);
    while (start <= line.size()) {
      size_t end = line.find('\t', start);
      if (end == std::string::npos) end = line.size();
      std::string_view field(line.data() + start, end - start);
      if (field == "-inf" || field == "-Inf" || field == "-INF") {
        row.push_back(-std::numeric_limits<double>::infinity());
      } else {
        row.push_back(parse_double(field, ctx));
      }
      start = end + 1;
    }
    if (static_cast<int64_t>(row.size()) != nvocab) {
      throw_format(ctx + " has " + std::to_string(row.size()) +
                   " values, expected " + std::to_string(nvocab));
    }

    // Validate normalization with -inf treated as probability zero, then
    // floor the zero entries and renormalize that row.
    double sum = 0.0;
    bool needs_floor = false;
    for (double lp : row) {
      if (std::isnan(lp) || lp > 0.5) {
        throw_format(ctx + " has an invalid log probability");
      }
      const double p = std::exp(lp);
      sum += p;
      if (p == 0.0 || lp <= kImportFloorLogProb) needs_floor = true;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw_format(ctx + " is not normalized: probabilities sum to " +
                   format_double(sum));
    }
    if (needs_floor) {
      for (double& lp : row) {
        if (std::exp(lp) == 0.0 || lp <= kImportFloorLogProb) {
          lp = kImportFloorLogProb;
        }
      }
      const double lse = log_sum_exp(row);
      for (double& lp : row) lp -= lse;
    }
    topics.log_probs.insert(topics.log_probs.end(), row.begin(), row.end());
    ++row_index;
  }
  if (row_index != ntopics) {
    throw_format("topics file has " + std::to_string(row_index) +
                 " rows, header says " + std::to_string(ntopics));
  }

  std::ifstream w(path + ".weights");
  if (w) {
    if (!std::getline(w, line)) throw_format("weights sidecar is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream wh(line);
    int64_t count = 0;
    wh >> magic >> version >> count;
    if (magic != "ELDA-WEIGHTS" || version != 1 || wh.fail() ||
        count != ntopics) {
      throw_format("bad ELDA-WEIGHTS header: \"" + line + "\"");
    }
    while (std::getline(w, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      topics.popularity_logweights.push_back(
          parse_double(line, "weights sidecar"));
    }
    if (static_cast<int64_t>(topics.popularity_logweights.size()) != ntopics) {
      throw_format("weights sidecar row count mismatch");
    }
  }

  topics.validate();
  return topics;
}

std::vector<int32_t> resolve_keywords(const Corpus& corpus,
                                      const std::vector<std::string>& words) {
  std::unordered_map<std::string, int32_t> index;
  for (int32_t v = 0; v < corpus.vocab_size(); ++v) index[corpus.vocab[v]] = v;
  std::vector<int32_t> ids;
  ids.reserve(words.size());
  for (const std::string& w : words) {
    auto it = index.find(w);
    if (it == index.end()) {
      throw_invalid("keyword \"" + w + "\" is not in the vocabulary");
    }
    ids.push_back(it->second);
  }
  return ids;
}

}  // namespace elda
