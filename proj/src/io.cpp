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

#include "elda/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "elda/error.hpp"

namespace elda {

using nlohmann::json;

void save_solution_jsonl(const LinkSolution& solution, const Corpus& corpus,
                         const TopicMatrix& topics, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_io("cannot write solution file: " + path);
  int64_t step = 0;
  for (const LinkStep& s : solution.steps) {
    json rec;
    rec["step"] = ++step;
    rec["doc"] = corpus.doc_ids[s.link.doc];
    rec["topic"] = topics.labels[s.link.topic];
    rec["marginal"] = s.marginal;
    rec["objective"] = s.objective;
    out << rec.dump() << '\n';
  }
  if (!out) throw_io("failed writing solution file: " + path);
}

LinkSolution load_solution_jsonl(const std::string& path, const Corpus& corpus,
                                 const TopicMatrix& topics) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open solution file: " + path);

  std::unordered_map<std::string, int32_t> doc_index;
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    doc_index[corpus.doc_ids[d]] = d;
  }
  std::unordered_map<std::string, int32_t> topic_index;
  for (int32_t t = topics.num_topics() - 1; t >= 0; --t) {
    topic_index[topics.labels[t]] = t;  // first occurrence wins
  }

  LinkSolution solution;
  std::string line;
  int64_t lineno = 0;
  int64_t expected_step = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw_format("solution line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!rec.contains("step") || !rec.contains("doc") ||
        !rec.contains("topic") || !rec.contains("marginal") ||
        !rec.contains("objective")) {
      throw_format("solution line " + std::to_string(lineno) +
                   ": missing fields");
    }
    if (rec["step"].get<int64_t>() != ++expected_step) {
      throw_format("solution line " + std::to_string(lineno) +
                   ": steps out of order");
    }
    const std::string doc_id = rec["doc"].get<std::string>();
    const std::string label = rec["topic"].get<std::string>();
    auto di = doc_index.find(doc_id);
    if (di == doc_index.end()) {
      throw_format("solution references unknown document \"" + doc_id + "\"");
    }
    auto ti = topic_index.find(label);
    if (ti == topic_index.end()) {
      throw_format("solution references unknown topic \"" + label + "\"");
    }
    LinkStep step;
    step.link = Link{ti->second, di->second};
    step.marginal = rec["marginal"].get<double>();
    step.objective = rec["objective"].get<double>();
    solution.steps.push_back(step);
  }
  if (solution.steps.empty()) throw_format("solution file is empty: " + path);
  return solution;
}

void save_solution_meta(const LinkSolution& solution, const std::string& path) {
  json meta;
  meta["algorithm"] = solution.meta.algorithm;
  meta["kappa"] = solution.meta.kappa;
  meta["seed"] = solution.meta.seed;
  meta["queries"] = solution.meta.queries;
  meta["adaptive_rounds"] = solution.meta.adaptive_rounds;
  if (!std::isnan(solution.meta.v_star)) {
    meta["v_star"] = solution.meta.v_star;
    meta["certified"] = solution.meta.certified;
  }
  meta["truncated"] = solution.meta.truncated;
  meta["links"] = solution.steps.size();
  meta["objective"] = solution.objective_value();
  std::ofstream out(path);
  if (!out) throw_io("cannot write solution metadata: " + path);
  out << meta.dump(2) << '\n';
}

void save_assignment_jsonl(const LinkSolution& solution, const Corpus& corpus,
                           const TopicMatrix& topics,
                           const ScoreMatrix& scores, const std::string& path) {
  std::vector<std::vector<int32_t>> linked(corpus.num_docs());
  for (const LinkStep& s : solution.steps) {
    linked[s.link.doc].push_back(s.link.topic);
  }
  std::ofstream out(path);
  if (!out) throw_io("cannot write assignment file: " + path);
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    if (linked[d].empty()) {
      throw_invalid("document " + corpus.doc_ids[d] +
                    " has no link; cannot export an assignment");
    }
    const std::vector<int32_t> per_type =
        assign_words(corpus.docs[d], linked[d], scores);
    json rec;
    rec["doc"] = corpus.doc_ids[d];
    json topic_list = json::array();
    for (int32_t t : linked[d]) topic_list.push_back(topics.labels[t]);
    rec["topics"] = topic_list;
    json words = json::object();
    for (size_t j = 0; j < corpus.docs[d].entries.size(); ++j) {
      words[corpus.vocab[corpus.docs[d].entries[j].first]] =
          topics.labels[per_type[j]];
    }
    rec["word_assignments"] = words;
    out << rec.dump() << '\n';
  }
  if (!out) throw_io("failed writing assignment file: " + path);
}

void save_sparsity_table(const LinkSolution& solution, const Corpus& corpus,
                         const std::string& path) {
  std::vector<int64_t> link_count(corpus.num_docs(), 0);
  for (const LinkStep& s : solution.steps) ++link_count[s.link.doc];
  std::ofstream out(path);
  if (!out) throw_io("cannot write sparsity table: " + path);
  out << "doc\tlength\tlinks\n";
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    out << corpus.doc_ids[d] << '\t' << corpus.docs[d].length << '\t'
        << link_count[d] << '\n';
  }
}

std::string report_to_json(const SolutionReport& report) {
  json j;
  j["objective"] = report.objective;
  j["mean_links_per_doc"] = report.mean_links_per_doc;
  json coherence = json::object();
  for (const auto& [h, stats] : report.coherence) {
    json entry;
    entry["mean"] = stats.mean;
    entry["min"] = stats.min;
    entry["max"] = stats.max;
    coherence[std::to_string(h)] = entry;
  }
  j["coherence"] = coherence;
  j["trace"] = report.trace;
  json usage = json::object();
  for (const auto& [label, count] : report.topic_usage) usage[label] = count;
  j["topic_usage"] = usage;
  return j.dump(2);
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open file for digest: " + path);
  uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016" PRIx64, hash);
  return std::string(hex);
}

}  // namespace elda
