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

#ifndef ELDA_IO_HPP_
#define ELDA_IO_HPP_

#include <string>

#include "elda/corpus.hpp"
#include "elda/eval.hpp"
#include "elda/objective.hpp"
#include "elda/oos.hpp"
#include "elda/topics.hpp"

namespace elda {

inline constexpr const char* kEngineVersion = "0.1.0";

// LinkSolution as JSON lines, one step per line in greedy order:
//   {"step": n, "doc": id, "topic": label, "marginal": x, "objective": cum}
void save_solution_jsonl(const LinkSolution& solution, const Corpus& corpus,
                         const TopicMatrix& topics, const std::string& path);
LinkSolution load_solution_jsonl(const std::string& path, const Corpus& corpus,
                                 const TopicMatrix& topics);

// Solver metadata as a single JSON document.
void save_solution_meta(const LinkSolution& solution, const std::string& path);

// Assignment export, one document per line:
//   {"doc": id, "topics": [labels in E_d order],
//    "word_assignments": {"word": label, ...}}
void save_assignment_jsonl(const LinkSolution& solution, const Corpus& corpus,
                           const TopicMatrix& topics,
                           const ScoreMatrix& scores, const std::string& path);

// Per-document (length, link count) table for fitting external kappa_d
// predictors. Tab-separated with a header line.
void save_sparsity_table(const LinkSolution& solution, const Corpus& corpus,
                         const std::string& path);

// Report as the single JSON document described by the eval interface.
std::string report_to_json(const SolutionReport& report);

// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::string& path);

}  // namespace elda

#endif  // ELDA_IO_HPP_
