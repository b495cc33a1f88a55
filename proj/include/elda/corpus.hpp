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

#ifndef ELDA_CORPUS_HPP_
#define ELDA_CORPUS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace elda {

// One document as sparse word-type counts. Entries are sorted by word id and
// counts are strictly positive; length is the total token count.
struct DocRow {
  std::vector<std::pair<int32_t, int32_t>> entries;  // (word id, count)
  int64_t length = 0;

  int32_t count_of(int32_t word) const;
  bool contains(int32_t word) const { return count_of(word) > 0; }
};

// Immutable bag-of-words corpus. Word ids index `vocab`; documents keep their
// external ids for exports. Safe to share across threads once built.
struct Corpus {
  std::vector<std::string> vocab;
  std::vector<DocRow> docs;
  std::vector<std::string> doc_ids;

  int32_t vocab_size() const { return static_cast<int32_t>(vocab.size()); }
  int32_t num_docs() const { return static_cast<int32_t>(docs.size()); }
  int64_t total_tokens() const;

  // Throws if any structural invariant is violated.
  void validate() const;
};

struct TokenizerConfig {
  bool lowercase = true;
  std::optional<std::string> stopword_file;  // one token per line
  int32_t min_doc_freq = 1;
  double max_doc_freq_fraction = 1.0;
};

struct IngestStats {
  int64_t docs_in = 0;
  int64_t docs_kept = 0;
  std::vector<std::string> dropped_doc_ids;  // emptied by filtering
  int64_t tokens_kept = 0;
  int64_t words_removed_by_freq = 0;
};

// A raw input document: external id plus either untokenized text or a
// pre-tokenized word list (which bypasses the tokenizer but not filtering).
struct RawDoc {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  bool pretokenized = false;
};

// Splits on non-alphanumeric ASCII runs; bytes >= 0x80 are kept so UTF-8
// words survive as byte runs. Lowercasing is ASCII-only.
std::vector<std::string> tokenize(const std::string& text, bool lowercase);

// Builds a corpus from raw documents: tokenize, drop stopwords, remove words
// outside the document-frequency bounds, drop emptied documents (reported in
// stats), and assign word ids in first-occurrence order.
Corpus ingest(const std::vector<RawDoc>& raw_docs, const TokenizerConfig& cfg,
              IngestStats* stats = nullptr);

// Parses a JSON-lines file of {"id", "text"|"tokens"} records.
std::vector<RawDoc> read_raw_docs_jsonl(const std::string& path);

// |D_w| for every word id: the number of documents containing the word.
std::vector<int32_t> doc_frequencies(const Corpus& corpus);

// |D_{w*,v}| for every v: documents containing both w_star and v. The entry
// at w_star equals |D_{w*}|.
std::vector<int32_t> co_doc_counts(const Corpus& corpus, int32_t w_star);

// Word -> sorted doc-index lists, for repeated co-count queries.
class CorpusPostings {
 public:
  explicit CorpusPostings(const Corpus& corpus);

  const std::vector<int32_t>& docs_with(int32_t word) const;
  // Same result as co_doc_counts but O(sum of doc sizes over docs_with(w)).
  std::vector<int32_t> co_doc_counts(int32_t w_star) const;
  int32_t co_doc_count_pair(int32_t a, int32_t b) const;

 private:
  const Corpus* corpus_;
  std::vector<std::vector<int32_t>> postings_;
};

std::unordered_set<std::string> read_stopwords(const std::string& path);

// ELDA-CORPUS text format (header + one "<doc_id> <word>:<count>..." line
// per document) plus a vocab file with one token per line (line = word id).
void save_corpus(const Corpus& corpus, const std::string& corpus_path,
                 const std::string& vocab_path);
Corpus load_corpus(const std::string& corpus_path,
                   const std::string& vocab_path);
std::vector<std::string> load_vocab(const std::string& vocab_path);

}  // namespace elda

#endif  // ELDA_CORPUS_HPP_
