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

#include "elda/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "elda/error.hpp"

namespace elda {

namespace {

bool is_token_char(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool has_whitespace_or_control(const std::string& s) {
  for (unsigned char c : s) {
    if (c <= ' ') return true;
  }
  return false;
}

void check_identifier(const std::string& s, const char* what) {
  if (s.empty() || has_whitespace_or_control(s)) {
    throw_format(std::string(what) + " must be non-empty and free of " +
                 "whitespace/control characters: \"" + s + "\"");
  }
}

}  // namespace

int32_t DocRow::count_of(int32_t word) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), word,
      [](const std::pair<int32_t, int32_t>& e, int32_t w) { return e.first < w; });
  if (it != entries.end() && it->first == word) return it->second;
  return 0;
}

int64_t Corpus::total_tokens() const {
  int64_t n = 0;
  for (const auto& d : docs) n += d.length;
  return n;
}

void Corpus::validate() const {
  if (docs.size() != doc_ids.size()) {
    throw Error(ErrorCode::kInternal, "corpus: docs/doc_ids size mismatch");
  }
  const int32_t v = vocab_size();
  for (size_t d = 0; d < docs.size(); ++d) {
    const DocRow& row = docs[d];
    if (row.entries.empty()) {
      throw Error(ErrorCode::kInternal,
                  "corpus: document " + doc_ids[d] + " has no entries");
    }
    int64_t total = 0;
    int32_t prev = -1;
    for (const auto& [word, count] : row.entries) {
      if (word < 0 || word >= v) {
        throw Error(ErrorCode::kInternal, "corpus: word id out of range");
      }
      if (word <= prev) {
        throw Error(ErrorCode::kInternal, "corpus: entries not sorted/unique");
      }
      if (count <= 0) {
        throw Error(ErrorCode::kInternal, "corpus: non-positive count");
      }
      prev = word;
      total += count;
    }
    if (total != row.length) {
      throw Error(ErrorCode::kInternal, "corpus: length != sum of counts");
    }
  }
}

std::vector<std::string> tokenize(const std::string& text, bool lowercase) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (is_token_char(c)) {
      if (lowercase && c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
      cur.push_back(static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::unordered_set<std::string> read_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open stopword file: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

Corpus ingest(const std::vector<RawDoc>& raw_docs, const TokenizerConfig& cfg,
              IngestStats* stats) {
  if (cfg.min_doc_freq < 1) throw_invalid("min_doc_freq must be >= 1");
  if (!(cfg.max_doc_freq_fraction > 0.0) || cfg.max_doc_freq_fraction > 1.0) {
    throw_invalid("max_doc_freq_fraction must be in (0, 1]");
  }

  std::unordered_set<std::string> stopwords;
  if (cfg.stopword_file) stopwords = read_stopwords(*cfg.stopword_file);

  IngestStats local;
  IngestStats& st = stats ? *stats : local;
  st = IngestStats{};
  st.docs_in = static_cast<int64_t>(raw_docs.size());

  // Tokenize and stopword-filter every document, preserving token order for
  // first-occurrence vocabulary assignment later.
  struct TokDoc {
    const RawDoc* src;
    std::vector<std::string> tokens;
  };
  std::vector<TokDoc> tokenized;
  tokenized.reserve(raw_docs.size());
  std::unordered_set<std::string> seen_ids;
  for (const RawDoc& raw : raw_docs) {
    check_identifier(raw.id, "document id");
    if (!seen_ids.insert(raw.id).second) {
      throw_format("duplicate document id: \"" + raw.id + "\"");
    }
    std::vector<std::string> toks =
        raw.pretokenized ? raw.tokens : tokenize(raw.text, cfg.lowercase);
    if (raw.pretokenized) {
      for (const std::string& t : toks) check_identifier(t, "token");
    }
    if (!stopwords.empty()) {
      std::erase_if(toks, [&](const std::string& t) { return stopwords.count(t) > 0; });
    }
    if (toks.empty()) {
      st.dropped_doc_ids.push_back(raw.id);
      continue;
    }
    tokenized.push_back(TokDoc{&raw, std::move(toks)});
  }

  // Document frequency over the surviving documents.
  std::unordered_map<std::string, int32_t> df;
  for (const TokDoc& td : tokenized) {
    std::unordered_set<std::string> uniq(td.tokens.begin(), td.tokens.end());
    for (const std::string& t : uniq) ++df[t];
  }
  const double max_df =
      cfg.max_doc_freq_fraction * static_cast<double>(tokenized.size());
  auto keep_word = [&](const std::string& t) {
    const int32_t f = df.at(t);
    return f >= cfg.min_doc_freq && static_cast<double>(f) <= max_df;
  };
  for (const auto& [word, f] : df) {
    if (!keep_word(word)) ++st.words_removed_by_freq;
  }

  Corpus corpus;
  std::unordered_map<std::string, int32_t> word_id;
  for (const TokDoc& td : tokenized) {
    std::map<int32_t, int32_t> counts;
    for (const std::string& t : td.tokens) {
      if (!keep_word(t)) continue;
      auto [it, inserted] = word_id.try_emplace(
          t, static_cast<int32_t>(corpus.vocab.size()));
      if (inserted) corpus.vocab.push_back(t);
      ++counts[it->second];
    }
    if (counts.empty()) {
      st.dropped_doc_ids.push_back(td.src->id);
      continue;
    }
    DocRow row;
    row.entries.assign(counts.begin(), counts.end());
    for (const auto& [w, c] : row.entries) row.length += c;
    st.tokens_kept += row.length;
    corpus.docs.push_back(std::move(row));
    corpus.doc_ids.push_back(td.src->id);
  }
  st.docs_kept = corpus.num_docs();

  if (corpus.docs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus,
                "empty corpus: no document survived tokenization/filtering");
  }
  corpus.validate();
  return corpus;
}

std::vector<RawDoc> read_raw_docs_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open input file: " + path);
  std::vector<RawDoc> docs;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw_format("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string()) {
      throw_format("line " + std::to_string(lineno) +
                   ": record must be an object with a string \"id\"");
    }
    RawDoc doc;
    doc.id = rec["id"].get<std::string>();
    if (rec.contains("tokens")) {
      if (!rec["tokens"].is_array()) {
        throw_format("line " + std::to_string(lineno) + ": \"tokens\" must be an array");
      }
      for (const auto& t : rec["tokens"]) {
        if (!t.is_string()) {
          throw_format("line " + std::to_string(lineno) + ": tokens must be strings");
        }
        doc.tokens.push_back(t.get<std::string>());
      }
      doc.pretokenized = true;
    } else if (rec.contains("text") && rec["text"].is_string()) {
      doc.text = rec["text"].get<std::string>();
    } else {
      throw_format("line " + std::to_string(lineno) +
                   ": record needs a \"text\" string or \"tokens\" array");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<int32_t> doc_frequencies(const Corpus& corpus) {
  std::vector<int32_t> freq(corpus.vocab_size(), 0);
  for (const DocRow& doc : corpus.docs) {
    for (const auto& [w, c] : doc.entries) ++freq[w];
  }
  return freq;
}

std::vector<int32_t> co_doc_counts(const Corpus& corpus, int32_t w_star) {
  if (w_star < 0 || w_star >= corpus.vocab_size()) {
    throw_invalid("co_doc_counts: word id out of range");
  }
  std::vector<int32_t> co(corpus.vocab_size(), 0);
  for (const DocRow& doc : corpus.docs) {
    if (!doc.contains(w_star)) continue;
    for (const auto& [v, c] : doc.entries) ++co[v];
  }
  return co;
}

CorpusPostings::CorpusPostings(const Corpus& corpus) : corpus_(&corpus) {
  postings_.resize(corpus.vocab_size());
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    for (const auto& [w, c] : corpus.docs[d].entries) {
      postings_[w].push_back(d);
    }
  }
}

const std::vector<int32_t>& CorpusPostings::docs_with(int32_t word) const {
  if (word < 0 || word >= static_cast<int32_t>(postings_.size())) {
    throw_invalid("postings: word id out of range");
  }
  return postings_[word];
}

std::vector<int32_t> CorpusPostings::co_doc_counts(int32_t w_star) const {
  std::vector<int32_t> co(corpus_->vocab_size(), 0);
  for (int32_t d : docs_with(w_star)) {
    for (const auto& [v, c] : corpus_->docs[d].entries) ++co[v];
  }
  return co;
}

int32_t CorpusPostings::co_doc_count_pair(int32_t a, int32_t b) const {
  const auto& pa = docs_with(a);
  const auto& pb = docs_with(b);
  int32_t n = 0;
  size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pa[i] < pb[j]) {
      ++i;
    } else if (pb[j] < pa[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

void save_corpus(const Corpus& corpus, const std::string& corpus_path,
                 const std::string& vocab_path) {
  {
    std::ofstream out(vocab_path);
    if (!out) throw_io("cannot write vocab file: " + vocab_path);
    for (const std::string& w : corpus.vocab) out << w << '\n';
  }
  std::ofstream out(corpus_path);
  if (!out) throw_io("cannot write corpus file: " + corpus_path);
  out << "ELDA-CORPUS 1 " << corpus.num_docs() << ' ' << corpus.vocab_size()
      << '\n';
  for (int32_t d = 0; d < corpus.num_docs(); ++d) {
    out << corpus.doc_ids[d];
    for (const auto& [w, c] : corpus.docs[d].entries) {
      out << ' ' << w << ':' << c;
    }
    out << '\n';
  }
  if (!out) throw_io("failed writing corpus file: " + corpus_path);
}

std::vector<std::string> load_vocab(const std::string& vocab_path) {
  std::ifstream in(vocab_path);
  if (!in) throw_io("cannot open vocab file: " + vocab_path);
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw_format("vocab file has an empty line: " + vocab_path);
    vocab.push_back(line);
  }
  if (vocab.empty()) throw_format("vocab file is empty: " + vocab_path);
  return vocab;
}

Corpus load_corpus(const std::string& corpus_path,
                   const std::string& vocab_path) {
  Corpus corpus;
  corpus.vocab = load_vocab(vocab_path);

  std::ifstream in(corpus_path);
  if (!in) throw_io("cannot open corpus file: " + corpus_path);
  std::string line;
  if (!std::getline(in, line)) throw_format("corpus file is empty: " + corpus_path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::istringstream header(line);
  std::string magic;
  int version = 0;
  int64_t ndocs = 0, nvocab = 0;
  header >> magic >> version >> ndocs >> nvocab;
  if (magic != "ELDA-CORPUS" || version != 1 || header.fail()) {
    throw_format("bad ELDA-CORPUS header: \"" + line + "\"");
  }
  if (nvocab != corpus.vocab_size()) {
    throw_format("corpus/vocab size mismatch: header says " +
                 std::to_string(nvocab) + ", vocab file has " +
                 std::to_string(corpus.vocab_size()));
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string id;
    ls >> id;
    DocRow row;
    std::string field;
    while (ls >> field) {
      const size_t colon = field.find(':');
      if (colon == std::string::npos) {
        throw_format("bad corpus entry \"" + field + "\" in doc " + id);
      }
      int32_t w = 0, c = 0;
      auto r1 = std::from_chars(field.data(), field.data() + colon, w);
      auto r2 = std::from_chars(field.data() + colon + 1,
                                field.data() + field.size(), c);
      if (r1.ec != std::errc() || r2.ec != std::errc() ||
          r2.ptr != field.data() + field.size()) {
        throw_format("bad corpus entry \"" + field + "\" in doc " + id);
      }
      row.entries.emplace_back(w, c);
      row.length += c;
    }
    if (row.entries.empty()) throw_format("document " + id + " has no entries");
    if (!std::is_sorted(row.entries.begin(), row.entries.end())) {
      std::sort(row.entries.begin(), row.entries.end());
    }
    corpus.docs.push_back(std::move(row));
    corpus.doc_ids.push_back(id);
  }
  if (corpus.num_docs() != ndocs) {
    throw_format("corpus file has " + std::to_string(corpus.num_docs()) +
                 " documents, header says " + std::to_string(ndocs));
  }
  try {
    corpus.validate();
  } catch (const Error& e) {
    throw_format(std::string("corpus file validation failed: ") + e.what());
  }
  return corpus;
}

}  // namespace elda
