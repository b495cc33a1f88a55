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

#include "elda.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include <json.hpp>

#include "elda/corpus.hpp"
#include "elda/error.hpp"
#include "elda/eval.hpp"
#include "elda/fast_parallel.hpp"
#include "elda/greedy.hpp"
#include "elda/io.hpp"
#include "elda/ltlg.hpp"
#include "elda/objective.hpp"
#include "elda/oos.hpp"
#include "elda/topics.hpp"

struct elda_corpus {
  elda::Corpus corpus;
};
struct elda_topics {
  elda::TopicMatrix topics;
};
struct elda_solution {
  elda::LinkSolution solution;
};

namespace {

thread_local std::string g_last_error;

elda_status status_of(const elda::Error& e) {
  switch (e.code()) {
    case elda::ErrorCode::kInvalidArgument:
      return ELDA_ERR_INVALID_ARGUMENT;
    case elda::ErrorCode::kFormat:
      return ELDA_ERR_FORMAT;
    case elda::ErrorCode::kEmptyCorpus:
      return ELDA_ERR_EMPTY_CORPUS;
    case elda::ErrorCode::kIo:
      return ELDA_ERR_IO;
    case elda::ErrorCode::kInternal:
      return ELDA_ERR_INTERNAL;
  }
  return ELDA_ERR_INTERNAL;
}

template <typename Fn>
elda_status guarded(Fn&& fn) {
  try {
    fn();
    return ELDA_OK;
  } catch (const elda::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ELDA_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ELDA_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Popularity resolution shared by fit / eval / infer.
elda::ScoreMatrix make_scores(const elda::TopicMatrix& topics,
                              elda_popularity popularity) {
  switch (popularity) {
    case ELDA_POPULARITY_UNIFORM:
      return elda::ScoreMatrix::from_topics(topics, false);
    case ELDA_POPULARITY_WEIGHTED:
      return elda::ScoreMatrix::from_topics(topics, true);
    case ELDA_POPULARITY_AUTO:
    default:
      return elda::ScoreMatrix::from_topics(topics, topics.has_popularity());
  }
}

}  // namespace

extern "C" {

const char* elda_version(void) { return elda::kEngineVersion; }

const char* elda_last_error_message(void) { return g_last_error.c_str(); }

elda_tokenizer_options elda_tokenizer_options_default(void) {
  elda_tokenizer_options o;
  o.lowercase = 1;
  o.stopword_file = nullptr;
  o.min_doc_freq = 1;
  o.max_doc_freq_fraction = 1.0;
  return o;
}

elda_generator_options elda_generator_options_default(void) {
  elda_generator_options o;
  o.mode = ELDA_GEN_EXP_UMASS;
  o.epsilon = 0.0;
  o.keyword_file = nullptr;
  return o;
}

elda_fit_options elda_fit_options_default(void) {
  elda_fit_options o;
  o.algorithm = ELDA_ALG_FASTGREEDY;
  o.kappa = 1.0;
  o.seed = 0;
  o.epsilon = 0.0;
  o.delta = 0.0;
  o.sample_m = 0;
  o.placeholder_log_p = 0.0;
  o.popularity = ELDA_POPULARITY_AUTO;
  o.lazy_word_skip = 1;
  return o;
}

elda_status elda_corpus_ingest_file(const char* jsonl_path,
                                    const elda_tokenizer_options* options,
                                    elda_corpus** out,
                                    elda_ingest_stats* stats) {
  return guarded([&] {
    if (!jsonl_path || !out) elda::throw_invalid("null argument");
    elda_tokenizer_options defaults = elda_tokenizer_options_default();
    if (!options) options = &defaults;
    elda::TokenizerConfig cfg;
    cfg.lowercase = options->lowercase != 0;
    if (options->stopword_file) cfg.stopword_file = options->stopword_file;
    cfg.min_doc_freq = options->min_doc_freq;
    cfg.max_doc_freq_fraction = options->max_doc_freq_fraction;
    elda::IngestStats st;
    auto raw = elda::read_raw_docs_jsonl(jsonl_path);
    auto corpus = elda::ingest(raw, cfg, &st);
    if (stats) {
      stats->docs_in = st.docs_in;
      stats->docs_kept = st.docs_kept;
      stats->docs_dropped = static_cast<int64_t>(st.dropped_doc_ids.size());
      stats->tokens_kept = st.tokens_kept;
      stats->words_removed_by_freq = st.words_removed_by_freq;
    }
    *out = new elda_corpus{std::move(corpus)};
  });
}

elda_status elda_corpus_load(const char* corpus_path, const char* vocab_path,
                             elda_corpus** out) {
  return guarded([&] {
    if (!corpus_path || !vocab_path || !out) elda::throw_invalid("null argument");
    *out = new elda_corpus{elda::load_corpus(corpus_path, vocab_path)};
  });
}

elda_status elda_corpus_save(const elda_corpus* corpus,
                             const char* corpus_path, const char* vocab_path) {
  return guarded([&] {
    if (!corpus || !corpus_path || !vocab_path) elda::throw_invalid("null argument");
    elda::save_corpus(corpus->corpus, corpus_path, vocab_path);
  });
}

int32_t elda_corpus_num_docs(const elda_corpus* corpus) {
  return corpus ? corpus->corpus.num_docs() : 0;
}

int32_t elda_corpus_vocab_size(const elda_corpus* corpus) {
  return corpus ? corpus->corpus.vocab_size() : 0;
}

void elda_corpus_free(elda_corpus* corpus) { delete corpus; }

elda_status elda_topics_generate(const elda_corpus* corpus,
                                 const elda_generator_options* options,
                                 elda_topics** out) {
  return guarded([&] {
    if (!corpus || !out) elda::throw_invalid("null argument");
    elda_generator_options defaults = elda_generator_options_default();
    if (!options) options = &defaults;
    elda::GeneratorConfig cfg;
    switch (options->mode) {
      case ELDA_GEN_UMASS:
        cfg.mode = elda::GeneratorMode::kUMass;
        break;
      case ELDA_GEN_EXP_UMASS:
        cfg.mode = elda::GeneratorMode::kExpUMass;
        break;
      case ELDA_GEN_COOCCURRENCE:
        cfg.mode = elda::GeneratorMode::kCooccurrence;
        break;
      default:
        elda::throw_invalid("unknown generator mode");
    }
    cfg.epsilon = options->epsilon;
    if (options->keyword_file) {
      std::ifstream in(options->keyword_file);
      if (!in) elda::throw_io(std::string("cannot open keyword file: ") +
                              options->keyword_file);
      std::vector<std::string> words;
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) words.push_back(line);
      }
      cfg.keywords = elda::resolve_keywords(corpus->corpus, words);
    }
    *out = new elda_topics{elda::build_candidate_set(corpus->corpus, cfg)};
  });
}

elda_status elda_topics_import(const char* path, int32_t expected_vocab,
                               elda_topics** out) {
  return guarded([&] {
    if (!path || !out) elda::throw_invalid("null argument");
    *out = new elda_topics{elda::import_topics(path, expected_vocab)};
  });
}

elda_status elda_topics_export(const elda_topics* topics, const char* path) {
  return guarded([&] {
    if (!topics || !path) elda::throw_invalid("null argument");
    elda::export_topics(topics->topics, path);
  });
}

int32_t elda_topics_count(const elda_topics* topics) {
  return topics ? topics->topics.num_topics() : 0;
}

int32_t elda_topics_vocab_size(const elda_topics* topics) {
  return topics ? topics->topics.vocab_size : 0;
}

int elda_topics_has_popularity(const elda_topics* topics) {
  return topics && topics->topics.has_popularity() ? 1 : 0;
}

void elda_topics_free(elda_topics* topics) { delete topics; }

elda_status elda_fit(const elda_corpus* corpus, const elda_topics* topics,
                     const elda_fit_options* options, elda_solution** out) {
  return guarded([&] {
    if (!corpus || !topics || !out) elda::throw_invalid("null argument");
    elda_fit_options defaults = elda_fit_options_default();
    if (!options) options = &defaults;
    if (topics->topics.vocab_size != corpus->corpus.vocab_size()) {
      elda::throw_invalid("topics and corpus vocabulary sizes differ");
    }
    const elda::ScoreMatrix scores =
        make_scores(topics->topics, options->popularity);
    elda::PlaceholderConfig placeholder;
    if (options->placeholder_log_p != 0.0) {
      placeholder.log_p = options->placeholder_log_p;
    }
    elda::LinkSolution solution;
    switch (options->algorithm) {
      case ELDA_ALG_SIMPLE:
        solution = elda::simple_greedy(corpus->corpus, scores, options->kappa,
                                       placeholder);
        break;
      case ELDA_ALG_FASTGREEDY: {
        elda::SolverConfig cfg;
        cfg.kappa = options->kappa;
        cfg.lazy_word_skip = options->lazy_word_skip != 0;
        solution = elda::fast_greedy(corpus->corpus, scores, cfg, placeholder);
        break;
      }
      case ELDA_ALG_LTLG: {
        elda::LtlgConfig cfg;
        cfg.kappa = options->kappa;
        cfg.epsilon = options->epsilon > 0.0 ? options->epsilon : 0.1;
        cfg.seed = options->seed;
        cfg.lazy_word_skip = options->lazy_word_skip != 0;
        solution = elda::ltlg(corpus->corpus, scores, cfg, placeholder);
        break;
      }
      case ELDA_ALG_FAST: {
        elda::FastConfig cfg;
        cfg.kappa = options->kappa;
        if (options->epsilon > 0.0) cfg.epsilon = options->epsilon;
        if (options->delta > 0.0) cfg.delta = options->delta;
        cfg.seed = options->seed;
        cfg.sample_m = options->sample_m;
        cfg.lazy_word_skip = options->lazy_word_skip != 0;
        solution = elda::fast_full(corpus->corpus, scores, cfg, placeholder);
        break;
      }
      default:
        elda::throw_invalid("unknown algorithm");
    }
    *out = new elda_solution{std::move(solution)};
  });
}

int64_t elda_solution_num_links(const elda_solution* solution) {
  return solution ? static_cast<int64_t>(solution->solution.steps.size()) : 0;
}

elda_status elda_solution_link(const elda_solution* solution, int64_t index,
                               elda_link_info* out) {
  return guarded([&] {
    if (!solution || !out) elda::throw_invalid("null argument");
    if (index < 0 ||
        index >= static_cast<int64_t>(solution->solution.steps.size())) {
      elda::throw_invalid("link index out of range");
    }
    const elda::LinkStep& s = solution->solution.steps[index];
    out->step = index + 1;
    out->doc = s.link.doc;
    out->topic = s.link.topic;
    out->marginal = s.marginal;
    out->objective = s.objective;
  });
}

elda_status elda_solution_prefix(const elda_solution* solution,
                                 int64_t num_links, elda_solution** out) {
  return guarded([&] {
    if (!solution || !out) elda::throw_invalid("null argument");
    if (num_links < 1 ||
        num_links > static_cast<int64_t>(solution->solution.steps.size())) {
      elda::throw_invalid("prefix length out of range");
    }
    elda::LinkSolution prefix;
    prefix.meta = solution->solution.meta;
    prefix.steps.assign(solution->solution.steps.begin(),
                        solution->solution.steps.begin() + num_links);
    *out = new elda_solution{std::move(prefix)};
  });
}

elda_status elda_solution_meta_json(const elda_solution* solution, char** out) {
  return guarded([&] {
    if (!solution || !out) elda::throw_invalid("null argument");
    nlohmann::json meta;
    const elda::SolutionMeta& m = solution->solution.meta;
    meta["algorithm"] = m.algorithm;
    meta["kappa"] = m.kappa;
    meta["seed"] = m.seed;
    meta["queries"] = m.queries;
    meta["adaptive_rounds"] = m.adaptive_rounds;
    if (!std::isnan(m.v_star)) {
      meta["v_star"] = m.v_star;
      meta["certified"] = m.certified;
    }
    meta["truncated"] = m.truncated;
    meta["links"] = solution->solution.steps.size();
    meta["objective"] = solution->solution.objective_value();
    *out = dup_string(meta.dump(2));
  });
}

elda_status elda_solution_save(const elda_solution* solution,
                               const elda_corpus* corpus,
                               const elda_topics* topics,
                               const char* solution_path,
                               const char* meta_path) {
  return guarded([&] {
    if (!solution || !corpus || !topics || !solution_path) {
      elda::throw_invalid("null argument");
    }
    elda::save_solution_jsonl(solution->solution, corpus->corpus,
                              topics->topics, solution_path);
    if (meta_path) elda::save_solution_meta(solution->solution, meta_path);
  });
}

elda_status elda_assignment_save(const elda_solution* solution,
                                 const elda_corpus* corpus,
                                 const elda_topics* topics, const char* path) {
  return guarded([&] {
    if (!solution || !corpus || !topics || !path) {
      elda::throw_invalid("null argument");
    }
    const elda::ScoreMatrix scores =
        make_scores(topics->topics, ELDA_POPULARITY_AUTO);
    elda::save_assignment_jsonl(solution->solution, corpus->corpus,
                                topics->topics, scores, path);
  });
}

elda_status elda_sparsity_table_save(const elda_solution* solution,
                                     const elda_corpus* corpus,
                                     const char* path) {
  return guarded([&] {
    if (!solution || !corpus || !path) elda::throw_invalid("null argument");
    elda::save_sparsity_table(solution->solution, corpus->corpus, path);
  });
}

void elda_solution_free(elda_solution* solution) { delete solution; }

elda_status elda_eval_report(const elda_corpus* corpus,
                             const elda_topics* topics,
                             const elda_solution* solution,
                             const int32_t* h_stars, size_t n_h,
                             double coherence_epsilon,
                             elda_popularity popularity, char** out) {
  return guarded([&] {
    if (!corpus || !topics || !solution || !h_stars || n_h == 0 || !out) {
      elda::throw_invalid("null argument");
    }
    const elda::ScoreMatrix scores = make_scores(topics->topics, popularity);
    const elda::SolutionReport report = elda::solution_report(
        solution->solution, corpus->corpus, topics->topics, scores,
        elda::PlaceholderConfig{}, {h_stars, n_h},
        coherence_epsilon > 0.0 ? coherence_epsilon : 0.01);
    *out = dup_string(elda::report_to_json(report));
  });
}

elda_status elda_solution_load(const char* path, const elda_corpus* corpus,
                               const elda_topics* topics,
                               elda_solution** out) {
  return guarded([&] {
    if (!path || !corpus || !topics || !out) elda::throw_invalid("null argument");
    *out = new elda_solution{
        elda::load_solution_jsonl(path, corpus->corpus, topics->topics)};
  });
}

elda_status elda_oos_infer_file(const elda_topics* topics,
                                const char* vocab_path,
                                const char* input_jsonl,
                                const char* output_jsonl,
                                const elda_oos_options* options,
                                elda_popularity popularity,
                                elda_oos_stats* stats) {
  return guarded([&] {
    if (!topics || !vocab_path || !input_jsonl || !output_jsonl) {
      elda::throw_invalid("null argument");
    }
    const std::vector<std::string> vocab = elda::load_vocab(vocab_path);
    if (static_cast<int32_t>(vocab.size()) != topics->topics.vocab_size) {
      elda::throw_invalid("vocabulary size does not match the topic matrix");
    }
    const bool lowercase = !options || options->lowercase != 0;
    const int32_t default_kappa =
        options ? options->default_kappa_d : 0;

    const std::vector<elda::RawDoc> raw = elda::read_raw_docs_jsonl(input_jsonl);
    // kappa_d comes from the record itself; re-read the lines for it.
    std::vector<int32_t> kappas;
    {
      std::ifstream in(input_jsonl);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const nlohmann::json rec = nlohmann::json::parse(line);
        if (rec.contains("kappa_d")) {
          kappas.push_back(rec["kappa_d"].get<int32_t>());
        } else if (default_kappa > 0) {
          kappas.push_back(default_kappa);
        } else {
          elda::throw_invalid(
              "record \"" + rec.value("id", std::string("?")) +
              "\" has no kappa_d and no default was given");
        }
      }
    }

    const elda::ScoreMatrix scores = make_scores(topics->topics, popularity);
    std::vector<elda::OosRequest> requests;
    std::vector<int64_t> oov;
    requests.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
      const std::vector<std::string> toks =
          raw[i].pretokenized ? raw[i].tokens
                              : elda::tokenize(raw[i].text, lowercase);
      elda::OosProjection proj = elda::project_tokens(toks, vocab, raw[i].id);
      requests.push_back(
          elda::OosRequest{std::move(proj.doc), kappas[i]});
      oov.push_back(proj.oov_dropped);
    }
    const std::vector<elda::OosResult> results =
        elda::infer_batch(requests, scores, elda::PlaceholderConfig{});

    std::ofstream out(output_jsonl);
    if (!out) elda::throw_io(std::string("cannot write: ") + output_jsonl);
    int64_t total_oov = 0;
    for (size_t i = 0; i < results.size(); ++i) {
      nlohmann::json rec;
      rec["doc"] = raw[i].id;
      nlohmann::json topic_list = nlohmann::json::array();
      for (int32_t t : results[i].topics) {
        topic_list.push_back(topics->topics.labels[t]);
      }
      rec["topics"] = topic_list;
      nlohmann::json words = nlohmann::json::object();
      for (size_t j = 0; j < requests[i].doc.entries.size(); ++j) {
        words[vocab[requests[i].doc.entries[j].first]] =
            topics->topics.labels[results[i].word_topics[j]];
      }
      rec["word_assignments"] = words;
      rec["oov_dropped"] = oov[i];
      out << rec.dump() << '\n';
      total_oov += oov[i];
    }
    if (stats) {
      stats->docs = static_cast<int64_t>(results.size());
      stats->oov_dropped = total_oov;
    }
  });
}

elda_status elda_expected_topics_per_doc(const int64_t* doc_lengths, size_t n,
                                         int64_t num_topics, double* exact_out,
                                         double* approx_out) {
  return guarded([&] {
    if (!doc_lengths || n == 0 || !exact_out || !approx_out) {
      elda::throw_invalid("null argument");
    }
    const elda::ExpectedTopics e =
        elda::expected_topics_per_doc({doc_lengths, n}, num_topics);
    *exact_out = e.exact;
    *approx_out = e.approx;
  });
}

elda_status elda_file_digest(const char* path, char** out) {
  return guarded([&] {
    if (!path || !out) elda::throw_invalid("null argument");
    *out = dup_string(elda::file_digest(path));
  });
}

void elda_string_free(char* s) { delete[] s; }

}  // extern "C"
