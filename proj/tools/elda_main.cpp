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

// Command-line front end. Engine functionality comes exclusively through the
// C API in elda.h; this file only parses arguments, wires file paths and
// writes run manifests.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "elda.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(elda_status status) {
  switch (status) {
    case ELDA_OK:
      return 0;
    case ELDA_ERR_INVALID_ARGUMENT:
    case ELDA_ERR_FORMAT:
    case ELDA_ERR_EMPTY_CORPUS:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

[[noreturn]] void die(elda_status status) {
  std::cerr << "error: " << elda_last_error_message() << "\n";
  std::exit(exit_code_for(status));
}

void check(elda_status status) {
  if (status != ELDA_OK) die(status);
}

[[noreturn]] void die_usage(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(kExitValidation);
}

std::string owned_string(char* s) {
  std::string out = s ? s : "";
  elda_string_free(s);
  return out;
}

std::string digest(const std::string& path) {
  char* s = nullptr;
  check(elda_file_digest(path.c_str(), &s));
  return owned_string(s);
}

struct ManifestBuilder {
  std::string command;
  json config = json::object();
  json inputs = json::object();
  json outputs = json::array();
  json solver;
  uint64_t seed = 0;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void add_input(const std::string& path) { inputs[path] = digest(path); }
  void add_output(const std::string& path) { outputs.push_back(path); }

  void write(const std::string& path) const {
    json m;
    m["command"] = command;
    m["engine_version"] = elda_version();
    m["seed"] = seed;
    m["config"] = config;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    if (!solver.is_null()) m["solver"] = solver;
    m["wall_time_sec"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::ofstream out(path);
    if (!out) die_usage("cannot write manifest: " + path);
    out << m.dump(2) << '\n';
  }
};

struct CorpusHandle {
  elda_corpus* ptr = nullptr;
  ~CorpusHandle() { elda_corpus_free(ptr); }
};
struct TopicsHandle {
  elda_topics* ptr = nullptr;
  ~TopicsHandle() { elda_topics_free(ptr); }
};
struct SolutionHandle {
  elda_solution* ptr = nullptr;
  ~SolutionHandle() { elda_solution_free(ptr); }
};

std::string corpus_file(const std::string& dir) {
  return (fs::path(dir) / "corpus.elda").string();
}
std::string vocab_file(const std::string& dir) {
  return (fs::path(dir) / "vocab.txt").string();
}

void load_corpus_dir(const std::string& dir, CorpusHandle* corpus) {
  check(elda_corpus_load(corpus_file(dir).c_str(), vocab_file(dir).c_str(),
                         &corpus->ptr));
}

std::vector<int32_t> parse_hstar_list(const std::string& spec) {
  std::vector<int32_t> out;
  std::string token;
  std::istringstream in(spec);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    try {
      out.push_back(std::stoi(token));
    } catch (...) {
      die_usage("bad --hstar value \"" + token + "\"");
    }
  }
  if (out.empty()) die_usage("--hstar lists at least one integer");
  return out;
}

elda_popularity parse_popularity(const std::string& mode) {
  if (mode == "auto") return ELDA_POPULARITY_AUTO;
  if (mode == "uniform") return ELDA_POPULARITY_UNIFORM;
  if (mode == "weighted") return ELDA_POPULARITY_WEIGHTED;
  die_usage("--popularity must be auto, uniform or weighted");
}

// ---- subcommands ----

struct IngestArgs {
  std::string input;
  std::string out_dir;
  std::string stopwords;
  int32_t min_doc_freq = 1;
  double max_doc_freq_fraction = 1.0;
  bool no_lowercase = false;
};

int run_ingest(const IngestArgs& args) {
  ManifestBuilder manifest;
  manifest.command = "ingest";
  manifest.config = {{"min_doc_freq", args.min_doc_freq},
                     {"max_doc_freq_fraction", args.max_doc_freq_fraction},
                     {"lowercase", !args.no_lowercase},
                     {"stopwords", args.stopwords}};
  manifest.add_input(args.input);
  if (!args.stopwords.empty()) manifest.add_input(args.stopwords);

  elda_tokenizer_options opts = elda_tokenizer_options_default();
  opts.lowercase = args.no_lowercase ? 0 : 1;
  opts.min_doc_freq = args.min_doc_freq;
  opts.max_doc_freq_fraction = args.max_doc_freq_fraction;
  if (!args.stopwords.empty()) opts.stopword_file = args.stopwords.c_str();

  elda_ingest_stats stats{};
  CorpusHandle corpus;
  check(elda_corpus_ingest_file(args.input.c_str(), &opts, &corpus.ptr, &stats));

  fs::create_directories(args.out_dir);
  const std::string cpath = corpus_file(args.out_dir);
  const std::string vpath = vocab_file(args.out_dir);
  check(elda_corpus_save(corpus.ptr, cpath.c_str(), vpath.c_str()));
  manifest.add_output(cpath);
  manifest.add_output(vpath);
  manifest.write((fs::path(args.out_dir) / "manifest.json").string());

  std::cout << "ingested " << stats.docs_kept << "/" << stats.docs_in
            << " documents (" << stats.docs_dropped << " dropped), vocabulary "
            << elda_corpus_vocab_size(corpus.ptr) << ", tokens "
            << stats.tokens_kept << "\n";
  return 0;
}

struct GenTopicsArgs {
  std::string corpus_dir;
  std::string generator;
  std::string keywords;
  std::string out;
  double epsilon = 0.0;
};

int run_gen_topics(const GenTopicsArgs& args) {
  ManifestBuilder manifest;
  manifest.command = "gen-topics";
  manifest.config = {{"generator", args.generator},
                     {"epsilon", args.epsilon},
                     {"keywords", args.keywords}};
  manifest.add_input(corpus_file(args.corpus_dir));
  manifest.add_input(vocab_file(args.corpus_dir));

  CorpusHandle corpus;
  load_corpus_dir(args.corpus_dir, &corpus);

  elda_generator_options opts = elda_generator_options_default();
  if (args.generator == "umass") {
    opts.mode = ELDA_GEN_UMASS;
  } else if (args.generator == "exp-umass") {
    opts.mode = ELDA_GEN_EXP_UMASS;
  } else if (args.generator == "cooccurrence") {
    opts.mode = ELDA_GEN_COOCCURRENCE;
  } else {
    die_usage("--generator must be umass, exp-umass or cooccurrence");
  }
  opts.epsilon = args.epsilon;
  if (!args.keywords.empty()) {
    opts.keyword_file = args.keywords.c_str();
    manifest.add_input(args.keywords);
  }

  TopicsHandle topics;
  check(elda_topics_generate(corpus.ptr, &opts, &topics.ptr));
  if (auto dir = fs::path(args.out).parent_path(); !dir.empty()) {
    fs::create_directories(dir);
  }
  check(elda_topics_export(topics.ptr, args.out.c_str()));
  manifest.add_output(args.out);
  if (elda_topics_has_popularity(topics.ptr)) {
    manifest.add_output(args.out + ".weights");
  }
  manifest.write(args.out + ".manifest.json");

  std::cout << "generated " << elda_topics_count(topics.ptr) << " topics over "
            << elda_topics_vocab_size(topics.ptr) << " words -> " << args.out
            << "\n";
  return 0;
}

struct FitArgs {
  std::string corpus_dir;
  std::string topics;
  std::string algorithm = "fastgreedy";
  std::string out_dir;
  std::string popularity = "auto";
  std::string hstar;
  double kappa = 0.0;
  uint64_t seed = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  int64_t sample_m = 0;
  double placeholder_logp = 0.0;
  bool sweep = false;
  bool no_lazy = false;
};

int run_fit(const FitArgs& args) {
  ManifestBuilder manifest;
  manifest.command = "fit";
  manifest.seed = args.seed;
  manifest.config = {{"algorithm", args.algorithm},
                     {"kappa", args.kappa},
                     {"epsilon", args.epsilon},
                     {"delta", args.delta},
                     {"sample_m", args.sample_m},
                     {"placeholder_logp", args.placeholder_logp},
                     {"popularity", args.popularity},
                     {"sweep", args.sweep},
                     {"lazy_word_skip", !args.no_lazy}};
  manifest.add_input(corpus_file(args.corpus_dir));
  manifest.add_input(vocab_file(args.corpus_dir));
  manifest.add_input(args.topics);

  CorpusHandle corpus;
  load_corpus_dir(args.corpus_dir, &corpus);
  TopicsHandle topics;
  check(elda_topics_import(args.topics.c_str(),
                           elda_corpus_vocab_size(corpus.ptr), &topics.ptr));

  elda_fit_options opts = elda_fit_options_default();
  if (args.algorithm == "simple") {
    opts.algorithm = ELDA_ALG_SIMPLE;
  } else if (args.algorithm == "fastgreedy") {
    opts.algorithm = ELDA_ALG_FASTGREEDY;
  } else if (args.algorithm == "ltlg") {
    opts.algorithm = ELDA_ALG_LTLG;
  } else if (args.algorithm == "fast") {
    opts.algorithm = ELDA_ALG_FAST;
  } else {
    die_usage("--algorithm must be simple, fastgreedy, ltlg or fast");
  }
  opts.kappa = args.kappa;
  opts.seed = args.seed;
  opts.epsilon = args.epsilon;
  opts.delta = args.delta;
  opts.sample_m = args.sample_m;
  opts.placeholder_log_p = args.placeholder_logp;
  opts.popularity = parse_popularity(args.popularity);
  opts.lazy_word_skip = args.no_lazy ? 0 : 1;

  SolutionHandle solution;
  check(elda_fit(corpus.ptr, topics.ptr, &opts, &solution.ptr));

  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  const std::string sol_path = (out / "solution.jsonl").string();
  const std::string meta_path = (out / "solution_meta.json").string();
  const std::string assign_path = (out / "assignment.jsonl").string();
  const std::string table_path = (out / "length_links.tsv").string();
  check(elda_solution_save(solution.ptr, corpus.ptr, topics.ptr,
                           sol_path.c_str(), meta_path.c_str()));
  check(elda_assignment_save(solution.ptr, corpus.ptr, topics.ptr,
                             assign_path.c_str()));
  check(elda_sparsity_table_save(solution.ptr, corpus.ptr, table_path.c_str()));
  manifest.add_output(sol_path);
  manifest.add_output(meta_path);
  manifest.add_output(assign_path);
  manifest.add_output(table_path);

  manifest.solver =
      json::parse(owned_string([&] {
        char* s = nullptr;
        check(elda_solution_meta_json(solution.ptr, &s));
        return s;
      }()));

  if (args.sweep) {
    // One greedy run serves every mean sparsity from 1 to kappa: report each
    // whole-level prefix of the same solution.
    std::vector<int32_t> h_stars;
    if (!args.hstar.empty()) {
      h_stars = parse_hstar_list(args.hstar);
    } else {
      const int32_t v = elda_corpus_vocab_size(corpus.ptr);
      h_stars.push_back(std::max<int32_t>(2, std::min<int32_t>(10, v)));
    }
    const int64_t docs = elda_corpus_num_docs(corpus.ptr);
    const int64_t levels = elda_solution_num_links(solution.ptr) / docs;
    json sweep = json::array();
    for (int64_t level = 1; level <= levels; ++level) {
      SolutionHandle prefix;
      check(elda_solution_prefix(solution.ptr, level * docs, &prefix.ptr));
      char* report = nullptr;
      check(elda_eval_report(corpus.ptr, topics.ptr, prefix.ptr,
                             h_stars.data(), h_stars.size(), 0.0,
                             parse_popularity(args.popularity), &report));
      json entry;
      entry["mean_links_per_doc"] = level;
      entry["report"] = json::parse(owned_string(report));
      sweep.push_back(entry);
    }
    const std::string sweep_path = (out / "sweep.json").string();
    std::ofstream sf(sweep_path);
    sf << sweep.dump(2) << '\n';
    manifest.add_output(sweep_path);
  }

  manifest.write((out / "manifest.json").string());
  std::cout << "fit " << args.algorithm << ": "
            << elda_solution_num_links(solution.ptr) << " links, objective "
            << manifest.solver["objective"].get<double>() << "\n";
  return 0;
}

struct InferArgs {
  std::string topics;
  std::string vocab;
  std::string input;
  std::string out_dir;
  std::string popularity = "auto";
  int32_t kappa_d = 0;
  bool no_lowercase = false;
};

int run_infer(const InferArgs& args) {
  ManifestBuilder manifest;
  manifest.command = "infer";
  manifest.config = {{"kappa_d_default", args.kappa_d},
                     {"lowercase", !args.no_lowercase},
                     {"popularity", args.popularity}};
  manifest.add_input(args.topics);
  manifest.add_input(args.vocab);
  manifest.add_input(args.input);

  TopicsHandle topics;
  check(elda_topics_import(args.topics.c_str(), -1, &topics.ptr));

  fs::create_directories(args.out_dir);
  const std::string out_path =
      (fs::path(args.out_dir) / "assignments.jsonl").string();
  elda_oos_options opts;
  opts.default_kappa_d = args.kappa_d;
  opts.lowercase = args.no_lowercase ? 0 : 1;
  elda_oos_stats stats{};
  check(elda_oos_infer_file(topics.ptr, args.vocab.c_str(), args.input.c_str(),
                            out_path.c_str(), &opts,
                            parse_popularity(args.popularity), &stats));
  manifest.add_output(out_path);
  manifest.write((fs::path(args.out_dir) / "manifest.json").string());

  std::cout << "inferred " << stats.docs << " documents ("
            << stats.oov_dropped << " out-of-vocabulary tokens dropped)\n";
  return 0;
}

struct EvalArgs {
  std::string corpus_dir;
  std::string topics;
  std::string solution;
  std::string out;
  std::string hstar = "5,10";
  std::string popularity = "auto";
  double epsilon = 0.01;
};

void print_report_table(const json& report) {
  std::printf("%-22s %.6f\n", "objective", report["objective"].get<double>());
  std::printf("%-22s %.4f\n", "mean links per doc",
              report["mean_links_per_doc"].get<double>());
  for (const auto& [h, stats] : report["coherence"].items()) {
    std::printf("coherence h*=%-9s mean %.4f  min %.4f  max %.4f\n", h.c_str(),
                stats["mean"].get<double>(), stats["min"].get<double>(),
                stats["max"].get<double>());
  }
  std::string trace = "trace";
  int level = 0;
  for (const auto& v : report["trace"]) {
    trace += "  k=" + std::to_string(++level) + ": " +
             std::to_string(v.get<double>());
  }
  std::printf("%s\n", trace.c_str());
  std::vector<std::pair<int64_t, std::string>> usage;
  for (const auto& [label, count] : report["topic_usage"].items()) {
    usage.emplace_back(count.get<int64_t>(), label);
  }
  std::sort(usage.begin(), usage.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::printf("top topics:");
  const size_t show = std::min<size_t>(usage.size(), 8);
  for (size_t i = 0; i < show; ++i) {
    std::printf(" %s(%lld)", usage[i].second.c_str(),
                static_cast<long long>(usage[i].first));
  }
  std::printf("\n");
}

int run_eval(const EvalArgs& args) {
  ManifestBuilder manifest;
  manifest.command = "eval";
  manifest.config = {{"hstar", args.hstar},
                     {"epsilon", args.epsilon},
                     {"popularity", args.popularity}};
  manifest.add_input(corpus_file(args.corpus_dir));
  manifest.add_input(vocab_file(args.corpus_dir));
  manifest.add_input(args.topics);
  manifest.add_input(args.solution);

  CorpusHandle corpus;
  load_corpus_dir(args.corpus_dir, &corpus);
  TopicsHandle topics;
  check(elda_topics_import(args.topics.c_str(),
                           elda_corpus_vocab_size(corpus.ptr), &topics.ptr));
  SolutionHandle solution;
  check(elda_solution_load(args.solution.c_str(), corpus.ptr, topics.ptr,
                           &solution.ptr));

  const std::vector<int32_t> h_stars = parse_hstar_list(args.hstar);
  char* report_str = nullptr;
  check(elda_eval_report(corpus.ptr, topics.ptr, solution.ptr, h_stars.data(),
                         h_stars.size(), args.epsilon,
                         parse_popularity(args.popularity), &report_str));
  const std::string report_json = owned_string(report_str);

  if (auto dir = fs::path(args.out).parent_path(); !dir.empty()) {
    fs::create_directories(dir);
  }
  std::ofstream out(args.out);
  if (!out) die_usage("cannot write report: " + args.out);
  out << report_json << '\n';
  out.close();
  manifest.add_output(args.out);
  manifest.write(args.out + ".manifest.json");

  print_report_table(json::parse(report_json));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elda: sparse MAP topic-word assignment by monotone submodular "
               "maximization"};
  app.require_subcommand(1);
  app.footer("Environment: ELDA_THREADS caps worker threads.\n"
             "Exit codes: 0 success, 2 usage/validation error, 3 runtime "
             "failure.");

  IngestArgs ingest;
  auto* c_ingest =
      app.add_subcommand("ingest", "Tokenize a JSONL corpus into ELDA-CORPUS "
                         "and vocabulary files");
  c_ingest->add_option("--input", ingest.input, "JSONL documents")->required();
  c_ingest->add_option("--out", ingest.out_dir, "output directory")->required();
  c_ingest->add_option("--min-doc-freq", ingest.min_doc_freq,
                       "drop words in fewer documents");
  c_ingest->add_option("--max-doc-freq-fraction", ingest.max_doc_freq_fraction,
                       "drop words in more than this fraction of documents");
  c_ingest->add_option("--stopwords", ingest.stopwords,
                       "stopword file, one token per line");
  c_ingest->add_flag("--no-lowercase", ingest.no_lowercase,
                     "keep original case");

  GenTopicsArgs gen;
  auto* c_gen = app.add_subcommand(
      "gen-topics", "Generate the interpretable candidate topic set");
  c_gen->add_option("--corpus", gen.corpus_dir, "ingest output directory")
      ->required();
  c_gen->add_option("--generator", gen.generator,
                    "umass | exp-umass | cooccurrence")
      ->required();
  c_gen->add_option("--epsilon", gen.epsilon,
                    "smoothing epsilon (0 = generator default)");
  c_gen->add_option("--keywords", gen.keywords,
                    "keyword file (default: every vocabulary word)");
  c_gen->add_option("--out", gen.out, "ELDA-TOPICS output path")->required();

  FitArgs fit;
  auto* c_fit = app.add_subcommand(
      "fit", "Solve for near-optimal topic-document links");
  c_fit->add_option("--corpus", fit.corpus_dir, "ingest output directory")
      ->required();
  c_fit->add_option("--topics", fit.topics, "ELDA-TOPICS file")->required();
  c_fit->add_option("--algorithm", fit.algorithm,
                    "simple | fastgreedy | ltlg | fast");
  c_fit->add_option("--kappa", fit.kappa, "mean topics per document bound")
      ->required();
  c_fit->add_option("--seed", fit.seed, "seed for randomized algorithms");
  c_fit->add_option("--epsilon", fit.epsilon, "ltlg/fast accuracy parameter");
  c_fit->add_option("--delta", fit.delta, "fast failure probability");
  c_fit->add_option("--sample-m", fit.sample_m, "fast sample-size override");
  c_fit->add_option("--placeholder-logp", fit.placeholder_logp,
                    "placeholder log probability (default log 1e-10)");
  c_fit->add_option("--popularity", fit.popularity,
                    "auto | uniform | weighted topic priors");
  c_fit->add_option("--hstar", fit.hstar, "top-word counts for --sweep");
  c_fit->add_flag("--sweep", fit.sweep,
                  "emit per-prefix reports at mean sparsity 1..kappa");
  c_fit->add_flag("--no-lazy", fit.no_lazy, "disable lazy word skipping");
  c_fit->add_option("--out", fit.out_dir, "output directory")->required();

  InferArgs infer;
  auto* c_infer = app.add_subcommand(
      "infer", "Out-of-sample inference for held-out documents");
  c_infer->add_option("--topics", infer.topics, "ELDA-TOPICS file")->required();
  c_infer->add_option("--vocab", infer.vocab, "training vocabulary file")
      ->required();
  c_infer->add_option("--input", infer.input,
                      "JSONL of {id, text|tokens, kappa_d}")
      ->required();
  c_infer->add_option("--kappa-d", infer.kappa_d,
                      "default kappa_d for records without one");
  c_infer->add_option("--popularity", infer.popularity,
                      "auto | uniform | weighted");
  c_infer->add_flag("--no-lowercase", infer.no_lowercase, "keep original case");
  c_infer->add_option("--out", infer.out_dir, "output directory")->required();

  EvalArgs eval;
  auto* c_eval = app.add_subcommand(
      "eval", "Coherence and objective report for a solution");
  c_eval->add_option("--corpus", eval.corpus_dir, "ingest output directory")
      ->required();
  c_eval->add_option("--topics", eval.topics, "ELDA-TOPICS file")->required();
  c_eval->add_option("--solution", eval.solution, "solution JSONL")->required();
  c_eval->add_option("--hstar", eval.hstar,
                     "comma-separated top-word counts (default 5,10)");
  c_eval->add_option("--epsilon", eval.epsilon, "coherence smoothing epsilon");
  c_eval->add_option("--popularity", eval.popularity,
                     "auto | uniform | weighted");
  c_eval->add_option("--out", eval.out, "report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (c_ingest->parsed()) return run_ingest(ingest);
    if (c_gen->parsed()) return run_gen_topics(gen);
    if (c_fit->parsed()) return run_fit(fit);
    if (c_infer->parsed()) return run_infer(infer);
    if (c_eval->parsed()) return run_eval(eval);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}
