// Copyright 2026 The Phrasekit Authors.
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

#include "cli.h"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <array>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "phrasekit/evaluation.h"
#include "phrasekit/model_io.h"
#include "phrasekit/pipeline.h"

#ifndef PHRASEKIT_VERSION
#define PHRASEKIT_VERSION "0.0.0"
#endif

namespace phrasekit::cli {

namespace fs = std::filesystem;

std::string sha256_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 init failed");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), std::size_t(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  static constexpr char kHex[] = "0123456789abcdef";
  for (unsigned i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 15];
  }
  return hex;
}

namespace {

struct Options {
  std::string corpus;
  bool untagged = false;
  std::string kb;
  std::string stopwords;
  std::string pool;
  std::string model;
  std::string ranked;
  std::size_t min_support = 30;
  std::size_t max_len = 6;
  std::size_t trees = 100;
  std::size_t k_samples = 100;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string mode = "autophrase";
  double tol = 1e-4;
  std::size_t max_iter = 10;
  std::string out;
  std::string run_dir;
  std::string config;
  double p = 0.0;
  std::size_t big_t = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// key=value lines become --key=value arguments placed ahead of the user's
// flags, so the flags win.
std::vector<std::string> config_arguments(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    if (key == "config") throw UsageError(path + ": nested config files are not supported");
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (!path || args.empty()) return args;
  auto extra = config_arguments(*path);
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

void add_corpus_options(CLI::App &app, Options &o) {
  app.add_option("--corpus", o.corpus, "POS-tagged corpus (word<TAB>tag per line)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_flag("--untagged", o.untagged, "corpus has one bare token per line");
  app.add_option("--threads", o.threads, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
}

void add_miner_options(CLI::App &app, Options &o) {
  app.add_option("--min-support", o.min_support, "minimum n-gram frequency")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-len", o.max_len, "maximum phrase length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_model_options(CLI::App &app, Options &o, bool kb_required) {
  auto *kb = app.add_option("--kb", o.kb, "knowledge base, one phrase per line")
                 ->check(CLI::ExistingFile);
  if (kb_required) kb->required();
  app.add_option("--stopwords", o.stopwords, "stopword list (default: built-in English)")
      ->check(CLI::ExistingFile);
  app.add_option("--trees", o.trees, "base classifiers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--k-samples", o.k_samples, "samples per class per tree")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--mode", o.mode, "autophrase|autosegphrase|autophrase-plus")
      ->check(CLI::IsMember({"autophrase", "autosegphrase", "autophrase-plus"}))
      ->capture_default_str();
  app.add_option("--tol", o.tol, "convergence tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-iter", o.max_iter, "iteration cap for each training loop")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void add_output_options(CLI::App &app, Options &o) {
  app.add_option("--out", o.out, "output file (default: standard output)");
  app.add_option("--run-dir", o.run_dir, "directory receiving every artifact and a manifest");
}

void add_config_option(CLI::App &app, Options &o) {
  app.add_option("--config", o.config, "key=value defaults, overridden by flags")
      ->check(CLI::ExistingFile);
}

PipelineConfig pipeline_config(const Options &o) {
  PipelineConfig cfg;
  cfg.miner.tau = o.min_support;
  cfg.miner.max_len = o.max_len;
  cfg.ensemble.trees = o.trees;
  cfg.ensemble.k_samples = o.k_samples;
  cfg.ensemble.seed = o.seed;
  cfg.viterbi.tol = o.tol;
  cfg.viterbi.max_outer = o.max_iter;
  cfg.viterbi.max_inner = o.max_iter;
  cfg.mode = *parse_mode(o.mode);
  cfg.format = o.untagged ? CorpusFormat::kUntagged : CorpusFormat::kTagged;
  cfg.kb_path = o.kb;
  cfg.stopword_path = o.stopwords;
  cfg.threads = o.threads;
  return cfg;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  return f;
}

// Writes through `fn` to `path`, or to `fallback` when path is empty.
template <class Fn>
void emit(const std::string &path, std::ostream &fallback, Fn &&fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  auto f = open_output(path);
  fn(f);
  if (!f) throw DataError("write failed: " + path);
}

std::string in_run_dir(const Options &o, const char *name) {
  return o.run_dir.empty() ? std::string() : (fs::path(o.run_dir) / name).string();
}

// Reproduction record. The key=value lines are themselves a valid --config
// file for the same subcommand.
void write_manifest(const CLI::App &sub, const Options &o, std::ostream &err) {
  std::ostringstream m;
  m << "# phrasekit " << PHRASEKIT_VERSION << " " << sub.get_name() << "\n";
  for (auto [name, path] : {std::pair<const char *, const std::string *>{"corpus", &o.corpus},
                            {"kb", &o.kb},
                            {"stopwords", &o.stopwords},
                            {"pool", &o.pool},
                            {"model", &o.model},
                            {"ranked", &o.ranked}}) {
    if (!path->empty()) m << "# sha256 " << name << " " << sha256_file(*path) << "\n";
  }
  m << "# seed " << o.seed << "\n";
  for (const CLI::Option *opt : sub.get_options()) {
    std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "out" ||
        name == "run-dir" || opt->get_positional()) {
      continue;
    }
    std::string value;
    if (name == "untagged") {
      value = o.untagged ? "true" : "false";
    } else if (opt->count() > 0) {
      value = opt->as<std::string>();
    } else {
      value = opt->get_default_str();
    }
    if (value.empty()) continue;
    m << name << "=" << value << "\n";
  }

  std::string path = in_run_dir(o, "manifest.txt");
  if (path.empty() && !o.out.empty()) path = o.out + ".manifest";
  if (path.empty()) {
    err << m.str();
  } else {
    auto f = open_output(path);
    f << m.str();
  }
}

void prepare_run_dir(const Options &o) {
  if (o.run_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(o.run_dir, ec);
  if (ec) throw DataError("cannot create run directory " + o.run_dir + ": " + ec.message());
}

ModelFile model_from(const PipelineResult &r) {
  ModelFile m;
  m.multiword = r.pass2_model;
  m.unigram = r.unigram_model;
  if (r.pools) m.segmenter = store_segmenter(r.corpus, r.mined.candidates, r.viterbi.params);
  return m;
}

// Every artifact of a pipeline run goes into the run directory.
void write_run_dir(const Options &o, const PipelineResult &r) {
  if (o.run_dir.empty()) return;
  emit(in_run_dir(o, "candidates.tsv"), std::cout,
       [&](std::ostream &f) { write_candidates(f, r.corpus, r.mined.candidates); });
  emit(in_run_dir(o, "features.tsv"), std::cout, [&](std::ostream &f) {
    std::vector<CandidateId> ids(r.mined.candidates.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = CandidateId(i);
    if (r.pass2_features.rows() == Eigen::Index(ids.size())) {
      write_features(f, r.corpus, r.mined.candidates, ids, r.pass2_features);
    }
  });
  save_model(in_run_dir(o, "model.qm"), model_from(r));
  emit(in_run_dir(o, "segmentation.txt"), std::cout,
       [&](std::ostream &f) { write_segmentation(f, r.corpus, r.segmentation); });
  emit(in_run_dir(o, "ranked.tsv"), std::cout,
       [&](std::ostream &f) { write_ranking(f, r.ranking); });
}

int cmd_mine(const CLI::App &sub, const Options &o, std::ostream &out, std::ostream &err) {
  prepare_run_dir(o);
  TaggedCorpus corpus =
      load_corpus(o.corpus, o.untagged ? CorpusFormat::kUntagged : CorpusFormat::kTagged);
  MinerConfig cfg;
  cfg.tau = o.min_support;
  cfg.max_len = o.max_len;
  cfg.threads = o.threads;
  MinedCandidates mined = mine_candidates(corpus, cfg);
  log(LogLevel::kInfo, "mined " + std::to_string(mined.candidates.size()) + " candidates");
  auto write = [&](std::ostream &f) { write_candidates(f, corpus, mined.candidates); };
  if (!o.run_dir.empty()) emit(in_run_dir(o, "candidates.tsv"), out, write);
  if (!o.out.empty() || o.run_dir.empty()) emit(o.out, out, write);
  write_manifest(sub, o, err);
  return kExitOk;
}

int cmd_train(const CLI::App &sub, const Options &o, std::ostream &err) {
  if (o.out.empty() && o.run_dir.empty()) throw UsageError("train needs --out or --run-dir");
  prepare_run_dir(o);
  PipelineResult r = run_pipeline(o.corpus, pipeline_config(o));
  write_run_dir(o, r);
  if (!o.out.empty()) save_model(o.out, model_from(r));
  write_manifest(sub, o, err);
  return kExitOk;
}

int cmd_run(const CLI::App &sub, const Options &o, std::ostream &out, std::ostream &err) {
  prepare_run_dir(o);
  PipelineResult r = run_pipeline(o.corpus, pipeline_config(o));
  write_run_dir(o, r);
  if (!o.out.empty() || o.run_dir.empty()) {
    emit(o.out, out, [&](std::ostream &f) { write_ranking(f, r.ranking); });
  }
  write_manifest(sub, o, err);
  return kExitOk;
}

int cmd_segment(const CLI::App &sub, const Options &o, std::ostream &out, std::ostream &err) {
  if (o.model.empty() == o.kb.empty()) throw UsageError("segment needs exactly one of --model, --kb");
  prepare_run_dir(o);
  TaggedCorpus corpus;
  CorpusSegmentation segmentation;
  if (!o.model.empty()) {
    ModelFile model = load_model(o.model);
    if (!model.segmenter) throw DataError(o.model + ": model has no segmenter section");
    corpus = load_corpus(o.corpus, o.untagged ? CorpusFormat::kUntagged : CorpusFormat::kTagged);
    BoundSegmenter bound = bind_segmenter(*model.segmenter, corpus);
    segmentation = segment_corpus(corpus, bound.params, bound.trie, o.threads).segmentation;
  } else {
    PipelineResult r = run_pipeline(o.corpus, pipeline_config(o));
    write_run_dir(o, r);
    corpus = std::move(r.corpus);
    segmentation = std::move(r.segmentation);
  }
  auto write = [&](std::ostream &f) { write_segmentation(f, corpus, segmentation); };
  if (!o.run_dir.empty() && !o.model.empty()) emit(in_run_dir(o, "segmentation.txt"), out, write);
  if (!o.out.empty() || o.run_dir.empty()) emit(o.out, out, write);
  write_manifest(sub, o, err);
  return kExitOk;
}

int cmd_eval(const CLI::App &sub, const Options &o, std::ostream &out, std::ostream &err) {
  prepare_run_dir(o);
  std::ifstream in(o.ranked);
  if (!in) throw DataError("cannot open " + o.ranked);
  RankedPhraseList ranked = read_ranking(in, o.ranked);
  EvalPool pool = load_pool(o.pool);
  PrCurve curve = pr_curve(ranked, pool);
  log(LogLevel::kInfo, "AUC " + format_double(curve.auc));
  auto write = [&](std::ostream &f) { write_curve(f, curve); };
  if (!o.run_dir.empty()) emit(in_run_dir(o, "curve.tsv"), out, write);
  if (!o.out.empty() || o.run_dir.empty()) emit(o.out, out, write);
  write_manifest(sub, o, err);
  return kExitOk;
}

int cmd_ensemble_error(const Options &o, std::ostream &out) {
  std::array<char, 64> buf;
  std::snprintf(buf.data(), buf.size(), "%.12g", ensemble_error(o.p, o.big_t));
  out << buf.data() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
  set_log_sink(&err);
  struct SinkReset {
    ~SinkReset() { set_log_sink(&std::clog); }
  } sink_reset;

  Options o;
  CLI::App app{"Automated phrase mining from POS-tagged corpora", "phrasekit"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", PHRASEKIT_VERSION);

  auto *mine = app.add_subcommand("mine", "count frequent n-gram candidates");
  add_corpus_options(*mine, o);
  add_miner_options(*mine, o);
  add_output_options(*mine, o);
  add_config_option(*mine, o);

  auto *train = app.add_subcommand("train", "train quality and segmentation models");
  auto *run = app.add_subcommand("run", "mine, train and rank phrases");
  for (auto *sub : {train, run}) {
    add_corpus_options(*sub, o);
    add_miner_options(*sub, o);
    add_model_options(*sub, o, true);
    add_output_options(*sub, o);
    add_config_option(*sub, o);
  }

  auto *segment = app.add_subcommand("segment", "segment a corpus into phrases");
  add_corpus_options(*segment, o);
  add_miner_options(*segment, o);
  add_model_options(*segment, o, false);
  segment->add_option("--model", o.model, "trained model file")->check(CLI::ExistingFile);
  add_output_options(*segment, o);
  add_config_option(*segment, o);

  auto *eval = app.add_subcommand("eval", "precision-recall curve of a ranking over a pool");
  eval->add_option("ranked", o.ranked, "ranked phrase list (quality<TAB>phrase)")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--pool", o.pool, "labeled pool (1|0<TAB>phrase)")
      ->required()
      ->check(CLI::ExistingFile);
  add_output_options(*eval, o);
  add_config_option(*eval, o);

  auto *ee = app.add_subcommand("ensemble-error", "majority-vote error of T independent classifiers");
  ee->add_option("--p", o.p, "base classifier error rate")->required()->check(CLI::Range(0.0, 1.0));
  ee->add_option("--T", o.big_t, "number of classifiers")->required()->check(CLI::PositiveNumber);

  auto usage = [&](const std::string &msg) {
    err << "error: " << msg << "\n\n";
    const CLI::App *shown = &app;
    for (const auto *sub : app.get_subcommands()) shown = sub;
    err << shown->help();
    return kExitUsage;
  };

  try {
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::Success &e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    return usage(e.what());
  } catch (const UsageError &e) {
    return usage(e.what());
  }

  try {
    if (mine->parsed()) return cmd_mine(*mine, o, out, err);
    if (train->parsed()) return cmd_train(*train, o, err);
    if (run->parsed()) return cmd_run(*run, o, out, err);
    if (segment->parsed()) return cmd_segment(*segment, o, out, err);
    if (eval->parsed()) return cmd_eval(*eval, o, out, err);
    if (ee->parsed()) return cmd_ensemble_error(o, out);
  } catch (const UsageError &e) {
    return usage(e.what());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return usage("no subcommand");
}

}  // namespace phrasekit::cli
