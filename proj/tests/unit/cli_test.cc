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

#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cli.h"
#include "phrasekit/model_io.h"
#include "support.h"

using namespace phrasekit;
using phrasekit::testing::read_file;
using phrasekit::testing::TempDir;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(std::move(args), out, err);
  set_log_sink(nullptr);
  return {code, out.str(), err.str()};
}

// A small planted corpus and knowledge base written to `dir`.
struct Inputs {
  std::string corpus, kb;

  explicit Inputs(const TempDir &dir) {
    testing::PlantedSpec shape;
    shape.sentences = 600;
    shape.phrases = 12;
    auto planted = testing::make_planted_corpus(shape);
    corpus = dir.write("corpus.txt", planted.text);
    kb = dir.write("kb.txt", testing::kb_text(testing::every_other(planted.phrases)));
  }

  std::vector<std::string> run_args(const std::string &sub) const {
    return {sub, "--corpus", corpus, "--kb", kb, "--min-support", "5", "--trees", "9",
            "--threads", "1"};
  }
};

std::string strip_comments(const std::string &text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) != 0) out += line + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("ensemble error command") {
  auto r = invoke({"ensemble-error", "--p", "0.1", "--T", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.028\n");
  CHECK(invoke({"ensemble-error", "--p", "1.5", "--T", "3"}).code == 1);
  CHECK(invoke({"ensemble-error", "--p", "0.1", "--T", "0"}).code == 1);
}

TEST_CASE("usage errors") {
  TempDir dir;
  Inputs in(dir);
  auto r = invoke({"run", "--corpus", in.corpus});
  CHECK(r.code == 1);
  CHECK(r.err.find("--kb") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(invoke({"run", "--corpus", in.corpus, "--kb", in.kb, "--bogus"}).code == 1);
  CHECK(invoke({"run", "--corpus", in.corpus, "--kb", in.kb, "--trees", "many"}).code == 1);
  CHECK(invoke({"run", "--corpus", in.corpus, "--kb", in.kb, "--mode", "fast"}).code == 1);
  CHECK(invoke({"mine", "--corpus", dir.file("none.txt")}).code == 1);
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({"train", "--corpus", in.corpus, "--kb", in.kb}).code == 1);
  CHECK(invoke({"segment", "--corpus", in.corpus}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
  auto v = invoke({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find('.') != std::string::npos);
}

TEST_CASE("data errors") {
  TempDir dir;
  Inputs in(dir);
  auto bad = dir.write("bad.txt", "word\tNN\nnotag\n");
  auto r = invoke({"mine", "--corpus", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.txt:2") != std::string::npos);
  auto empty_kb = dir.write("empty_kb.txt", "no such phrase\n");
  CHECK(invoke({"run", "--corpus", in.corpus, "--kb", empty_kb, "--min-support", "5"}).code == 2);
}

TEST_CASE("mine writes candidate counts") {
  TempDir dir;
  auto corpus = dir.write("c.txt", "a\tX\nb\tX\n\na\tX\nb\tX\n");
  auto r = invoke({"mine", "--corpus", corpus, "--min-support", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "2\ta\n2\ta b\n2\tb\n");
  CHECK(r.err.find("# sha256 corpus ") != std::string::npos);
  auto untagged = dir.write("u.txt", "a\nb\n\na\nb\n");
  CHECK(invoke({"mine", "--corpus", untagged, "--untagged", "--min-support", "2"}).out == r.out);
}

TEST_CASE("run directory and manifest") {
  TempDir dir;
  Inputs in(dir);
  auto args = in.run_args("run");
  args.insert(args.end(), {"--run-dir", dir.file("run")});
  auto r = invoke(args);
  REQUIRE(r.code == 0);
  for (const char *f : {"candidates.tsv", "features.tsv", "model.qm", "segmentation.txt",
                        "ranked.tsv", "manifest.txt"}) {
    CHECK(std::filesystem::file_size(dir.file(std::string("run/") + f)) > 0);
  }
  const std::string manifest = read_file(dir.file("run/manifest.txt"));
  CHECK(manifest.find("# sha256 corpus ") != std::string::npos);
  CHECK(manifest.find("# sha256 kb ") != std::string::npos);
  CHECK(manifest.find("\nmin-support=5\n") != std::string::npos);
  CHECK(manifest.find("\ntrees=9\n") != std::string::npos);
  CHECK(manifest.find("\nseed=") != std::string::npos);
  CHECK(manifest.find("\nmode=autophrase\n") != std::string::npos);

  // The manifest reproduces the run.
  auto again = invoke({"run", "--config", dir.file("run/manifest.txt"), "--out", dir.file("r2.tsv")});
  REQUIRE(again.code == 0);
  CHECK(read_file(dir.file("r2.tsv")) == read_file(dir.file("run/ranked.tsv")));
  CHECK(strip_comments(read_file(dir.file("r2.tsv.manifest"))) == strip_comments(manifest));

  // Flags win over the config file.
  auto changed = invoke({"run", "--config", dir.file("run/manifest.txt"), "--trees", "3"});
  REQUIRE(changed.code == 0);
  CHECK(changed.err.find("\ntrees=3\n") != std::string::npos);
}

TEST_CASE("config file errors") {
  TempDir dir;
  auto cfg = dir.write("bad.cfg", "min-support 5\n");
  CHECK(invoke({"mine", "--config", cfg}).code == 1);
  auto nested = dir.write("nested.cfg", "config=other.cfg\n");
  CHECK(invoke({"mine", "--config", nested}).code == 1);
  CHECK(invoke({"mine", "--config", dir.file("missing.cfg")}).code == 1);
}

TEST_CASE("train, segment with the model, and evaluate") {
  TempDir dir;
  Inputs in(dir);
  auto args = in.run_args("train");
  args.insert(args.end(), {"--out", dir.file("m.qm"), "--max-iter", "3"});
  REQUIRE(invoke(args).code == 0);
  auto model = load_model(dir.file("m.qm"));
  CHECK(model.multiword);
  CHECK(model.segmenter);

  auto seg = invoke({"segment", "--corpus", in.corpus, "--model", dir.file("m.qm")});
  REQUIRE(seg.code == 0);
  CHECK(seg.out.find('[') != std::string::npos);
  CHECK(seg.err.find("# sha256 model ") != std::string::npos);

  auto seg_kb = in.run_args("segment");
  seg_kb.insert(seg_kb.end(), {"--max-iter", "3"});
  auto from_kb = invoke(seg_kb);
  REQUIRE(from_kb.code == 0);
  CHECK(from_kb.out == seg.out);
  auto both = in.run_args("segment");
  both.insert(both.end(), {"--model", dir.file("m.qm")});
  CHECK(invoke(both).code == 1);

  auto ranked_args = in.run_args("run");
  ranked_args.insert(ranked_args.end(), {"--out", dir.file("ranked.tsv")});
  REQUIRE(invoke(ranked_args).code == 0);
  auto ranking = read_file(dir.file("ranked.tsv"));
  std::istringstream lines(ranking);
  std::string line, pool;
  for (int i = 0; i < 6 && std::getline(lines, line); ++i) pool += "1\t" + line.substr(line.find('\t') + 1) + "\n";
  pool += "0\tnot ranked at all\n";
  auto pool_path = dir.write("pool.tsv", pool);
  auto ev = invoke({"eval", dir.file("ranked.tsv"), "--pool", pool_path, "--run-dir", dir.file("ev")});
  REQUIRE(ev.code == 0);
  CHECK(read_file(dir.file("ev/curve.tsv")).find("AUC=1\n") != std::string::npos);
  CHECK(read_file(dir.file("ev/manifest.txt")).find("# sha256 pool ") != std::string::npos);
  CHECK(invoke({"eval", dir.file("ranked.tsv")}).code == 1);
}

TEST_CASE("thread count does not change results") {
  TempDir dir;
  Inputs in(dir);
  auto one = in.run_args("run");
  auto four = one;
  four.back() = "4";
  auto a = invoke(one), b = invoke(four);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.out.empty());
}

TEST_CASE("sha256 of a file") {
  TempDir dir;
  CHECK(cli::sha256_file(dir.write("abc.txt", "abc")) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(cli::sha256_file(dir.write("empty.txt", "")) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
