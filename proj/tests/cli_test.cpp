// Copyright 2026 The repcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "repcount/cli.hpp"

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "repcount/io.hpp"

namespace {

namespace fs = std::filesystem;
namespace io = repcount::io;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = repcount::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("repcount_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Hand-made manifest and estimates for gt=[2,4], pred=[3,2].
  void write_small_eval_inputs(bool exact) {
    io::write_text_file(path("m.csv"),
                        "video_id,gt_count,mode,embedding_path,prediction_path\n"
                        "a,2,segmented,,p.jsonl\n"
                        "b,4,segmented,,p.jsonl\n");
    std::ostringstream est;
    io::EstimateRecord r;
    r.mode = repcount::CountingMode::segmented;
    r.estimate = {"a", exact ? 2.0 : 3.0, 1, 0.9, std::nullopt};
    r.candidates = {{1, 0.9, r.estimate.count}};
    io::EstimateRecord s = r;
    s.estimate = {"b", exact ? 4.0 : 2.0, 1, 0.9, std::nullopt};
    s.candidates = {{1, 0.9, s.estimate.count}};
    io::write_estimates({r, s}, est);
    io::write_text_file(path("e.jsonl"), est.str());
  }

  fs::path dir_;
};

TEST_F(CliTest, SynthIsByteIdenticalForTheSameSeed) {
  ASSERT_EQ(run({"synth", "--videos", "50", "--seed", "7", "--out-dir", path("a")}).code, 0);
  ASSERT_EQ(run({"synth", "--videos", "50", "--seed", "7", "--out-dir", path("b")}).code, 0);
  EXPECT_EQ(io::read_text_file(path("a/manifest.csv")), io::read_text_file(path("b/manifest.csv")));
  EXPECT_EQ(io::read_text_file(path("a/embeddings.jsonl")), io::read_text_file(path("b/embeddings.jsonl")));
  EXPECT_EQ(io::parse_manifest(io::read_text_file(path("a/manifest.csv"))).size(), 50u);
  ASSERT_EQ(run({"synth", "--videos", "50", "--seed", "8", "--out-dir", path("c")}).code, 0);
  EXPECT_NE(io::read_text_file(path("a/manifest.csv")), io::read_text_file(path("c/manifest.csv")));
}

TEST_F(CliTest, FullPipeline) {
  ASSERT_EQ(run({"synth", "--videos", "6", "--seed", "3", "--max-frames", "400", "--out-dir", path("d")}).code, 0);
  auto r = run({"predict", "--manifest", path("d/manifest.csv"), "--out", path("p.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream preds(io::read_text_file(path("p.jsonl")));
  EXPECT_EQ(io::read_predictions(preds).size(), 30u);
  r = run({"count", "--predictions", path("p.jsonl"), "--manifest", path("d/manifest.csv"), "--out", path("e.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"eval", "--manifest", path("d/manifest.csv"), "--estimates", path("e.jsonl"), "--out", path("r.json"),
           "--table", path("report.md"), "--label", "classical"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = io::parse_results(io::read_text_file(path("r.json")));
  EXPECT_EQ(doc.metrics.n_videos, 6);
  EXPECT_EQ(doc.config.tau, 0.5);
  EXPECT_EQ(doc.config.alpha, 0.0);
  EXPECT_EQ(doc.config.window, 64);
  EXPECT_EQ(doc.config.strides, (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(doc.config.tail, "keep");
  EXPECT_GE(doc.metrics.oboa, 0.8);
  EXPECT_NE(io::read_text_file(path("report.md")).find("| classical"), std::string::npos);
  r = run({"report", "--results", path("r.json"), "--results", path("r.json"), "--labels", "one,two"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| one"), std::string::npos);
  EXPECT_NE(r.out.find("| two"), std::string::npos);
}

TEST_F(CliTest, EvalOnExactEstimates) {
  write_small_eval_inputs(true);
  auto r = run({"eval", "--alpha", "0.1", "--manifest", path("m.csv"), "--estimates", path("e.jsonl"), "--out",
                path("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = io::parse_results(io::read_text_file(path("r.json")));
  EXPECT_EQ(doc.metrics.oboa, 1.0);
  EXPECT_EQ(doc.metrics.mae, 0.0);
  EXPECT_EQ(doc.metrics.alpha_used, 0.1);
  EXPECT_EQ(doc.config.alpha, 0.1);
}

TEST_F(CliTest, AuditAlpha) {
  write_small_eval_inputs(false);
  auto r = run({"audit-alpha", "--alphas", "0,0.1", "--manifest", path("m.csv"), "--estimates", path("e.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| 0.0 | 0.5000 |"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("| 0.1 | 0.4820 |"), std::string::npos) << r.out;
}

TEST_F(CliTest, ReportsDistinctAlphaRows) {
  write_small_eval_inputs(false);
  ASSERT_EQ(run({"eval", "--manifest", path("m.csv"), "--estimates", path("e.jsonl"), "--out", path("a.json")}).code, 0);
  ASSERT_EQ(run({"eval", "--alpha", "0.1", "--manifest", path("m.csv"), "--estimates", path("e.jsonl"), "--out",
                 path("b.json")})
                .code,
            0);
  auto r = run({"report", "--results", path("a.json"), "--results", path("b.json"), "--out", path("t.md")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| a "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("0.0 | 0.5000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("0.1 | 0.4820"), std::string::npos) << r.out;
}

TEST_F(CliTest, ZeroCountNeedsPositiveAlpha) {
  io::write_text_file(path("m.csv"), "video_id,gt_count,mode,embedding_path,prediction_path\nz,0,segmented,,p\n");
  io::EstimateRecord r;
  r.estimate = {"z", 1.0, 1, 0.5, std::nullopt};
  std::ostringstream est;
  io::write_estimates({r}, est);
  io::write_text_file(path("e.jsonl"), est.str());
  auto out = run({"eval", "--manifest", path("m.csv"), "--estimates", path("e.jsonl"), "--out", path("r.json")});
  EXPECT_EQ(out.code, 1);
  EXPECT_NE(out.err.find("division by zero"), std::string::npos) << out.err;
  EXPECT_FALSE(fs::exists(path("r.json")));
  out = run({"eval", "--alpha", "0.1", "--manifest", path("m.csv"), "--estimates", path("e.jsonl"), "--out",
             path("r.json")});
  EXPECT_EQ(out.code, 0) << out.err;
}

TEST_F(CliTest, UsageErrorsExitOne) {
  auto r = run({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("synth"), std::string::npos);
  r = run({"eval", "--bogus"});
  EXPECT_EQ(r.code, 1);
  r = run({});
  EXPECT_EQ(r.code, 1);
  r = run({"report"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, InvalidFlagsWriteNothing) {
  write_small_eval_inputs(false);
  const std::string out = path("out.file");
  const std::vector<std::vector<std::string>> bad{
      {"eval", "--alpha", "-1", "--manifest", path("m.csv"), "--estimates", path("e.jsonl"), "--out", out},
      {"count", "--predictions", path("p.jsonl"), "--out", out},
      {"count", "--predictions", path("p.jsonl"), "--mode", "gated", "--tau", "2", "--out", out},
      {"count", "--predictions", path("p.jsonl"), "--mode", "trimmed", "--out", out},
      {"count", "--predictions", path("p.jsonl"), "--mode", "gated", "--tail", "sometimes", "--out", out},
      {"count", "--predictions", path("p.jsonl"), "--mode", "gated", "--strides", "1,1", "--out", out},
      {"predict", "--manifest", path("m.csv"), "--window", "63", "--out", out},
      {"predict", "--manifest", path("m.csv"), "--strides", "0,1", "--out", out},
      {"synth", "--videos", "0", "--out-dir", path("never")},
      {"synth", "--mode", "trimmed", "--out-dir", path("never")},
      {"audit-alpha", "--alphas", "0,-0.1", "--manifest", path("m.csv"), "--estimates", path("e.jsonl"), "--out", out},
      {"report", "--results", path("x.json"), "--labels", "a,b", "--out", out},
  };
  for (const auto& args : bad) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 1) << args[0] << " " << args[1] << ": " << r.err;
    EXPECT_FALSE(fs::exists(out)) << args[0];
    EXPECT_FALSE(fs::exists(path("never")));
  }
}

TEST_F(CliTest, MissingFilesExitTwo) {
  auto r = run({"eval", "--manifest", path("missing.csv"), "--estimates", path("e.jsonl"), "--out", path("r.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.csv"), std::string::npos);
  write_small_eval_inputs(true);
  r = run({"eval", "--manifest", path("m.csv"), "--estimates", path("e.jsonl"), "--out", path("no/such/dir/r.json")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, MalformedInputsExitOneWithLocation) {
  io::write_text_file(path("m.csv"), "video_id,gt_count,mode,embedding_path,prediction_path\na,1,trimmed,e,\n");
  io::write_text_file(path("e.jsonl"), "");
  auto r = run({"eval", "--manifest", path("m.csv"), "--estimates", path("e.jsonl"), "--out", path("r.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

}  // namespace
