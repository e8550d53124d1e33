// Copyright 2026 The ptot Authors
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

#include "cli.h"

#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ptot/io.h"
#include "ptot/model/checkpoint.h"
#include "testing.h"

namespace ptot::cli {
namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::ScratchDir(
        ::testing::UnitTest::GetInstance()->current_test_info()->name());
  }

  Result Call(std::vector<std::string> args) {
    args.insert(args.begin(), "ptot");
    std::ostringstream out, err;
    Result r;
    r.code = cli::Run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
  }

  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  nlohmann::json Json(const std::string& name) const {
    return nlohmann::json::parse(testing::ReadFile(dir_ / name));
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, UsageErrorsAndHelp) {
  EXPECT_EQ(Call({}).code, kExitPrecondition);
  EXPECT_EQ(Call({"frobnicate"}).code, kExitPrecondition);
  EXPECT_EQ(Call({"dist", P("a.xyz")}).code, kExitPrecondition);
  const Result help = Call({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("benchmark"), std::string::npos);
  EXPECT_EQ(Call({"--version"}).code, kExitOk);
}

TEST_F(CliTest, DistTwoPointExamples) {
  testing::WriteFile(dir_ / "a.xyz", "0 0 0\n2 0 0\n");
  testing::WriteFile(dir_ / "b.xyz", "1 0 0\n3 0 0\n");
  Result r = Call({"dist", P("a.xyz"), P("b.xyz"), "--loss", "exact", "--out",
                   P("d.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("value 1\n"), std::string::npos);
  EXPECT_EQ(Json("d.json")["value"].get<double>(), 1.0);
  EXPECT_EQ(Json("d.json.manifest.json")["command"], "dist");

  testing::WriteFile(dir_ / "p.xyz", "0 0 0\n");
  testing::WriteFile(dir_ / "q.xyz", "1 0 0\n");
  r = Call({"dist", P("p.xyz"), P("q.xyz"), "--loss", "chamfer", "--grad",
            P("g.json"), "--manifest", P("m.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("value 2\n"), std::string::npos);
  const auto g = Json("g.json");
  EXPECT_EQ(g["gradient_a"][0][0].get<double>(), -4.0);
  EXPECT_EQ(g["gradient_b"][0][0].get<double>(), 4.0);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "m.json"));
}

TEST_F(CliTest, DistIdenticalDebiasedIsZero) {
  testing::WriteFile(dir_ / "a.xyz", "0 0 1\n1 2 3\n-1 0.5 2\n");
  const Result r = Call({"dist", P("a.xyz"), P("a.xyz"), "--loss", "sinkhorn",
                         "--debiased", "--out", P("d.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = Json("d.json");
  EXPECT_LE(std::abs(j["value"].get<double>()), 1e-6);
  EXPECT_TRUE(j["converged"].get<bool>());
}

TEST_F(CliTest, DistErrorCodes) {
  testing::WriteFile(dir_ / "a.xyz", "0 0 0\n2 0 0\n");
  testing::WriteFile(dir_ / "c.xyz", "0 0 0\n");
  testing::WriteFile(dir_ / "bad.xyz", "0 0 zero\n");
  Result r = Call({"dist", P("a.xyz"), P("missing.xyz"), "--out", P("d.json")});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("missing.xyz"), std::string::npos);
  const auto manifest = Json("d.json.manifest.json");
  EXPECT_EQ(manifest["exit_code"], kExitIo);
  EXPECT_TRUE(manifest.contains("error"));

  EXPECT_EQ(Call({"dist", P("a.xyz"), P("bad.xyz"), "--out", P("d.json")}).code,
            kExitIo);
  EXPECT_EQ(Call({"dist", P("a.xyz"), P("c.xyz"), "--loss", "sinkhorn", "--out",
                  P("d.json")})
                .code,
            kExitPrecondition);
  EXPECT_EQ(Call({"dist", P("a.xyz"), P("a.xyz"), "--loss", "emd", "--out",
                  P("d.json")})
                .code,
            kExitPrecondition);
  EXPECT_EQ(Call({"dist", P("a.xyz"), P("a.xyz"), "--epsilon", "-1", "--out",
                  P("d.json")})
                .code,
            kExitPrecondition);
}

TEST_F(CliTest, EvalReport) {
  testing::WriteFile(dir_ / "gt.xyz", "0 0 1\n0 0 2\n0 1 3\n");
  Result r = Call({"eval", P("gt.xyz"), P("gt.xyz"), "--out", P("e.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = Json("e.json");
  for (const char* key : {"completeness_50cm", "completeness_25cm",
                          "completeness_10cm"}) {
    EXPECT_EQ(j[key].get<double>(), 100.0) << key;
  }
  EXPECT_EQ(j["accuracy_m"].get<double>(), 0.0);
  EXPECT_EQ(j["relative_accuracy"].get<double>(), 0.0);
  EXPECT_LT(r.out.find("completeness_50cm"), r.out.find("completeness_10cm"));

  // Distances 1..10 m from the single gt point: the 90th percentile is 9.
  std::string pred;
  for (int d = 1; d <= 10; ++d) pred += "0 0 " + std::to_string(100 + d) + "\n";
  testing::WriteFile(dir_ / "pred.xyz", pred);
  testing::WriteFile(dir_ / "one.xyz", "0 0 100\n");
  r = Call({"eval", P("pred.xyz"), P("one.xyz"), "--out", P("p.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json("p.json")["accuracy_m"].get<double>(), 9.0);

  r = Call({"eval", P("pred.xyz"), P("one.xyz"), "--radii", "2,0.5", "--out",
            P("q.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json("q.json")["completeness_200cm"].get<double>(), 100.0);
  EXPECT_EQ(Json("q.json")["completeness_50cm"].get<double>(), 0.0);
  EXPECT_EQ(Call({"eval", P("pred.xyz"), P("one.xyz"), "--percentile", "0",
                  "--out", P("e.json")})
                .code,
            kExitPrecondition);
}

TEST_F(CliTest, TrainIsDeterministicAndZeroStepsIsInit) {
  auto train = [&](const std::string& name, const std::string& steps) {
    return Call({"train", "--model", "miniature", "--loss", "chamfer", "--steps",
                 steps, "--seed", "3", "--scenes", "2", "--out", P(name)});
  };
  ASSERT_EQ(train("a.json", "5").code, kExitOk);
  ASSERT_EQ(train("b.json", "5").code, kExitOk);
  ASSERT_EQ(train("z.json", "0").code, kExitOk);
  const auto a = model::LoadCheckpoint(dir_ / "a.json");
  const auto b = model::LoadCheckpoint(dir_ / "b.json");
  const auto z = model::LoadCheckpoint(dir_ / "z.json");
  EXPECT_EQ(model::ParameterHash(a.model), model::ParameterHash(b.model));
  EXPECT_NE(model::ParameterHash(a.model), model::ParameterHash(z.model));
  const model::CloudPredictor init(model::ModelConfig::Miniature(),
                                   z.lineage["init_seed"].get<uint64_t>());
  EXPECT_EQ(model::ParameterHash(z.model), model::ParameterHash(init));
  EXPECT_EQ(z.lineage["seed"], 3);

  const std::string log = testing::ReadFile(dir_ / "a.json.loss.txt");
  EXPECT_EQ(log.rfind("# step loss\n", 0), 0u);
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 6);
  const auto manifest = Json("a.json.manifest.json");
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["parameters"]["seed"], 3);
  EXPECT_EQ(manifest["exit_code"], 0);
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_TRUE(manifest.contains("duration_seconds"));

  EXPECT_EQ(Call({"train", "--loss", "emd", "--out", P("x.json")}).code,
            kExitPrecondition);
  EXPECT_EQ(Call({"train", "--model", "huge", "--out", P("x.json")}).code,
            kExitPrecondition);
}

TEST_F(CliTest, PredictThenEvaluate) {
  ASSERT_EQ(Call({"train", "--model", "miniature", "--steps", "2", "--out",
                  P("m.json")})
                .code,
            kExitOk);
  Result r = Call({"predict", P("m.json"), "42", "--out", P("p.ply"), "--gt-out",
                   P("gt.xyz")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(LoadPly(dir_ / "p.ply").size(), 16u);
  const std::string first = testing::ReadFile(dir_ / "p.ply");
  ASSERT_EQ(Call({"predict", P("m.json"), "42", "--out", P("p.ply")}).code,
            kExitOk);
  EXPECT_EQ(testing::ReadFile(dir_ / "p.ply"), first);
  r = Call({"eval", P("p.ply"), P("gt.xyz"), "--out", P("e.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;

  // Tensor shapes that contradict the stored config.
  auto j = Json("m.json");
  j["config"]["local_mlp"] = {9};
  testing::WriteFile(dir_ / "bad.json", j.dump());
  EXPECT_EQ(Call({"predict", P("bad.json"), "1", "--out", P("x.ply")}).code,
            kExitPrecondition);
  testing::WriteFile(dir_ / "junk.json", "not json");
  EXPECT_EQ(Call({"predict", P("junk.json"), "1", "--out", P("x.ply")}).code,
            kExitIo);
}

TEST_F(CliTest, BenchmarkTable) {
  const Result r =
      Call({"benchmark", "--model", "miniature", "--scenes", "2", "--test-scenes",
            "1", "--steps", "3", "--seed", "5", "--out", P("b.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\nchamfer "), std::string::npos);
  EXPECT_NE(r.out.find("\nsinkhorn "), std::string::npos);
  EXPECT_NE(r.out.find("TREND "), std::string::npos);
  const auto j = Json("b.json");
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_TRUE(j.contains("trend_holds"));
  EXPECT_EQ(Json("b.json.manifest.json")["parameters"]["seed"], 5);
}

TEST_F(CliTest, SynthExport) {
  const Result r = Call({"synth", "--seed", "4", "--out", P("s")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(LoadXyz(dir_ / "s.xyz").size(), 512u);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "s.depth"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "s.img"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "s.manifest.json"));
  EXPECT_EQ(Call({"synth", "--width", "0", "--out", P("t")}).code,
            kExitPrecondition);
}

TEST(DefaultThreads, ReadsEnvironment) {
  setenv("PTOT_THREADS", "3", 1);
  EXPECT_EQ(DefaultThreads(), 3);
  setenv("PTOT_THREADS", "x", 1);
  EXPECT_EQ(DefaultThreads(), 1);
  unsetenv("PTOT_THREADS");
  EXPECT_EQ(DefaultThreads(), 1);
}

}  // namespace
}  // namespace ptot::cli
