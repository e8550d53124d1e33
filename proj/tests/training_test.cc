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

#include "ptot/training.h"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "ptot/distances.h"
#include "ptot/model/checkpoint.h"
#include "testing.h"

namespace ptot {
namespace {

const CameraIntrinsics kMiniCam = CameraIntrinsics::Centered(8, 8);

std::vector<Scene> MiniScenes(size_t n, uint64_t base) {
  return GenerateSplit(n, base, kMiniCam, SynthOptions::ForCamera(kMiniCam));
}

TEST(Loss, NamesRoundTrip) {
  for (LossKind k : {LossKind::kChamfer, LossKind::kSinkhorn, LossKind::kCombined}) {
    EXPECT_EQ(ParseLossKind(LossName(k)), k);
  }
  EXPECT_THROW(ParseLossKind("emd"), PreconditionError);
}

TEST(Loss, EvaluateMatchesDistances) {
  Rng rng(1);
  const PointCloud pred = testing::RandomCloud(rng, 12);
  const PointCloud target = testing::RandomCloud(rng, 12);
  LossConfig cfg;
  cfg.kind = LossKind::kChamfer;
  const LossEvaluation ch = EvaluateLoss(cfg, pred, target);
  const DistanceResult ref = ChamferGradient(pred, target);
  EXPECT_EQ(ch.value, ref.value);
  EXPECT_EQ(ch.gradient, *ref.gradient_a);

  cfg.kind = LossKind::kSinkhorn;
  const LossEvaluation ot = EvaluateLoss(cfg, pred, target);
  EXPECT_EQ(ot.value, Sinkhorn(pred, target, cfg.sinkhorn).value);
  EXPECT_GT(ot.sinkhorn_iterations, 0);

  cfg.kind = LossKind::kCombined;
  cfg.chamfer_weight = 0.25;
  cfg.ot_weight = 2.0;
  const LossEvaluation both = EvaluateLoss(cfg, pred, target);
  EXPECT_NEAR(both.value, 0.25 * ch.value + 2.0 * ot.value, 1e-12);
  for (size_t i = 0; i < pred.size(); ++i) {
    EXPECT_TRUE(both.gradient[i].isApprox(
        0.25 * ch.gradient[i] + 2.0 * ot.gradient[i], 1e-12));
  }
}

TEST(TrainingTarget, FixedUnlessResampled) {
  const Scene scene = MiniScenes(1, 3).front();
  TrainOptions opts;
  opts.seed = 9;
  const PointCloud a = TrainingTarget(scene, 16, opts, 0);
  EXPECT_EQ(a, TrainingTarget(scene, 16, opts, 5));
  opts.resample_gt_each_epoch = true;
  EXPECT_NE(TrainingTarget(scene, 16, opts, 1), TrainingTarget(scene, 16, opts, 2));
  std::set<std::tuple<double, double, double>> gt;
  for (const Point3& p : scene.gt) gt.insert({p.x(), p.y(), p.z()});
  for (const Point3& p : a) EXPECT_TRUE(gt.count({p.x(), p.y(), p.z()}));
}

TEST(Train, ZeroStepsKeepsInitialization) {
  const auto scenes = MiniScenes(2, 1);
  model::CloudPredictor model(model::ModelConfig::Miniature(), 4);
  const uint64_t before = model::ParameterHash(model);
  TrainOptions opts;
  opts.steps = 0;
  const TrainLog log = Train(model, scenes, opts);
  EXPECT_TRUE(log.losses.empty());
  EXPECT_EQ(model::ParameterHash(model), before);
}

TEST(Train, DeterministicAndVisitsEveryScenePerEpoch) {
  const auto scenes = MiniScenes(3, 5);
  TrainOptions opts;
  opts.loss.kind = LossKind::kChamfer;
  opts.steps = 9;
  opts.seed = 2;
  model::CloudPredictor a(model::ModelConfig::Miniature(), 4);
  model::CloudPredictor b(model::ModelConfig::Miniature(), 4);
  std::vector<double> seen;
  const TrainLog la = Train(a, scenes, opts, [&](int, double l) { seen.push_back(l); });
  const TrainLog lb = Train(b, scenes, opts);
  EXPECT_EQ(model::ParameterHash(a), model::ParameterHash(b));
  EXPECT_EQ(la.losses, lb.losses);
  EXPECT_EQ(la.losses, seen);
  for (int epoch = 0; epoch < 3; ++epoch) {
    std::vector<size_t> slice(la.scene_order.begin() + 3 * epoch,
                              la.scene_order.begin() + 3 * epoch + 3);
    std::sort(slice.begin(), slice.end());
    EXPECT_EQ(slice, (std::vector<size_t>{0, 1, 2}));
  }
}

TEST(Train, ReducesLossOnOneScene) {
  const auto scenes = MiniScenes(1, 7);
  for (LossKind kind : {LossKind::kChamfer, LossKind::kSinkhorn}) {
    model::CloudPredictor model(model::ModelConfig::Miniature(), ModelInitSeed(1));
    TrainOptions opts;
    opts.loss.kind = kind;
    opts.adam.learning_rate = 1e-2;
    opts.steps = 100;
    const TrainLog log = Train(model, scenes, opts);
    EXPECT_LT(log.losses.back(), 0.5 * log.losses.front()) << LossName(kind);
  }
}

TEST(Train, Preconditions) {
  model::CloudPredictor model(model::ModelConfig::Miniature(), 4);
  EXPECT_THROW(Train(model, {}, TrainOptions{}), PreconditionError);
  TrainOptions opts;
  opts.steps = -1;
  EXPECT_THROW(Train(model, MiniScenes(1, 1), opts), PreconditionError);
  opts.steps = 1;
  opts.adam.learning_rate = -1.0;
  EXPECT_THROW(Train(model, MiniScenes(1, 1), opts), PreconditionError);
}

BenchmarkOptions MiniBenchmark() {
  BenchmarkOptions opts;
  opts.model = model::ModelConfig::Miniature();
  opts.train_scenes = 3;
  opts.test_scenes = 2;
  opts.steps = 6;
  opts.seed = 4;
  return opts;
}

TEST(Benchmark, OneRowPerLossWithValidMetrics) {
  const BenchmarkResult result = RunBenchmark(MiniBenchmark());
  ASSERT_EQ(result.rows.size(), 2u);
  EXPECT_EQ(result.rows[0].loss, LossKind::kChamfer);
  EXPECT_EQ(result.rows[1].loss, LossKind::kSinkhorn);
  for (const BenchmarkRow& row : result.rows) {
    for (const auto& [radius, c] : row.report.completeness_at) {
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 100.0);
    }
    EXPECT_GE(row.report.accuracy_m, 0.0);
    EXPECT_GE(row.report.relative_accuracy, 0.0);
  }
  ASSERT_TRUE(result.trend_holds.has_value());
  EXPECT_EQ(result.trend_message.rfind(*result.trend_holds ? "TREND OK"
                                                           : "TREND REGRESSION",
                                       0),
            0u);
  const std::string table = FormatBenchmarkTable(result);
  EXPECT_NE(table.find("\nchamfer "), std::string::npos);
  EXPECT_NE(table.find("\nsinkhorn "), std::string::npos);
}

TEST(Benchmark, ThreadsDoNotChangeResults) {
  BenchmarkOptions opts = MiniBenchmark();
  const BenchmarkResult serial = RunBenchmark(opts);
  opts.threads = 2;
  const BenchmarkResult parallel = RunBenchmark(opts);
  for (size_t i = 0; i < serial.rows.size(); ++i) {
    EXPECT_EQ(serial.rows[i].parameter_hash, parallel.rows[i].parameter_hash);
    EXPECT_EQ(serial.rows[i].report.accuracy_m, parallel.rows[i].report.accuracy_m);
  }
}

TEST(Benchmark, SingleLossHasNoTrend) {
  BenchmarkOptions opts = MiniBenchmark();
  opts.losses = {LossKind::kChamfer};
  const BenchmarkResult result = RunBenchmark(opts);
  EXPECT_EQ(result.rows.size(), 1u);
  EXPECT_FALSE(result.trend_holds.has_value());
  opts.losses.clear();
  EXPECT_THROW(RunBenchmark(opts), PreconditionError);
}

}  // namespace
}  // namespace ptot
