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

#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "ptot/distances.h"
#include "ptot/model/checkpoint.h"
#include "ptot/rng.h"

namespace ptot {
namespace {

enum Stream : uint64_t {
  kTargetStream = 11,
  kOrderStream = 12,
  kInitStream = 13,
};

}  // namespace

std::string LossName(LossKind kind) {
  switch (kind) {
    case LossKind::kChamfer:
      return "chamfer";
    case LossKind::kSinkhorn:
      return "sinkhorn";
    case LossKind::kCombined:
      return "combined";
  }
  return "unknown";
}

LossKind ParseLossKind(const std::string& name) {
  if (name == "chamfer") return LossKind::kChamfer;
  if (name == "sinkhorn") return LossKind::kSinkhorn;
  if (name == "combined") return LossKind::kCombined;
  throw PreconditionError("unknown loss '" + name +
                          "' (expected chamfer, sinkhorn or combined)");
}

LossEvaluation EvaluateLoss(const LossConfig& cfg, const PointCloud& pred,
                            const PointCloud& target) {
  LossEvaluation eval;
  eval.gradient.assign(pred.size(), Point3::Zero());
  auto accumulate = [&](const DistanceResult& r, double weight) {
    eval.value += weight * r.value;
    for (size_t i = 0; i < pred.size(); ++i) {
      eval.gradient[i] += weight * (*r.gradient_a)[i];
    }
  };
  if (cfg.kind == LossKind::kChamfer || cfg.kind == LossKind::kCombined) {
    const double w = cfg.kind == LossKind::kCombined ? cfg.chamfer_weight : 1.0;
    accumulate(ChamferGradient(pred, target), w);
  }
  if (cfg.kind == LossKind::kSinkhorn || cfg.kind == LossKind::kCombined) {
    const double w = cfg.kind == LossKind::kCombined ? cfg.ot_weight : 1.0;
    const DistanceResult r = SinkhornGradient(pred, target, cfg.sinkhorn);
    eval.sinkhorn_iterations = r.iterations_used;
    eval.converged = r.converged;
    accumulate(r, w);
  }
  return eval;
}

uint64_t ModelInitSeed(uint64_t seed) { return DeriveSeed(seed, kInitStream); }

PointCloud TrainingTarget(const Scene& scene, size_t count,
                          const TrainOptions& opts, int epoch) {
  const uint64_t stream =
      opts.resample_gt_each_epoch ? DeriveSeed(opts.seed, epoch) : 0;
  return Subsample(scene.gt, count,
                   DeriveSeed(scene.spec.seed ^ stream, kTargetStream));
}

TrainLog Train(model::CloudPredictor& model, const std::vector<Scene>& scenes,
               const TrainOptions& opts,
               const std::function<void(int, double)>& on_step) {
  Require(!scenes.empty(), "training needs at least one scene");
  Require(opts.steps >= 0, "step count must be non-negative");
  opts.adam.Validate();
  opts.loss.sinkhorn.Validate();
  const size_t count = static_cast<size_t>(model.config().output_points());

  std::vector<PointCloud> fixed_targets;
  if (!opts.resample_gt_each_epoch) {
    for (const Scene& scene : scenes) {
      fixed_targets.push_back(TrainingTarget(scene, count, opts, 0));
    }
  }
  model::AdamState adam(model.params());
  model.ZeroGrad();
  TrainLog log;
  std::vector<size_t> order(scenes.size());
  for (int step = 0; step < opts.steps; ++step) {
    const int epoch = step / static_cast<int>(scenes.size());
    const size_t slot = step % scenes.size();
    if (slot == 0) {
      std::iota(order.begin(), order.end(), 0);
      Rng rng(DeriveSeed(DeriveSeed(opts.seed, kOrderStream), epoch));
      for (size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.UniformIndex(i)]);
      }
    }
    const size_t index = order[slot];
    const PointCloud target =
        opts.resample_gt_each_epoch
            ? TrainingTarget(scenes[index], count, opts, epoch)
            : fixed_targets[index];

    const PointCloud pred = model.Forward(scenes[index].image);
    const LossEvaluation loss = EvaluateLoss(opts.loss, pred, target);
    model.Backward(loss.gradient);
    adam.Step(model.mutable_params(), opts.adam, step + 1);

    log.losses.push_back(loss.value);
    log.scene_order.push_back(index);
    log.non_converged_steps += loss.converged ? 0 : 1;
    if (on_step) on_step(step, loss.value);
  }
  return log;
}

namespace {

MetricsReport MeanReport(const std::vector<MetricsReport>& reports) {
  MetricsReport mean = reports.front();
  const double n = static_cast<double>(reports.size());
  for (auto& [radius, value] : mean.completeness_at) {
    value = 0.0;
    for (const auto& r : reports) value += r.completeness(radius);
    value /= n;
  }
  mean.accuracy_m = 0.0;
  mean.relative_accuracy = 0.0;
  mean.n_gt = 0;
  for (const auto& r : reports) {
    mean.accuracy_m += r.accuracy_m / n;
    mean.relative_accuracy += r.relative_accuracy / n;
    mean.n_gt += r.n_gt;
  }
  mean.n_gt /= reports.size();
  return mean;
}

BenchmarkRow TrainAndEvaluate(LossKind kind, const BenchmarkOptions& opts,
                              const std::vector<Scene>& train,
                              const std::vector<Scene>& test) {
  model::CloudPredictor model(opts.model, ModelInitSeed(opts.seed));
  TrainOptions train_opts;
  train_opts.loss.kind = kind;
  train_opts.loss.sinkhorn = opts.sinkhorn;
  train_opts.adam = opts.adam;
  train_opts.steps = opts.steps;
  train_opts.seed = opts.seed;
  const TrainLog log = Train(model, train, train_opts);

  std::vector<MetricsReport> reports;
  for (const Scene& scene : test) {
    reports.push_back(FullReport(model.Predict(scene.image), scene.gt));
  }
  BenchmarkRow row;
  row.loss = kind;
  row.report = MeanReport(reports);
  row.final_train_loss = log.losses.empty() ? 0.0 : log.losses.back();
  row.parameter_hash = model::ParameterHash(model);
  return row;
}

}  // namespace

BenchmarkResult RunBenchmark(const BenchmarkOptions& opts) {
  Require(!opts.losses.empty(), "benchmark needs at least one loss");
  Require(opts.train_scenes >= 1 && opts.test_scenes >= 1,
          "benchmark needs training and test scenes");
  opts.model.Validate();
  const CameraIntrinsics cam = CameraIntrinsics::Centered(
      opts.model.image_width, opts.model.image_height);
  const std::vector<Scene> train = GenerateSplit(
      opts.train_scenes, opts.seed, cam, SynthOptions::ForCamera(cam));
  const std::vector<Scene> test =
      GenerateSplit(opts.test_scenes, opts.seed + opts.train_scenes, cam,
                    SynthOptions::ForCamera(cam));

  BenchmarkResult result;
  result.rows.resize(opts.losses.size());
  if (opts.threads > 1 && opts.losses.size() > 1) {
    std::vector<std::exception_ptr> errors(opts.losses.size());
    std::vector<std::jthread> workers;
    for (size_t i = 0; i < opts.losses.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          result.rows[i] = TrainAndEvaluate(opts.losses[i], opts, train, test);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    workers.clear();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (size_t i = 0; i < opts.losses.size(); ++i) {
      result.rows[i] = TrainAndEvaluate(opts.losses[i], opts, train, test);
    }
  }

  const BenchmarkRow* chamfer = nullptr;
  const BenchmarkRow* sinkhorn = nullptr;
  for (const auto& row : result.rows) {
    if (row.loss == LossKind::kChamfer) chamfer = &row;
    if (row.loss == LossKind::kSinkhorn) sinkhorn = &row;
  }
  if (chamfer != nullptr && sinkhorn != nullptr) {
    const double c_ot = sinkhorn->report.completeness(kTrendRadius);
    const double c_ch = chamfer->report.completeness(kTrendRadius);
    const bool coverage = c_ot >= c_ch;
    const bool accuracy =
        chamfer->report.accuracy_m <= sinkhorn->report.accuracy_m;
    result.trend_holds = coverage && accuracy;
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer),
                  "completeness@25cm sinkhorn %.2f %s chamfer %.2f; accuracy "
                  "chamfer %.4f m %s sinkhorn %.4f m",
                  c_ot, coverage ? ">=" : "<", c_ch, chamfer->report.accuracy_m,
                  accuracy ? "<=" : ">", sinkhorn->report.accuracy_m);
    result.trend_message = std::string(*result.trend_holds ? "TREND OK: "
                                                           : "TREND REGRESSION: ") +
                           buffer;
  }
  return result;
}

std::string FormatBenchmarkTable(const BenchmarkResult& result) {
  std::string out =
      "loss       | compl 50cm  25cm  10cm (%) | accuracy m | rel.   | final loss\n";
  char line[160];
  for (const auto& row : result.rows) {
    const auto& r = row.report;
    std::snprintf(line, sizeof(line),
                  "%-10s | %10.2f %5.2f %5.2f     | %10.4f | %6.4f | %.6g\n",
                  LossName(row.loss).c_str(), r.completeness(0.50),
                  r.completeness(0.25), r.completeness(0.10), r.accuracy_m,
                  r.relative_accuracy, row.final_train_loss);
    out += line;
  }
  if (!result.trend_message.empty()) out += result.trend_message + "\n";
  return out;
}

}  // namespace ptot
