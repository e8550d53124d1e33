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

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptot/distances.h"
#include "ptot/exact_ot.h"
#include "ptot/io.h"
#include "ptot/metrics.h"
#include "ptot/model/checkpoint.h"
#include "ptot/sinkhorn.h"
#include "ptot/synth.h"
#include "ptot/training.h"

namespace ptot::cli {
namespace {

using Json = nlohmann::json;

std::string Num(double v) { return FormatDouble(v); }

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

std::filesystem::path Sidecar(const std::filesystem::path& path,
                              const char* suffix) {
  std::filesystem::path p = path;
  p += suffix;
  return p;
}

std::string GradientJson(const PointGradients& grad) {
  std::string text = "[";
  for (size_t i = 0; i < grad.size(); ++i) {
    if (i > 0) text += ",";
    text += "[" + Num(grad[i].x()) + "," + Num(grad[i].y()) + "," +
            Num(grad[i].z()) + "]";
  }
  return text + "]";
}

model::ModelConfig ModelPreset(const std::string& name) {
  if (name == "desk") return model::ModelConfig::DeskScale();
  if (name == "miniature") return model::ModelConfig::Miniature();
  throw PreconditionError("unknown model preset '" + name +
                          "' (expected desk or miniature)");
}

// State shared by every subcommand: resolved parameters and where the
// manifest goes.
struct Invocation {
  std::string command;
  Json parameters = Json::object();
  std::optional<std::filesystem::path> manifest;
  std::filesystem::path default_manifest;
};

void WriteManifest(const Invocation& inv, double seconds, int exit_code,
                   const std::string& error) {
  Json j;
  j["command"] = inv.command;
  j["parameters"] = inv.parameters;
  j["version"] = PTOT_VERSION;
  j["duration_seconds"] = seconds;
  j["exit_code"] = exit_code;
  if (!error.empty()) j["error"] = error;
  WriteText(inv.manifest.value_or(inv.default_manifest), j.dump(2) + "\n");
}

int DistCommand(Invocation& inv, const std::string& a_path,
                const std::string& b_path, const std::string& loss,
                const SinkhornConfig& sinkhorn, const std::string& grad_path,
                const std::string& out_path, std::ostream& out) {
  const PointCloud a = LoadCloud(a_path);
  const PointCloud b = LoadCloud(b_path);
  const bool want_grad = !grad_path.empty();
  DistanceResult r;
  if (loss == "chamfer") {
    r = want_grad ? ChamferGradient(a, b) : Chamfer(a, b);
  } else if (loss == "sinkhorn") {
    r = want_grad ? SinkhornGradient(a, b, sinkhorn) : Sinkhorn(a, b, sinkhorn);
  } else if (loss == "exact") {
    Require(!want_grad, "--grad is not available for the exact loss");
    r = ExactOt(a, b);
  } else {
    throw PreconditionError("unknown loss '" + loss +
                            "' (expected chamfer, sinkhorn or exact)");
  }

  out << "loss " << loss << "\n";
  out << "value " << Num(r.value) << "\n";
  if (loss == "sinkhorn") {
    out << "transport_cost " << Num(r.transport_cost) << "\n";
    out << "epsilon " << Num(r.epsilon) << "\n";
    out << "iterations " << r.iterations_used << "\n";
    out << "marginal_violation " << Num(r.marginal_violation) << "\n";
    out << "converged " << (r.converged ? "true" : "false") << "\n";
  }

  std::string json = "{\"loss\":\"" + loss + "\",\"value\":" + Num(r.value);
  if (loss == "sinkhorn") {
    json += ",\"transport_cost\":" + Num(r.transport_cost) +
            ",\"epsilon\":" + Num(r.epsilon) +
            ",\"iterations\":" + std::to_string(r.iterations_used) +
            ",\"marginal_violation\":" + Num(r.marginal_violation) +
            ",\"converged\":" + (r.converged ? "true" : "false");
  }
  json += "}\n";
  if (!out_path.empty()) WriteText(out_path, json);
  if (want_grad) {
    WriteText(grad_path, "{\"gradient_a\":" + GradientJson(*r.gradient_a) +
                             ",\"gradient_b\":" + GradientJson(*r.gradient_b) +
                             "}\n");
  }
  inv.parameters["n_a"] = a.size();
  inv.parameters["n_b"] = b.size();
  return kExitOk;
}

int EvalCommand(const std::string& pred_path, const std::string& gt_path,
                const std::vector<double>& radii, double percentile,
                const std::string& out_path, std::ostream& out) {
  const PointCloud pred = LoadCloud(pred_path);
  const PointCloud gt = LoadCloud(gt_path);
  const MetricsReport report = FullReport(pred, gt, radii, percentile);
  out << FormatReportTable(report);
  if (!out_path.empty()) WriteText(out_path, FormatReportJson(report) + "\n");
  return kExitOk;
}

struct TrainArgs {
  std::string loss = "sinkhorn";
  size_t scenes = 1;
  int steps = 200;
  uint64_t seed = 0;
  double learning_rate = model::AdamConfig{}.learning_rate;
  bool resample_gt = false;
  std::string preset = "desk";
  std::string out;
  std::string log;
};

int TrainCommand(Invocation& inv, const TrainArgs& args, std::ostream& out) {
  Require(args.scenes >= 1, "--scenes must be at least 1");
  Require(args.steps >= 0, "--steps must be non-negative");
  const LossKind kind = ParseLossKind(args.loss);
  const model::ModelConfig cfg = ModelPreset(args.preset);
  const CameraIntrinsics cam =
      CameraIntrinsics::Centered(cfg.image_width, cfg.image_height);
  const std::vector<Scene> scenes = GenerateSplit(
      args.scenes, args.seed, cam, SynthOptions::ForCamera(cam));

  TrainOptions opts;
  opts.loss.kind = kind;
  opts.adam.learning_rate = args.learning_rate;
  opts.steps = args.steps;
  opts.seed = args.seed;
  opts.resample_gt_each_epoch = args.resample_gt;
  const uint64_t init_seed = ModelInitSeed(args.seed);
  model::CloudPredictor model(cfg, init_seed);

  const std::filesystem::path log_path =
      args.log.empty() ? Sidecar(args.out, ".loss.txt")
                       : std::filesystem::path(args.log);
  std::string log_text = "# step loss\n";
  const TrainLog log = Train(model, scenes, opts, [&](int step, double loss) {
    log_text += std::to_string(step) + " " + Num(loss) + "\n";
  });
  WriteText(log_path, log_text);

  Json lineage;
  lineage["loss"] = LossName(kind);
  lineage["seed"] = args.seed;
  lineage["init_seed"] = init_seed;
  lineage["scenes"] = args.scenes;
  lineage["steps"] = args.steps;
  lineage["learning_rate"] = args.learning_rate;
  lineage["resample_gt_each_epoch"] = args.resample_gt;
  lineage["version"] = PTOT_VERSION;
  model::SaveCheckpoint(args.out, model, lineage);

  const uint64_t hash = model::ParameterHash(model);
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(hash));
  if (!log.losses.empty()) {
    char line[128];
    std::snprintf(line, sizeof(line), "initial loss %.6g, final loss %.6g\n",
                  log.losses.front(), log.losses.back());
    out << line;
  }
  if (log.non_converged_steps > 0) {
    out << "warning: sinkhorn did not converge on " << log.non_converged_steps
        << " steps\n";
  }
  out << "checkpoint " << args.out << " (parameter hash " << hex << ")\n";
  inv.parameters["init_seed"] = init_seed;
  inv.parameters["loss_log"] = log_path.string();
  inv.parameters["parameter_hash"] = hex;
  return kExitOk;
}

int PredictCommand(const std::string& ckpt_path, uint64_t scene_seed,
                   const std::string& out_path, const std::string& gt_out,
                   std::ostream& out) {
  const model::LoadedCheckpoint loaded = model::LoadCheckpoint(ckpt_path);
  const model::ModelConfig& cfg = loaded.model.config();
  const CameraIntrinsics cam =
      CameraIntrinsics::Centered(cfg.image_width, cfg.image_height);
  const Scene scene =
      GenerateScene(scene_seed, cam, SynthOptions::ForCamera(cam));
  const PointCloud pred = loaded.model.Predict(scene.image);
  SaveCloud(pred, out_path);
  if (!gt_out.empty()) SaveCloud(scene.gt, gt_out);
  out << "wrote " << pred.size() << " points to " << out_path << "\n";
  return kExitOk;
}

int BenchmarkCommand(Invocation& inv, const std::vector<std::string>& losses,
                     BenchmarkOptions opts, const std::string& preset,
                     const std::string& out_path, std::ostream& out) {
  opts.losses.clear();
  for (const std::string& name : losses) opts.losses.push_back(ParseLossKind(name));
  opts.model = ModelPreset(preset);
  const BenchmarkResult result = RunBenchmark(opts);
  out << FormatBenchmarkTable(result);

  std::string json = "{\"rows\":[";
  for (size_t i = 0; i < result.rows.size(); ++i) {
    const BenchmarkRow& row = result.rows[i];
    if (i > 0) json += ",";
    json += "{\"loss\":\"" + LossName(row.loss) +
            "\",\"report\":" + FormatReportJson(row.report) +
            ",\"final_train_loss\":" + Num(row.final_train_loss) +
            ",\"parameter_hash\":" + std::to_string(row.parameter_hash) + "}";
  }
  json += "]";
  if (result.trend_holds.has_value()) {
    json += std::string(",\"trend_holds\":") +
            (*result.trend_holds ? "true" : "false");
    inv.parameters["trend_holds"] = *result.trend_holds;
  }
  json += "}\n";
  if (!out_path.empty()) WriteText(out_path, json);
  return kExitOk;
}

int SynthCommand(uint64_t seed, int width, int height, const std::string& stem,
                 std::ostream& out) {
  const CameraIntrinsics cam = CameraIntrinsics::Centered(width, height);
  const Scene scene = GenerateScene(seed, cam, SynthOptions::ForCamera(cam));
  ExportScene(scene, stem);
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(SceneHash(scene)));
  out << "scene " << seed << " written to " << stem
      << ".{depth,xyz,img} (hash " << hex << ")\n";
  return kExitOk;
}

}  // namespace

int DefaultThreads() {
  const char* value = std::getenv("PTOT_THREADS");
  if (value == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(value, &end, 10);
  if (end == value || *end != '\0' || n < 1 || n > 1024) return 1;
  return static_cast<int>(n);
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Point cloud distances, metrics and desk-scale training"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PTOT_VERSION);

  Invocation inv;
  std::string manifest;
  std::function<int()> action;
  auto add_manifest = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest,
                    "Run manifest path (default: next to the main output)");
  };

  // dist
  std::string a_path, b_path, loss = "sinkhorn", grad_path, dist_out;
  SinkhornConfig sinkhorn;
  double epsilon = 0.0;
  CLI::App* dist = app.add_subcommand("dist", "Distance between two clouds");
  dist->add_option("a", a_path, "First cloud (.xyz or .ply)")->required();
  dist->add_option("b", b_path, "Second cloud (.xyz or .ply)")->required();
  dist->add_option("--loss", loss, "chamfer, sinkhorn or exact")
      ->capture_default_str();
  CLI::Option* eps_opt =
      dist->add_option("--epsilon", epsilon,
                       "Entropic regularization in m^2 (default: scaled mean cost)");
  dist->add_option("--max-iters", sinkhorn.max_iters)->capture_default_str();
  dist->add_option("--tol", sinkhorn.tolerance)->capture_default_str();
  dist->add_flag("--debiased,!--no-debiased", sinkhorn.debiased,
                 "Sinkhorn divergence (default on)");
  dist->add_option("--grad", grad_path, "Write coordinate gradients as JSON");
  dist->add_option("--out", dist_out, "Write the result as JSON");
  add_manifest(dist);
  dist->callback([&] {
    if (eps_opt->count() > 0) sinkhorn.epsilon = epsilon;
    inv.parameters = {{"a", a_path},
                      {"b", b_path},
                      {"loss", loss},
                      {"max_iters", sinkhorn.max_iters},
                      {"tolerance", sinkhorn.tolerance},
                      {"debiased", sinkhorn.debiased},
                      {"grad", grad_path},
                      {"out", dist_out}};
    if (sinkhorn.epsilon) inv.parameters["epsilon"] = *sinkhorn.epsilon;
    inv.default_manifest = dist_out.empty() ? std::filesystem::path("ptot_dist.manifest.json")
                                            : Sidecar(dist_out, ".manifest.json");
    action = [&] {
      return DistCommand(inv, a_path, b_path, loss, sinkhorn, grad_path,
                         dist_out, out);
    };
  });

  // eval
  std::string pred_path, gt_path, eval_out;
  std::vector<double> radii = kDefaultRadii;
  double percentile = kDefaultPercentile;
  CLI::App* eval = app.add_subcommand("eval", "Completeness and accuracy report");
  eval->add_option("pred", pred_path, "Predicted cloud")->required();
  eval->add_option("gt", gt_path, "Ground-truth cloud")->required();
  eval->add_option("--radii", radii, "Completeness radii in meters")
      ->delimiter(',')
      ->capture_default_str();
  eval->add_option("--percentile", percentile)->capture_default_str();
  eval->add_option("--out", eval_out, "Write the report as JSON");
  add_manifest(eval);
  eval->callback([&] {
    inv.parameters = {{"pred", pred_path}, {"gt", gt_path},
                      {"radii", radii},    {"percentile", percentile},
                      {"out", eval_out}};
    inv.default_manifest = eval_out.empty() ? std::filesystem::path("ptot_eval.manifest.json")
                                            : Sidecar(eval_out, ".manifest.json");
    action = [&] {
      return EvalCommand(pred_path, gt_path, radii, percentile, eval_out, out);
    };
  });

  // train
  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train on synthetic scenes");
  train->add_option("--loss", train_args.loss, "chamfer or sinkhorn")
      ->capture_default_str();
  train->add_option("--scenes", train_args.scenes)->capture_default_str();
  train->add_option("--steps", train_args.steps)->capture_default_str();
  train->add_option("--seed", train_args.seed)->capture_default_str();
  train->add_option("--lr", train_args.learning_rate)->capture_default_str();
  train->add_flag("--resample-gt", train_args.resample_gt,
                  "Redraw the ground-truth subsample every epoch");
  train->add_option("--model", train_args.preset, "desk or miniature")
      ->capture_default_str();
  train->add_option("--out", train_args.out, "Checkpoint path")->required();
  train->add_option("--log", train_args.log,
                    "Loss curve (default: <out>.loss.txt)");
  add_manifest(train);
  train->callback([&] {
    inv.parameters = {{"loss", train_args.loss},
                      {"scenes", train_args.scenes},
                      {"steps", train_args.steps},
                      {"seed", train_args.seed},
                      {"learning_rate", train_args.learning_rate},
                      {"resample_gt_each_epoch", train_args.resample_gt},
                      {"model", train_args.preset},
                      {"out", train_args.out}};
    inv.default_manifest = Sidecar(train_args.out, ".manifest.json");
    action = [&] { return TrainCommand(inv, train_args, out); };
  });

  // predict
  std::string ckpt_path, predict_out, gt_out;
  uint64_t scene_seed = 0;
  CLI::App* predict = app.add_subcommand("predict", "Predict a scene's cloud");
  predict->add_option("checkpoint", ckpt_path)->required();
  predict->add_option("scene_seed", scene_seed)->required();
  predict->add_option("--out", predict_out, "Output cloud (.ply or .xyz)")
      ->required();
  predict->add_option("--gt-out", gt_out, "Also write the scene ground truth");
  add_manifest(predict);
  predict->callback([&] {
    inv.parameters = {{"checkpoint", ckpt_path},
                      {"scene_seed", scene_seed},
                      {"out", predict_out},
                      {"gt_out", gt_out}};
    inv.default_manifest = Sidecar(predict_out, ".manifest.json");
    action = [&] {
      return PredictCommand(ckpt_path, scene_seed, predict_out, gt_out, out);
    };
  });

  // benchmark
  std::vector<std::string> bench_losses = {"chamfer", "sinkhorn"};
  BenchmarkOptions bench;
  bench.seed = kPinnedBenchmarkSeed;
  bench.threads = DefaultThreads();
  std::string bench_preset = "desk", bench_out;
  CLI::App* benchmark =
      app.add_subcommand("benchmark", "Compare losses on held-out scenes");
  benchmark->add_option("--losses", bench_losses)
      ->delimiter(',')
      ->capture_default_str();
  benchmark->add_option("--scenes", bench.train_scenes, "Training scenes")
      ->capture_default_str();
  benchmark->add_option("--test-scenes", bench.test_scenes)
      ->capture_default_str();
  benchmark->add_option("--steps", bench.steps)->capture_default_str();
  benchmark->add_option("--seed", bench.seed)->capture_default_str();
  benchmark->add_option("--lr", bench.adam.learning_rate)->capture_default_str();
  benchmark->add_option("--threads", bench.threads,
                        "Concurrent models (default: PTOT_THREADS or 1)")
      ->capture_default_str();
  benchmark->add_option("--model", bench_preset, "desk or miniature")
      ->capture_default_str();
  benchmark->add_option("--out", bench_out, "Write the table as JSON");
  add_manifest(benchmark);
  benchmark->callback([&] {
    inv.parameters = {{"losses", bench_losses},
                      {"train_scenes", bench.train_scenes},
                      {"test_scenes", bench.test_scenes},
                      {"steps", bench.steps},
                      {"seed", bench.seed},
                      {"learning_rate", bench.adam.learning_rate},
                      {"threads", bench.threads},
                      {"model", bench_preset},
                      {"out", bench_out}};
    inv.default_manifest = bench_out.empty()
                               ? std::filesystem::path("ptot_benchmark.manifest.json")
                               : Sidecar(bench_out, ".manifest.json");
    action = [&] {
      return BenchmarkCommand(inv, bench_losses, bench, bench_preset, bench_out,
                              out);
    };
  });

  // synth
  uint64_t synth_seed = 0;
  int synth_width = 64, synth_height = 64;
  std::string synth_stem;
  CLI::App* synth = app.add_subcommand("synth", "Export a synthetic scene");
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--width", synth_width)->capture_default_str();
  synth->add_option("--height", synth_height)->capture_default_str();
  synth->add_option("--out", synth_stem,
                    "Output stem; writes <stem>.depth, .xyz and .img")
      ->required();
  add_manifest(synth);
  synth->callback([&] {
    inv.parameters = {{"seed", synth_seed},
                      {"width", synth_width},
                      {"height", synth_height},
                      {"out", synth_stem}};
    inv.default_manifest = Sidecar(synth_stem, ".manifest.json");
    action = [&] {
      return SynthCommand(synth_seed, synth_width, synth_height, synth_stem, out);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? kExitOk : kExitPrecondition;
  }

  for (CLI::App* sub : app.get_subcommands()) inv.command = sub->get_name();
  if (!manifest.empty()) inv.manifest = manifest;
  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  std::string error;
  try {
    code = action();
  } catch (const PreconditionError& e) {
    error = e.what();
    code = kExitPrecondition;
  } catch (const IoError& e) {
    error = e.what();
    code = kExitIo;
  } catch (const ParseError& e) {
    error = e.what();
    code = kExitIo;
  } catch (const std::exception& e) {
    error = e.what();
    code = kExitIo;
  }
  if (!error.empty()) err << "error: " << error << "\n";
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  try {
    WriteManifest(inv, seconds, code, error);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    if (code == kExitOk) code = kExitIo;
  }
  return code;
}

}  // namespace ptot::cli
