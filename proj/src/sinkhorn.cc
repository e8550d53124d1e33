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

#include "ptot/sinkhorn.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace ptot {

void SinkhornConfig::Validate() const {
  if (epsilon.has_value()) {
    Require(std::isfinite(*epsilon) && *epsilon > 0.0,
            "sinkhorn epsilon must be positive");
  }
  Require(std::isfinite(epsilon_scale) && epsilon_scale > 0.0,
          "sinkhorn epsilon scale must be positive");
  Require(max_iters >= 1, "sinkhorn max_iters must be at least 1");
  Require(std::isfinite(tolerance) && tolerance > 0.0,
          "sinkhorn tolerance must be positive");
}

double SinkhornConfig::ResolveEpsilon(const Eigen::MatrixXd& cost_ab) const {
  if (epsilon.has_value()) return *epsilon;
  const double mean = cost_ab.mean();
  // Coincident clouds have zero mean cost; any positive scale works there.
  return mean > 0.0 ? epsilon_scale * mean : epsilon_scale;
}

namespace {

// out_k = -eps * (log(1/N) + LSE_l((pot_l - cost(l, k)) / eps)), where
// `cost_major` stores cost(., k) contiguously for each k.
void SoftMinUpdate(const Eigen::MatrixXd& cost_major, const Eigen::VectorXd& pot,
                   double epsilon, Eigen::VectorXd* out) {
  const Eigen::Index n = cost_major.rows();
  const double inv_eps = 1.0 / epsilon;
  const double log_weight = -std::log(static_cast<double>(n));
  Eigen::ArrayXd scratch(n);
  for (Eigen::Index k = 0; k < cost_major.cols(); ++k) {
    scratch = (pot.array() - cost_major.col(k).array()) * inv_eps;
    const double max_term = scratch.maxCoeff();
    const double sum = (scratch - max_term).exp().sum();
    (*out)[k] = -epsilon * (log_weight + max_term + std::log(sum));
  }
}

// Coordinate gradient of <P, C(x, y)> with respect to x: 2 sum_j P_ij (x_i - y_j).
PointGradients CrossGradient(const Eigen::MatrixXd& plan, const PointCloud& x,
                             const PointCloud& y) {
  PointGradients grad(x.size(), Point3::Zero());
  for (size_t i = 0; i < x.size(); ++i) {
    Point3 acc = Point3::Zero();
    for (size_t j = 0; j < y.size(); ++j) {
      acc += plan(i, j) * (x[i] - y[j]);
    }
    grad[i] = 2.0 * acc;
  }
  return grad;
}

// Gradient of <P, C(x, x)>: x_k appears in row k and in column k.
PointGradients SelfGradient(const Eigen::MatrixXd& plan, const PointCloud& x) {
  PointGradients grad(x.size(), Point3::Zero());
  for (size_t k = 0; k < x.size(); ++k) {
    Point3 acc = Point3::Zero();
    for (size_t j = 0; j < x.size(); ++j) {
      acc += (plan(k, j) + plan(j, k)) * (x[k] - x[j]);
    }
    grad[k] = 2.0 * acc;
  }
  return grad;
}

// Fills value, plan and transport cost from the potentials in `s`.
void FillPlan(const Eigen::MatrixXd& cost, double epsilon, EntropicSolution* s) {
  const Eigen::Index n = cost.rows();
  const double log_mass = -2.0 * std::log(static_cast<double>(n));
  s->value = s->f.mean() + s->g.mean();
  s->plan.resize(n, n);
  s->transport_cost = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p =
          std::exp((s->f[i] + s->g[j] - cost(i, j)) / epsilon + log_mass);
      s->plan(i, j) = p;
      s->transport_cost += p * cost(i, j);
    }
  }
}

struct Solved {
  DistanceResult result;
  EntropicSolution ab, aa, bb;
};

Solved Solve(const PointCloud& a, const PointCloud& b,
             const SinkhornConfig& cfg) {
  cfg.Validate();
  Require(a.size() == b.size(),
          "sinkhorn requires equal cardinalities, got " +
              std::to_string(a.size()) + " and " + std::to_string(b.size()));
  const Eigen::MatrixXd cost_ab = CostMatrix(a, b);
  const double eps = cfg.ResolveEpsilon(cost_ab);

  Solved s;
  s.ab = SolveEntropicOt(cost_ab, eps, cfg.max_iters, cfg.tolerance);
  DistanceResult& r = s.result;
  r.value = s.ab.value;
  r.iterations_used = s.ab.iterations;
  r.marginal_violation = s.ab.violation;
  r.converged = s.ab.converged;
  r.transport_cost = s.ab.transport_cost;
  r.epsilon = eps;
  if (cfg.debiased) {
    s.aa = SolveSymmetricEntropicOt(CostMatrix(a, a), eps, cfg.max_iters,
                                    cfg.tolerance);
    s.bb = SolveSymmetricEntropicOt(CostMatrix(b, b), eps, cfg.max_iters,
                                    cfg.tolerance);
    r.value = s.ab.value - 0.5 * s.aa.value - 0.5 * s.bb.value;
    for (const EntropicSolution* self : {&s.aa, &s.bb}) {
      r.iterations_used = std::max(r.iterations_used, self->iterations);
      r.marginal_violation = std::max(r.marginal_violation, self->violation);
      r.converged = r.converged && self->converged;
    }
  }
  r.plan = TransportPlan(s.ab.plan);
  return s;
}

}  // namespace

EntropicSolution SolveEntropicOt(const Eigen::MatrixXd& cost, double epsilon,
                                 int max_iters, double tolerance,
                                 const Eigen::VectorXd* warm_f) {
  Require(cost.rows() > 0 && cost.rows() == cost.cols(),
          "entropic OT needs a non-empty square cost matrix");
  Require(warm_f == nullptr || warm_f->size() == cost.rows(),
          "warm-start potential has the wrong size");
  Require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
  Require(max_iters >= 1, "max_iters must be at least 1");
  const Eigen::Index n = cost.rows();
  const double mass = 1.0 / static_cast<double>(n);
  // Column k of `cost` feeds g_k; column k of the transpose feeds f_k.
  const Eigen::MatrixXd cost_t = cost.transpose();

  EntropicSolution s;
  s.f = Eigen::VectorXd::Zero(n);
  s.g = Eigen::VectorXd::Zero(n);
  if (warm_f != nullptr) {
    s.f = *warm_f;
  } else {
    SoftMinUpdate(cost_t, s.g, epsilon, &s.f);
  }
  Eigen::VectorXd f_next(n);
  for (int it = 1; it <= max_iters; ++it) {
    SoftMinUpdate(cost, s.f, epsilon, &s.g);
    SoftMinUpdate(cost_t, s.g, epsilon, &f_next);
    // Row sums of the current plan are mass * exp((f - f_next) / eps).
    double violation = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      violation = std::max(
          violation, mass * std::abs(std::expm1((s.f[i] - f_next[i]) / epsilon)));
    }
    s.iterations = it;
    s.violation = violation;
    if (violation < tolerance) {
      s.converged = true;
      break;
    }
    if (it == max_iters) break;
    s.f = f_next;
  }

  FillPlan(cost, epsilon, &s);
  return s;
}

EntropicSolution SolveSymmetricEntropicOt(const Eigen::MatrixXd& cost,
                                          double epsilon, int max_iters,
                                          double tolerance) {
  Require(cost.rows() > 0 && cost.rows() == cost.cols(),
          "entropic OT needs a non-empty square cost matrix");
  Require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
  Require(max_iters >= 1, "max_iters must be at least 1");
  const Eigen::Index n = cost.rows();
  const double mass = 1.0 / static_cast<double>(n);

  EntropicSolution s;
  s.f = Eigen::VectorXd::Zero(n);
  SoftMinUpdate(cost, s.f, epsilon, &s.f);
  Eigen::VectorXd t(n);
  for (int it = 1; it <= max_iters; ++it) {
    SoftMinUpdate(cost, s.f, epsilon, &t);
    double violation = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      violation = std::max(
          violation, mass * std::abs(std::expm1((s.f[i] - t[i]) / epsilon)));
    }
    s.iterations = it;
    s.violation = violation;
    if (violation < tolerance) {
      s.converged = true;
      break;
    }
    if (it == max_iters) break;
    s.f = 0.5 * (s.f + t);
  }
  s.g = s.f;
  FillPlan(cost, epsilon, &s);
  return s;
}

DistanceResult Sinkhorn(const PointCloud& a, const PointCloud& b,
                        const SinkhornConfig& cfg) {
  return Solve(a, b, cfg).result;
}

DistanceResult SinkhornGradient(const PointCloud& a, const PointCloud& b,
                                const SinkhornConfig& cfg) {
  Solved s = Solve(a, b, cfg);
  PointGradients ga = CrossGradient(s.ab.plan, a, b);
  PointGradients gb = CrossGradient(s.ab.plan.transpose(), b, a);
  if (cfg.debiased) {
    const PointGradients self_a = SelfGradient(s.aa.plan, a);
    const PointGradients self_b = SelfGradient(s.bb.plan, b);
    for (size_t i = 0; i < a.size(); ++i) ga[i] -= 0.5 * self_a[i];
    for (size_t j = 0; j < b.size(); ++j) gb[j] -= 0.5 * self_b[j];
  }
  s.result.gradient_a = std::move(ga);
  s.result.gradient_b = std::move(gb);
  return std::move(s.result);
}

}  // namespace ptot
