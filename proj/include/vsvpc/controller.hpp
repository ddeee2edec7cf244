// Copyright 2026 The vsvpc Authors
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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsvpc/core.hpp"
#include "vsvpc/gpr.hpp"
#include "vsvpc/kinematics.hpp"
#include "vsvpc/qp.hpp"
#include "vsvpc/safety.hpp"
#include "vsvpc/vision.hpp"

namespace vsvpc {

// Receding-horizon visual predictive controller. Each sample solves one
// convex QP in the stacked input sequence (plus CBF slack): the image
// Jacobian is frozen over the horizon, GP compensation and covariances are
// evaluated along the previous solution's trajectory, and the quadratic
// barrier / norm-type chance constraints are linearized about it (one
// real-time iteration per sample).

enum class ControllerVariant {
  kClassical,
  kVisionSafe,
  kVisionSafeEnhanced,
  kFullyTracking,
};

inline std::string to_string(ControllerVariant v) {
  switch (v) {
    case ControllerVariant::kClassical: return "Classical";
    case ControllerVariant::kVisionSafe: return "VisionSafe";
    case ControllerVariant::kVisionSafeEnhanced: return "VisionSafeEnhanced";
    case ControllerVariant::kFullyTracking: return "FullyTracking";
  }
  return "?";
}

inline std::optional<ControllerVariant> variant_from_string(const std::string& s) {
  if (s == "Classical") return ControllerVariant::kClassical;
  if (s == "VisionSafe") return ControllerVariant::kVisionSafe;
  if (s == "VisionSafeEnhanced") return ControllerVariant::kVisionSafeEnhanced;
  if (s == "FullyTracking") return ControllerVariant::kFullyTracking;
  return std::nullopt;
}

struct VPCConfig {
  int Np = 10;  // prediction horizon
  int Nc = 5;   // control horizon, <= Np
  Mat2 Q = Mat2::Identity();
  Mat6 R = 0.1 * Mat6::Identity();
  double dt = 0.05;
  CBFParams cbf;
  ChanceParams chance;
  double slack_weight = 0.0;  // 0 -> 1e6 * max(Q)

  double effective_slack_weight() const {
    return slack_weight > 0.0 ? slack_weight : 1e6 * Q.cwiseAbs().maxCoeff();
  }

  void validate() const {
    require(Np >= Nc && Nc >= 1, "VPCConfig: need Np >= Nc >= 1");
    require(dt > 0.0, "VPCConfig: dt must be > 0");
    Eigen::LLT<Mat6> llt(R);
    require(llt.info() == Eigen::Success, "VPCConfig: R must be PD");
    cbf.validate();
    chance.validate();
  }
};

// Everything build_problem needs besides the config: the frozen model, the
// safe set, and the previous-solution trajectory the constraints are
// linearized about.
struct ModelBundle {
  Mat26 J_s = Mat26::Zero();
  FovDisc fov;
  NoiseParams noise;
  Vec6 qdot_min = Vec6::Constant(-1.0);
  Vec6 qdot_max = Vec6::Constant(1.0);
  Vec6 q_min = Vec6::Constant(-2.967);
  Vec6 q_max = Vec6::Constant(2.967);
  std::vector<Vec2> mu;        // Np GP means along the horizon (zero if no GP)
  std::vector<double> sigmas;  // Np+1 spectral std-devs, sigmas[0] = current
  std::vector<Mat2> covs;      // Np+1 propagated covariances
  std::vector<Vec2> lin_means;   // Np+1 linearization means, [0] = belief mean
  std::vector<Vec6> lin_inputs;  // Nc linearization inputs
};

struct VPCProblem {
  QuadraticProgram qp;
  int Np = 0;
  int Nc = 0;
  bool has_slack = false;
  Mat26 PJ;                 // dt * J_s
  std::vector<Vec2> c;      // Np+1 input-free predicted means
  std::vector<Mat2> covs;   // Np+1
  ControllerVariant variant = ControllerVariant::kClassical;
};

struct ControlSolution {
  enum class Status { kOptimal, kSlackActive, kInfeasibleFallback };
  std::vector<Vec6> qdot_sequence;        // Nc
  std::vector<ImageFeature> predicted_means;  // Np
  std::vector<Mat2> predicted_covs;           // Np
  VecX slack;  // Np (empty when the variant has no CBF rows)
  Status status = Status::kOptimal;
  QPResult qp_result;
};

namespace detail {

// Number of prediction steps i in 1..Np whose state depends on input j.
inline int coupling_count(int Np, int j) { return Np - j; }

}  // namespace detail

inline VPCProblem build_problem(const BeliefState& belief, const JointState& q,
                                const ImageFeature& target,
                                const ModelBundle& bundle, const VPCConfig& cfg,
                                ControllerVariant variant) {
  cfg.validate();
  require(all_finite(belief.mean.vec()) && all_finite(q.q),
          "build_problem: non-finite state");
  const int Np = cfg.Np;
  const int Nc = cfg.Nc;
  require(static_cast<int>(bundle.mu.size()) >= Np &&
              static_cast<int>(bundle.sigmas.size()) >= Np + 1 &&
              static_cast<int>(bundle.lin_means.size()) >= Np + 1 &&
              static_cast<int>(bundle.lin_inputs.size()) >= Nc,
          "build_problem: bundle horizon data too short");

  const bool has_cbf = variant == ControllerVariant::kVisionSafe ||
                       variant == ControllerVariant::kVisionSafeEnhanced;
  const bool has_chance = variant == ControllerVariant::kVisionSafeEnhanced;
  const bool has_gp = variant == ControllerVariant::kVisionSafeEnhanced;

  const Mat2 Q_eff = (variant == ControllerVariant::kFullyTracking)
                         ? Mat2(10.0 * cfg.Q)
                         : cfg.Q;

  VPCProblem prob;
  prob.Np = Np;
  prob.Nc = Nc;
  prob.has_slack = has_cbf;
  prob.variant = variant;
  prob.PJ = cfg.dt * bundle.J_s;

  // Input-free part of the mean recursion, c_i = s0 + sum_{j<i} B_d mu_j.
  prob.c.assign(static_cast<std::size_t>(Np) + 1, belief.mean.vec());
  for (int i = 1; i <= Np; ++i) {
    Vec2 add = Vec2::Zero();
    if (has_gp) add = bundle.noise.B_d * bundle.mu[static_cast<std::size_t>(i - 1)];
    prob.c[static_cast<std::size_t>(i)] = prob.c[static_cast<std::size_t>(i - 1)] + add;
  }
  prob.covs.assign(bundle.covs.begin(),
                   bundle.covs.begin() + static_cast<std::ptrdiff_t>(Np + 1));

  const int nu = 6 * Nc;
  const int n = nu + (has_cbf ? Np : 0);
  MatX H = MatX::Zero(n, n);
  VecX g = VecX::Zero(n);

  // Quadratic cost. Input block (j, k) couples through every prediction step
  // that both inputs feed; step i depends on inputs j < min(i, Nc). The
  // tracking error is predicted camera-only (no GP drift term): the setpoint
  // is itself a scene pixel and co-drifts with the feature, so residual
  // compensation enters the safety predictions, not the pursuit error.
  const Mat6 JQJ = prob.PJ.transpose() * Q_eff * prob.PJ;
  const Vec2 e0 = belief.mean.vec() - target.vec();
  for (int j = 0; j < Nc; ++j) {
    for (int k = 0; k < Nc; ++k) {
      const int count = detail::coupling_count(Np, std::max(j, k));
      H.block<6, 6>(6 * j, 6 * k) = 2.0 * count * JQJ;
    }
    H.block<6, 6>(6 * j, 6 * j) += 2.0 * cfg.R;
    g.segment<6>(6 * j) =
        2.0 * detail::coupling_count(Np, j) * (prob.PJ.transpose() * (Q_eff * e0));
  }
  if (has_cbf) {
    const double w = cfg.effective_slack_weight();
    for (int i = 0; i < Np; ++i) H(nu + i, nu + i) = 2.0 * w;
  }

  // Row builders. Prediction step i depends on inputs j < min(i, Nc) through
  // PJ; row_state(i) returns d s_i / d U as a 2 x nu block map.
  auto add_state_grad = [&](Eigen::Ref<Eigen::RowVectorXd> row, int i,
                            const Vec2& grad) {
    const int jmax = std::min(i, Nc);
    for (int j = 0; j < jmax; ++j) {
      row.segment<6>(6 * j) += grad.transpose() * prob.PJ;
    }
  };

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  auto push_row = [&](const Eigen::RowVectorXd& r, double b) {
    rows.push_back(r);
    rhs.push_back(b);
  };

  // Joint velocity boxes.
  for (int j = 0; j < Nc; ++j) {
    for (int k = 0; k < 6; ++k) {
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
      r[6 * j + k] = 1.0;
      push_row(r, bundle.qdot_min[k]);
      r[6 * j + k] = -1.0;
      push_row(r, -bundle.qdot_max[k]);
    }
  }
  // Joint position boxes over the horizon (Euler integration of q).
  for (int i = 1; i <= Np; ++i) {
    const int jmax = std::min(i, Nc);
    for (int k = 0; k < 6; ++k) {
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
      for (int j = 0; j < jmax; ++j) r[6 * j + k] = cfg.dt;
      push_row(r, bundle.q_min[k] - q.q[k]);
      for (int j = 0; j < jmax; ++j) r[6 * j + k] = -cfg.dt;
      push_row(r, q.q[k] - bundle.q_max[k]);
    }
  }

  if (has_cbf) {
    // Linearized barrier condition at every horizon step. VisionSafe uses the
    // plain barrier (sig = 0); the enhanced variant tightens by beta*sigma_i.
    CBFParams cbf = cfg.cbf;
    if (variant == ControllerVariant::kVisionSafe) cbf.beta = 0.0;
    auto sig_at = [&](int i) {
      return has_gp ? bundle.sigmas[static_cast<std::size_t>(i)] : 0.0;
    };
    // Both terms of each barrier-condition row share the successor step's
    // sigma (the single-z_k form). Giving each term its own step's sigma
    // makes the chain infeasible at rest whenever sigma grows along the
    // horizon, since the radius itself then shrinks faster than the
    // contraction allows.
    auto h_lin_const = [&](int i, double sig) {
      // Constant part of the linearized h_sigma at prediction step i.
      const Vec2 shat = bundle.lin_means[static_cast<std::size_t>(i)];
      const Vec2 a = -2.0 * (shat - bundle.fov.center.vec());
      const double h0 = h_sigma(ImageFeature::from(shat), sig, bundle.fov, cbf);
      return h0 + a.dot(prob.c[static_cast<std::size_t>(i)] - shat);
    };
    for (int i = 1; i <= Np; ++i) {
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
      const double sig = sig_at(i);
      const Vec2 shat_i = bundle.lin_means[static_cast<std::size_t>(i)];
      const Vec2 a_i = -2.0 * (shat_i - bundle.fov.center.vec());
      add_state_grad(r, i, a_i);
      double cst = h_lin_const(i, sig);
      if (i == 1) {
        cst -= (1.0 - cbf.alpha) * h_sigma(belief.mean, sig, bundle.fov, cbf);
      } else {
        const Vec2 shat_p = bundle.lin_means[static_cast<std::size_t>(i - 1)];
        const Vec2 a_p = -2.0 * (shat_p - bundle.fov.center.vec());
        add_state_grad(r, i - 1, -(1.0 - cbf.alpha) * a_p);
        cst -= (1.0 - cbf.alpha) * h_lin_const(i - 1, sig);
      }
      r[nu + (i - 1)] = 1.0;  // slack enters CBF rows only
      push_row(r, -cst);
    }
    // Slack nonnegativity.
    for (int i = 0; i < Np; ++i) {
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
      r[nu + i] = 1.0;
      push_row(r, 0.0);
    }
  }

  if (has_chance) {
    const double kappa_s = gaussian_quantile(cfg.chance.p_s);
    const double kappa_u = gaussian_quantile(cfg.chance.p_u);
    Eigen::SelfAdjointEigenSolver<Mat6> es(
        0.5 * (cfg.chance.input_cov + cfg.chance.input_cov.transpose()));
    const double sigma_u = std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
    const double tol_dir = 1e-9;

    // State rows: ||s_i - s_c|| <= r - kappa_s * sigma_i, linearized along
    // the unit direction of the previous-solution mean. Rows whose bound is
    // unreachable within the horizon's input authority are dropped for this
    // solve; a state beyond the tightened set is recovered by the remaining
    // rows and the barrier instead of an infeasible program.
    const double u_cap = std::min(
        cfg.chance.input_radius,
        std::max(bundle.qdot_max.cwiseAbs().maxCoeff(),
                 bundle.qdot_min.cwiseAbs().maxCoeff()));
    const double step_reach = prob.PJ.jacobiSvd().singularValues()(0) * u_cap;
    const double dist_now = (belief.mean.vec() - bundle.fov.center.vec()).norm();
    for (int i = 1; i <= Np; ++i) {
      const double bound =
          bundle.fov.radius - kappa_s * bundle.sigmas[static_cast<std::size_t>(i)];
      const double reach_i = static_cast<double>(std::min(i, Nc)) * step_reach;
      if (dist_now - reach_i > bound) continue;  // unreachable at this step
      const Vec2 dir = bundle.lin_means[static_cast<std::size_t>(i)] -
                       bundle.fov.center.vec();
      const double dn = dir.norm();
      if (dn <= tol_dir) {
        if (bound < 0.0) {  // unsatisfiable at any position
          Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
          push_row(r, 1.0);
        }
        continue;
      }
      const Vec2 nhat = dir / dn;
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
      add_state_grad(r, i, -nhat);
      const double cst =
          nhat.dot(prob.c[static_cast<std::size_t>(i)] - bundle.fov.center.vec());
      push_row(r, cst - bound);
    }
    // Input rows: ||u_j - u_c|| <= r_u - kappa_u * sigma_u.
    const double bound_u = cfg.chance.input_radius - kappa_u * sigma_u;
    for (int j = 0; j < Nc; ++j) {
      const Vec6 dir = bundle.lin_inputs[static_cast<std::size_t>(j)] -
                       cfg.chance.input_center;
      const double dn = dir.norm();
      if (dn <= tol_dir) {
        if (bound_u < 0.0) {
          Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
          push_row(r, 1.0);
        }
        continue;
      }
      const Vec6 mhat = dir / dn;
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
      r.segment<6>(6 * j) = -mhat.transpose();
      push_row(r, -bound_u - mhat.dot(cfg.chance.input_center));
    }
  }

  prob.qp.H = H;
  prob.qp.g = g;
  prob.qp.A.resize(static_cast<Eigen::Index>(rows.size()), n);
  prob.qp.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    prob.qp.A.row(static_cast<Eigen::Index>(i)) = rows[i];
    prob.qp.b[static_cast<Eigen::Index>(i)] = rhs[i];
  }
  return prob;
}

inline ControlSolution solve(const VPCProblem& prob) {
  ControlSolution sol;
  const int nu = 6 * prob.Nc;
  sol.qp_result = solve_qp(prob.qp);
  const bool failed = sol.qp_result.status != QPStatus::kOptimal;

  VecX x;
  if (failed) {
    x = VecX::Zero(prob.qp.num_vars());
    sol.status = ControlSolution::Status::kInfeasibleFallback;
  } else {
    x = sol.qp_result.x;
    sol.status = ControlSolution::Status::kOptimal;
  }

  sol.qdot_sequence.resize(static_cast<std::size_t>(prob.Nc));
  for (int j = 0; j < prob.Nc; ++j) {
    sol.qdot_sequence[static_cast<std::size_t>(j)] = x.segment<6>(6 * j);
  }
  if (prob.has_slack) {
    sol.slack = x.tail(prob.Np);
    if (!failed && sol.slack.maxCoeff() > 1e-7) {
      sol.status = ControlSolution::Status::kSlackActive;
    }
  } else {
    sol.slack = VecX::Zero(prob.Np);
  }

  sol.predicted_means.resize(static_cast<std::size_t>(prob.Np));
  sol.predicted_covs.resize(static_cast<std::size_t>(prob.Np));
  Vec2 acc = Vec2::Zero();
  for (int i = 1; i <= prob.Np; ++i) {
    if (i <= prob.Nc) acc += prob.PJ * sol.qdot_sequence[static_cast<std::size_t>(i - 1)];
    sol.predicted_means[static_cast<std::size_t>(i - 1)] =
        ImageFeature::from(prob.c[static_cast<std::size_t>(i)] + acc);
    sol.predicted_covs[static_cast<std::size_t>(i - 1)] =
        prob.covs[static_cast<std::size_t>(i)];
  }
  return sol;
}

struct Observation {
  ImageFeature s_meas;
  JointState q;
  Mat26 J_s = Mat26::Zero();
  double depth = 1.0;
};

struct StepDiagnostics {
  double h = 0.0;        // barrier at the measured feature
  double h_sigma = 0.0;  // tightened barrier at the one-step predicted mean
  double cbc = 0.0;      // first predicted barrier-condition value
  double sigma_s = 0.0;  // one-step predicted spectral std-dev
  double slack = 0.0;
  int status = 0;  // 0 optimal, 1 slack active, 2 infeasible fallback
  Vec2 s_bar = Vec2::Zero();  // one-step predicted mean under the applied input
};

class Controller {
 public:
  Controller(ControllerVariant variant, VPCConfig cfg, FovDisc fov,
             NoiseParams noise, const RobotModel& robot, ImageFeature target)
      : variant_(variant), cfg_(std::move(cfg)), fov_(fov), noise_(noise),
        target_(target) {
    cfg_.validate();
    fov_.validate();
    noise_.validate();
    limits_min_ = robot.joint_vel_min;
    limits_max_ = robot.joint_vel_max;
    pos_min_ = robot.joint_min;
    pos_max_ = robot.joint_max;
    warm_.assign(static_cast<std::size_t>(cfg_.Nc), Vec6::Zero());
  }

  ControllerVariant variant() const { return variant_; }
  const VPCConfig& config() const { return cfg_; }
  const GPModel& gp() const { return gp_; }
  void set_gp(GPModel model) { gp_ = std::move(model); }
  void set_target(const ImageFeature& t) { target_ = t; }
  const ImageFeature& target() const { return target_; }
  const Vec6& last_command() const { return u_prev_; }

  /// Online residual update (sliding window). Only the GP-backed variant
  /// conditions on it; calls on other variants are ignored.
  void observe_residual(const GPInput& z, const Vec2& y, std::size_t window) {
    if (variant_ != ControllerVariant::kVisionSafeEnhanced) return;
    gp_ = window_update(gp_, z, y, window);
  }

  /// One receding-horizon sample: builds the variant QP about the shifted
  /// previous solution, solves it, applies the first input.
  Vec6 step(const Observation& obs, StepDiagnostics* diag = nullptr) {
    require(all_finite(obs.s_meas.vec()) && all_finite(obs.q.q) &&
                all_finite(obs.J_s) && std::isfinite(obs.depth),
            "Controller::step: non-finite observation");
    const bool has_gp = variant_ == ControllerVariant::kVisionSafeEnhanced;

    BeliefState belief;
    belief.mean = obs.s_meas;
    belief.cov = Mat2::Zero();

    ModelBundle bundle;
    bundle.J_s = obs.J_s;
    bundle.fov = fov_;
    bundle.noise = noise_;
    bundle.qdot_min = limits_min_;
    bundle.qdot_max = limits_max_;
    bundle.q_min = pos_min_;
    bundle.q_max = pos_max_;

    // Shifted warm start.
    const auto Nc = static_cast<std::size_t>(cfg_.Nc);
    const auto Np = static_cast<std::size_t>(cfg_.Np);
    std::vector<Vec6> shifted(Nc, Vec6::Zero());
    for (std::size_t j = 0; j + 1 < Nc; ++j) shifted[j] = warm_[j + 1];
    bundle.lin_inputs = shifted;

    // Roll the nominal model along the shifted inputs to get linearization
    // means, GP compensation, and propagated covariances.
    bundle.mu.assign(Np, Vec2::Zero());
    bundle.sigmas.assign(Np + 1, 0.0);
    bundle.covs.assign(Np + 1, Mat2::Zero());
    bundle.lin_means.assign(Np + 1, belief.mean.vec());
    Mat2 Sigma = belief.cov;
    bundle.sigmas[0] = sigma_s(Sigma);
    bundle.covs[0] = Sigma;
    ImageFeature s_roll = belief.mean;
    for (std::size_t i = 0; i < Np; ++i) {
      const Vec6 u_i = i < Nc ? shifted[i] : Vec6::Zero();
      Vec2 mu = Vec2::Zero();
      Mat2 var = Mat2::Zero();
      if (has_gp) {
        const Vec6 z_u = (i == 0) ? u_prev_ : u_i;
        gp_.predict(gp_input(s_roll, z_u), mu, var);
        // Extrapolated posterior means can spike far beyond any observed
        // residual; cap the compensation at the kernel's plausible range.
        const double cap = std::sqrt(gp_.hyperparams().sigma_f2);
        mu = mu.cwiseMax(-cap).cwiseMin(cap);
        bundle.mu[i] = mu;
      }
      s_roll = mean_predict(BeliefState{s_roll, Sigma}, u_i, obs.J_s, mu,
                            noise_, cfg_.dt);
      Sigma = cov_propagate(Sigma, var, noise_);
      bundle.lin_means[i + 1] = s_roll.vec();
      bundle.sigmas[i + 1] = sigma_s(Sigma);
      bundle.covs[i + 1] = Sigma;
    }

    ControlSolution sol;
    try {
      const VPCProblem prob =
          build_problem(belief, obs.q, target_, bundle, cfg_, variant_);
      sol = solve(prob);
    } catch (const std::exception&) {
      sol.status = ControlSolution::Status::kInfeasibleFallback;
      sol.qdot_sequence.assign(Nc, Vec6::Zero());
      sol.predicted_means.assign(Np, belief.mean);
      sol.predicted_covs.assign(Np, Mat2::Zero());
      sol.slack = VecX::Zero(static_cast<Eigen::Index>(Np));
    }

    warm_ = sol.qdot_sequence;
    u_prev_ = sol.qdot_sequence.empty() ? Vec6::Zero() : sol.qdot_sequence[0];

    if (diag != nullptr) {
      CBFParams cbf = cfg_.cbf;
      if (variant_ == ControllerVariant::kVisionSafe) cbf.beta = 0.0;
      const double sig1 = has_gp ? bundle.sigmas[1] : 0.0;
      diag->h = h(obs.s_meas, fov_);
      diag->sigma_s = sig1;
      if (sol.predicted_means.empty()) {
        diag->h_sigma = h_sigma(belief.mean, sig1, fov_, cbf);
        diag->s_bar = belief.mean.vec();
      } else {
        diag->h_sigma = h_sigma(sol.predicted_means[0], sig1, fov_, cbf);
        diag->s_bar = sol.predicted_means[0].vec();
      }
      diag->cbc = diag->h_sigma -
                  (1.0 - cbf.alpha) * h_sigma(belief.mean, sig1, fov_, cbf);
      diag->slack = sol.slack.size() > 0 ? sol.slack.maxCoeff() : 0.0;
      switch (sol.status) {
        case ControlSolution::Status::kOptimal: diag->status = 0; break;
        case ControlSolution::Status::kSlackActive: diag->status = 1; break;
        case ControlSolution::Status::kInfeasibleFallback: diag->status = 2; break;
      }
    }
    return u_prev_;
  }

 private:
  ControllerVariant variant_;
  VPCConfig cfg_;
  FovDisc fov_;
  NoiseParams noise_;
  ImageFeature target_;
  Vec6 limits_min_, limits_max_, pos_min_, pos_max_;
  std::vector<Vec6> warm_;
  Vec6 u_prev_ = Vec6::Zero();
  GPModel gp_;
};

}  // namespace vsvpc
