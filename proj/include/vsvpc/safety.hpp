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

#include "vsvpc/core.hpp"
#include "vsvpc/vision.hpp"

namespace vsvpc {

// FoV safety machinery: the circular safe set and its barrier function, the
// uncertainty-adaptive tightened barrier, belief propagation, and the
// Gaussian-quantile chance-constraint margins.

struct FovDisc {
  ImageFeature center;
  double radius = 100.0;  // [px]

  void validate() const { require(radius > 0.0, "FovDisc: radius must be > 0"); }
};

struct BeliefState {
  ImageFeature mean;
  Mat2 cov = Mat2::Zero();  // [px^2]
};

struct CBFParams {
  double alpha = 0.5;  // contraction rate, (0, 1]
  double beta = 1.0;   // uncertainty margin [px per std-dev], >= 0

  void validate() const {
    require(alpha > 0.0 && alpha <= 1.0, "CBFParams: alpha must be in (0, 1]");
    require(beta >= 0.0, "CBFParams: beta must be >= 0");
  }
};

struct ChanceParams {
  double p_s = 0.95;  // state confidence, (0.5, 1)
  double p_u = 0.95;  // input confidence, (0.5, 1)
  Vec6 input_center = Vec6::Zero();   // u_c, midpoint of the velocity set
  double input_radius = 1.0;          // r_u [rad/s]
  Mat6 input_cov = Mat6::Zero();      // Sigma_u, offline-calibrated, constant

  void validate() const {
    // p = 0.5 (zero quantile) is admitted as the degenerate no-tightening case.
    require(p_s >= 0.5 && p_s < 1.0, "ChanceParams: p_s must be in [0.5, 1)");
    require(p_u >= 0.5 && p_u < 1.0, "ChanceParams: p_u must be in [0.5, 1)");
    require(input_radius > 0.0, "ChanceParams: input_radius must be > 0");
  }
};

struct NoiseParams {
  double sigma_w2 = 0.0;        // process noise variance [px^2]
  Mat2 B_d = Mat2::Identity();  // disturbance distribution matrix

  void validate() const {
    require(sigma_w2 >= 0.0, "NoiseParams: sigma_w2 must be >= 0");
    require(std::abs(B_d.determinant()) > 1e-12, "NoiseParams: B_d must be full rank");
  }
};

/// Barrier of the FoV disc: h(s) = r^2 - ||s - s_c||^2. Nonnegative inside.
inline double h(const ImageFeature& s, const FovDisc& fov) {
  const double dist2 = (s.vec() - fov.center.vec()).squaredNorm();
  return fov.radius * fov.radius - dist2;
}

/// One-step mean predictor: s_{k+1} = s_k + dt * J_s * qdot + B_d * mu.
inline ImageFeature mean_predict(const BeliefState& b, const Vec6& qdot,
                                 const Mat26& J_s, const Vec2& mu,
                                 const NoiseParams& noise, double dt) {
  require(dt > 0.0, "mean_predict: dt must be > 0");
  const Vec2 next = b.mean.vec() + dt * (J_s * qdot) + noise.B_d * mu;
  return ImageFeature::from(next);
}

/// Covariance recursion: Sigma_{k+1} = Sigma_k + B_d (Sigma_d + sigma_w^2 I) B_d^T.
inline Mat2 cov_propagate(const Mat2& Sigma_k, const Mat2& Sigma_d,
                          const NoiseParams& noise) {
  const Mat2 inner = Sigma_d + noise.sigma_w2 * Mat2::Identity();
  Mat2 out = Sigma_k + noise.B_d * inner * noise.B_d.transpose();
  return 0.5 * (out + out.transpose());
}

/// Spectral image-space standard deviation: sqrt(lambda_max(Sigma)).
inline double sigma_s(const Mat2& Sigma) {
  require(all_finite(Sigma), "sigma_s: non-finite covariance");
  const Mat2 S = 0.5 * (Sigma + Sigma.transpose());
  const double mean = 0.5 * (S(0, 0) + S(1, 1));
  const double disc = std::sqrt(std::pow(0.5 * (S(0, 0) - S(1, 1)), 2) +
                                S(0, 1) * S(0, 1));
  const double lmin = mean - disc;
  const double lmax = mean + disc;
  if (lmin < -1e-9) {
    throw InvalidCovariance("sigma_s: covariance has a negative eigenvalue");
  }
  return std::sqrt(std::max(lmax, 0.0));
}

/// Uncertainty-adaptive barrier: (r - beta*sig)^2 - ||s - s_c||^2, with the
/// effective radius clamped at zero once beta*sig >= r (the disc is swallowed
/// by uncertainty; only the exact center has h_sigma = 0).
inline double h_sigma(const ImageFeature& s_bar, double sig, const FovDisc& fov,
                      const CBFParams& p) {
  require(sig >= 0.0, "h_sigma: sig must be >= 0");
  const double r_eff = std::max(fov.radius - p.beta * sig, 0.0);
  const double dist2 = (s_bar.vec() - fov.center.vec()).squaredNorm();
  return r_eff * r_eff - dist2;
}

/// Discrete barrier condition value: h_next - (1 - alpha) * h_now.
/// Nonnegative iff the contraction condition holds.
inline double cbc(double h_next, double h_now, const CBFParams& p) {
  return h_next - (1.0 - p.alpha) * h_now;
}

/// Inverse standard normal CDF. Acklam's rational approximation refined with
/// one Halley step against the erfc-based CDF; absolute error well below 1e-9.
inline double gaussian_quantile(double p) {
  require(std::isfinite(p) && p > 0.0 && p < 1.0,
          "gaussian_quantile: p must be in (0, 1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement: e = Phi(x) - p.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

/// Tightened state membership margin of Eq.-(19) form:
///   r - ||s - s_c|| - Phi^-1(p_s) * sig.  Nonnegative means satisfied.
inline double state_chance_margin(const ImageFeature& s_bar, double sig,
                                  const FovDisc& fov, const ChanceParams& cp) {
  require(sig >= 0.0, "state_chance_margin: sig must be >= 0");
  const double dist = (s_bar.vec() - fov.center.vec()).norm();
  return fov.radius - dist - gaussian_quantile(cp.p_s) * sig;
}

/// Tightened input ball margin:
///   r_u - ||u - u_c|| - Phi^-1(p_u) * sqrt(lambda_max(Sigma_u)).
inline double input_chance_margin(const Vec6& u_bar, const ChanceParams& cp) {
  Eigen::SelfAdjointEigenSolver<Mat6> es(
      0.5 * (cp.input_cov + cp.input_cov.transpose()));
  const double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  const double dist = (u_bar - cp.input_center).norm();
  return cp.input_radius - dist - gaussian_quantile(cp.p_u) * std::sqrt(lmax);
}

}  // namespace vsvpc
