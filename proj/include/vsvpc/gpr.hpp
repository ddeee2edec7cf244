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

#include <deque>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vsvpc/core.hpp"
#include "vsvpc/vision.hpp"

namespace vsvpc {

// GP regression of the residual disturbance d(s, qdot). Inputs live in the
// 8-D space z = [s (2 px); qdot (6 rad/s)]; the two pixel output dimensions
// are independent GPs sharing Z, the kernel and the Gram factorization.

using GPInput = Eigen::Matrix<double, 8, 1>;

inline GPInput gp_input(const ImageFeature& s, const Vec6& qdot) {
  GPInput z;
  z << s.u, s.v, qdot;
  return z;
}

struct GPHyperparams {
  double sigma_f2 = 0.1;  // signal variance of the SE kernel
  GPInput length_scales = GPInput::Constant(0.5);  // diagonal of L
  double sigma_n2 = 1e-4;  // observation noise variance

  void validate() const {
    require(sigma_f2 > 0.0, "GPHyperparams: sigma_f2 must be > 0");
    require((length_scales.array() > 0.0).all(),
            "GPHyperparams: length scales must be > 0");
    require(sigma_n2 >= 0.0, "GPHyperparams: sigma_n2 must be >= 0");
  }
};

/// Squared-exponential kernel
///   k(zi, zj) = sigma_f^2 * exp(-1/2 (zi-zj)^T L^-1 (zi-zj)).
inline double kernel(const GPInput& zi, const GPInput& zj,
                     const GPHyperparams& h) {
  const GPInput d = zi - zj;
  const double q = (d.array().square() / h.length_scales.array()).sum();
  return h.sigma_f2 * std::exp(-0.5 * q);
}

/// Residual target of one observed transition:
///   y = B_d^+ (s_{k+1} - s_k - dt * J_s * qdot).
inline Vec2 residual_target(const ImageFeature& s_k, const ImageFeature& s_k1,
                            const Vec6& qdot, const Mat26& J_s, double dt,
                            const Mat2& B_d) {
  require(dt > 0.0, "residual_target: dt must be > 0");
  const Vec2 raw = s_k1.vec() - s_k.vec() - dt * (J_s * qdot);
  return B_d.completeOrthogonalDecomposition().pseudoInverse() * raw;
}

struct GPDataset {
  std::deque<GPInput> Z;
  std::deque<Vec2> Y;

  std::size_t size() const { return Z.size(); }
  bool empty() const { return Z.empty(); }

  void push_back(const GPInput& z, const Vec2& y) {
    Z.push_back(z);
    Y.push_back(y);
  }
};

class GPModel {
 public:
  GPModel() = default;

  const GPDataset& dataset() const { return data_; }
  const GPHyperparams& hyperparams() const { return hyper_; }

  /// Conditions the model on a dataset: factorizes Lambda = K_ZZ + sigma_n^2 I
  /// and caches Lambda^-1 Y. An empty dataset yields the prior.
  static GPModel fit(const GPDataset& dataset, const GPHyperparams& h) {
    h.validate();
    GPModel m;
    m.data_ = dataset;
    m.hyper_ = h;
    const auto n = static_cast<Eigen::Index>(dataset.size());
    if (n == 0) return m;
    MatX K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double k = kernel(dataset.Z[static_cast<std::size_t>(i)],
                                dataset.Z[static_cast<std::size_t>(j)], h);
        K(i, j) = k;
        K(j, i) = k;
      }
    }
    K.diagonal().array() += h.sigma_n2;
    m.chol_.compute(K);
    if (m.chol_.info() != Eigen::Success) {
      throw IllConditionedModel("GPModel::fit: Lambda is not SPD");
    }
    MatX Ymat(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      Ymat.row(i) = dataset.Y[static_cast<std::size_t>(i)].transpose();
    }
    m.alpha_ = m.chol_.solve(Ymat);
    return m;
  }

  /// Posterior mean (per output dimension) and the shared predictive
  /// variance, returned as a diagonal 2x2 covariance. The variance is clamped
  /// to [0, sigma_f^2].
  void predict(const GPInput& z, Vec2& mu, Mat2& var) const {
    if (data_.empty()) {
      mu = Vec2::Zero();
      var = hyper_.sigma_f2 * Mat2::Identity();
      return;
    }
    const auto n = static_cast<Eigen::Index>(data_.size());
    VecX k(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      k[i] = kernel(z, data_.Z[static_cast<std::size_t>(i)], hyper_);
    }
    mu = (k.transpose() * alpha_).transpose();
    const double prior = kernel(z, z, hyper_);
    double v = prior - k.dot(chol_.solve(k));
    v = std::min(std::max(v, 0.0), hyper_.sigma_f2);
    var = v * Mat2::Identity();
  }

  Vec2 predict_mean(const GPInput& z) const {
    Vec2 mu;
    Mat2 var;
    predict(z, mu, var);
    return mu;
  }

 private:
  GPDataset data_;
  GPHyperparams hyper_;
  Eigen::LLT<MatX> chol_;
  MatX alpha_;  // Lambda^-1 Y, n x 2
};

/// Appends a pair, evicts the oldest entries beyond the window, and refits.
inline GPModel window_update(const GPModel& model, const GPInput& z_new,
                             const Vec2& y_new, std::size_t window) {
  require(window >= 1, "window_update: window must be >= 1");
  GPDataset data = model.dataset();
  data.push_back(z_new, y_new);
  while (data.size() > window) {
    data.Z.pop_front();
    data.Y.pop_front();
  }
  return GPModel::fit(data, model.hyperparams());
}

// --- CSV import/export (rows z1..z8,y1,y2) ---------------------------------

inline void save_dataset_csv(const GPDataset& data, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "save_dataset_csv: cannot open " + path);
  out << "z1,z2,z3,z4,z5,z6,z7,z8,y1,y2\n";
  out.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (int j = 0; j < 8; ++j) out << data.Z[i][j] << ',';
    out << data.Y[i][0] << ',' << data.Y[i][1] << '\n';
  }
}

inline GPDataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "load_dataset_csv: cannot open " + path);
  GPDataset data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'z') continue;  // header or blank
    std::istringstream ss(line);
    GPInput z;
    Vec2 y;
    std::string tok;
    for (int j = 0; j < 8; ++j) {
      require(static_cast<bool>(std::getline(ss, tok, ',')),
              "load_dataset_csv: short row");
      z[j] = std::stod(tok);
    }
    for (int j = 0; j < 2; ++j) {
      require(static_cast<bool>(std::getline(ss, tok, ',')),
              "load_dataset_csv: short row");
      y[j] = std::stod(tok);
    }
    data.push_back(z, y);
  }
  return data;
}

}  // namespace vsvpc
