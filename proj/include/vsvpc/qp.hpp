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

#include <limits>
#include <vector>

#include "vsvpc/core.hpp"

namespace vsvpc {

// Dense convex QP
//   min 1/2 x^T H x + g^T x   s.t.  A x >= b
// solved with the Goldfarb-Idnani dual active-set method: start at the
// unconstrained minimum, add the most violated constraint, take primal/dual
// steps, drop constraints whose multiplier would go negative. Deterministic
// (ties broken by lowest row index), no feasible starting point needed,
// infeasibility detected when neither a primal nor a dual step exists.

struct QuadraticProgram {
  MatX H;  // n x n, SPD
  VecX g;  // n
  MatX A;  // m x n, rows are constraint normals
  VecX b;  // m

  Eigen::Index num_vars() const { return H.rows(); }
  Eigen::Index num_constraints() const { return A.rows(); }
};

enum class QPStatus { kOptimal, kInfeasible, kIterationLimit };

struct QPResult {
  QPStatus status = QPStatus::kOptimal;
  VecX x;
  VecX lambda;  // multipliers, zero on inactive rows
  double objective = 0.0;
  int iterations = 0;
};

inline QPResult solve_qp(const QuadraticProgram& qp) {
  const Eigen::Index n = qp.num_vars();
  const Eigen::Index m = qp.num_constraints();
  require(qp.H.rows() == n && qp.H.cols() == n, "solve_qp: H must be square");
  require(qp.g.size() == n, "solve_qp: g size mismatch");
  require(qp.A.cols() == n || m == 0, "solve_qp: A column mismatch");
  require(qp.b.size() == m, "solve_qp: b size mismatch");

  Eigen::LLT<MatX> chol(qp.H);
  require(chol.info() == Eigen::Success, "solve_qp: Hessian is not SPD");

  QPResult res;
  res.x = -chol.solve(qp.g);
  res.lambda = VecX::Zero(m);
  if (m == 0) {
    res.objective = 0.5 * res.x.dot(qp.H * res.x) + qp.g.dot(res.x);
    return res;
  }

  std::vector<Eigen::Index> active;
  VecX u(0);  // multipliers of the active set, aligned with `active`

  const double scale = std::max(1.0, qp.A.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * scale * std::max(1.0, res.x.cwiseAbs().maxCoeff() + 1.0);
  const int max_iter = 50 * static_cast<int>(m + n);

  auto violation = [&](Eigen::Index i) {
    return qp.A.row(i).dot(res.x) - qp.b[i];
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    // Most violated inactive constraint.
    Eigen::Index p = -1;
    double worst = -tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      bool is_active = false;
      for (Eigen::Index j : active) {
        if (j == i) {
          is_active = true;
          break;
        }
      }
      if (is_active) continue;
      const double v = violation(i);
      if (v < worst) {
        worst = v;
        p = i;
      }
    }
    if (p < 0) {
      for (std::size_t j = 0; j < active.size(); ++j) {
        res.lambda[active[j]] = u[static_cast<Eigen::Index>(j)];
      }
      res.objective = 0.5 * res.x.dot(qp.H * res.x) + qp.g.dot(res.x);
      res.iterations = iter;
      return res;
    }

    const VecX n_p = qp.A.row(p).transpose();
    double u_p = 0.0;

    // Inner loop: step toward constraint p, dropping blockers as needed.
    while (true) {
      ++res.iterations;
      const auto k = static_cast<Eigen::Index>(active.size());
      const VecX Ginv_np = chol.solve(n_p);
      VecX r(k);
      VecX z;
      if (k > 0) {
        MatX N(n, k);
        for (Eigen::Index j = 0; j < k; ++j) {
          N.col(j) = qp.A.row(active[static_cast<std::size_t>(j)]).transpose();
        }
        const MatX GinvN = chol.solve(N);
        const MatX M = N.transpose() * GinvN;
        r = M.ldlt().solve(N.transpose() * Ginv_np);
        z = Ginv_np - GinvN * r;
      } else {
        z = Ginv_np;
      }

      const double znorm = z.norm();
      const double zdot = z.dot(n_p);

      // Dual step bound.
      double t1 = std::numeric_limits<double>::infinity();
      Eigen::Index blocker = -1;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (r[j] > 1e-12) {
          const double cand = u[j] / r[j];
          if (cand < t1) {
            t1 = cand;
            blocker = j;
          }
        }
      }

      // Primal step to satisfy constraint p.
      double t2 = std::numeric_limits<double>::infinity();
      if (znorm > 1e-12 && zdot > 1e-14) {
        t2 = -violation(p) / zdot;
      }

      const double t = std::min(t1, t2);
      if (!std::isfinite(t)) {
        res.status = QPStatus::kInfeasible;
        for (std::size_t j = 0; j < active.size(); ++j) {
          res.lambda[active[j]] = u[static_cast<Eigen::Index>(j)];
        }
        return res;
      }

      if (std::isfinite(t2)) res.x += t * z;
      for (Eigen::Index j = 0; j < k; ++j) u[j] -= t * r[j];
      u_p += t;

      if (t == t2 && std::isfinite(t2) && t2 <= t1) {
        // Full step: p becomes active.
        active.push_back(p);
        VecX u_new(k + 1);
        u_new.head(k) = u;
        u_new[k] = u_p;
        u = u_new;
        break;
      }
      // Partial (or pure dual) step: drop the blocking constraint.
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(blocker));
      VecX u_new(k - 1);
      Eigen::Index w = 0;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (j != blocker) u_new[w++] = u[j];
      }
      u = u_new;
    }
  }
  res.status = QPStatus::kIterationLimit;
  res.objective = 0.5 * res.x.dot(qp.H * res.x) + qp.g.dot(res.x);
  return res;
}

// KKT residuals, used by the test suite.
struct KKTResiduals {
  double stationarity = 0.0;   // ||Hx + g - A^T lambda||_inf
  double feasibility = 0.0;    // max(0, max_i (b_i - a_i^T x))
  double complementarity = 0.0;  // max_i |lambda_i (a_i^T x - b_i)|
};

inline KKTResiduals kkt_residuals(const QuadraticProgram& qp, const QPResult& r) {
  KKTResiduals out;
  VecX grad = qp.H * r.x + qp.g;
  if (qp.num_constraints() > 0) grad -= qp.A.transpose() * r.lambda;
  out.stationarity = grad.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < qp.num_constraints(); ++i) {
    const double slack = qp.A.row(i).dot(r.x) - qp.b[i];
    out.feasibility = std::max(out.feasibility, -slack);
    out.complementarity =
        std::max(out.complementarity, std::abs(r.lambda[i] * slack));
  }
  return out;
}

}  // namespace vsvpc
