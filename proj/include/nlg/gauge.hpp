#pragma once

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "nlg/hodge.hpp"
#include "nlg/norms.hpp"

namespace nlg {

struct GaugeConfig {
  double sigma_check = 0.1;   // smallness threshold on ||Omega||
  double fp_tol = 1e-11;      // fixed-point stop: ||d eps||_inf + [d eps]
  int fp_max_iter = 50;
  double rot_step = 1.0;      // initial Armijo step for the SO(N) descent
  double rot_tol = 1e-9;      // target on ||div_{1/2} Omega^P||_{l2(h)}
  int rot_max_iter = 400;     // cap on the energy-descent phase
  double hodge_tol = 1e-12;   // CG tolerance inside Hodge / Poisson solves

  void validate() const {
    if (!(sigma_check > 0 && fp_tol > 0 && rot_step > 0 && rot_tol > 0 &&
          hodge_tol > 0))
      throw std::invalid_argument("GaugeConfig: tolerances must be positive");
    if (fp_max_iter < 1 || rot_max_iter < 1)
      throw std::invalid_argument("GaugeConfig: iteration caps must be >= 1");
  }
};

// Gauge-transformed coefficient for a rotation field P:
//   Omega^P = 1/2 ( d_{1/2}P (P^T(y) + P^T(x))
//                   - P(x) Omega P^T(y) - P(y) Omega P^T(x) ).
// Matrix antisymmetry is identically inherited from Omega and the
// P(x)P^T(y) - P(y)P^T(x) structure.
inline OdForm omega_p(const Field& p, const OdForm& omega) {
  require_same_grid(p.grid, omega.grid, "omega_p");
  const int n = p.rows;
  if (p.cols != n || omega.rows != n || omega.cols != n)
    throw std::invalid_argument("omega_p: shape mismatch");
  OdForm out(p.grid, n, n);
  const auto& r = p.grid->r;
  for (int i = 0; i < p.M(); ++i)
    for (int j = 0; j < p.M(); ++j) {
      if (j == i) continue;
      const double rho = 1.0 / std::sqrt(r(i, j));
      out.blk(i, j) =
          0.5 * ((p[i] - p[j]) * rho * (p[j].transpose() + p[i].transpose()) -
                 p[i] * omega.blk(i, j) * p[j].transpose() -
                 p[j] * omega.blk(i, j) * p[i].transpose());
    }
  return out;
}

// Residual kernel of the gauge rewrite:
//   R_eps = 1/2 (I + eps(x)) ( (P(x)-P(y))(P^T(x)-P^T(y)) / r^{1/2}
//                              - P(x) Omega (P^T(x) - P^T(y))
//                              + (P(x) - P(y)) Omega P^T(x) ) P(y).
// Together with Omega^P it makes the rewrite identity
//   A Omega - d_{1/2}A = -(I+eps(x)) Omega^P P(y) - d_{1/2}eps P(y) + R_eps
// exact for A = (I + eps) P.
inline OdForm r_epsilon(const Field& eps, const Field& p, const OdForm& omega) {
  require_same_grid(p.grid, omega.grid, "r_epsilon");
  require_same_grid(p.grid, eps.grid, "r_epsilon");
  const int n = p.rows;
  if (eps.rows != n || eps.cols != n || omega.rows != n || omega.cols != n)
    throw std::invalid_argument("r_epsilon: shape mismatch");
  OdForm out(p.grid, n, n);
  const auto& r = p.grid->r;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < p.M(); ++i)
    for (int j = 0; j < p.M(); ++j) {
      if (j == i) continue;
      const double rho = 1.0 / std::sqrt(r(i, j));
      const Eigen::MatrixXd dp = p[i] - p[j];
      const Eigen::MatrixXd dpt = p[i].transpose() - p[j].transpose();
      out.blk(i, j) = 0.5 * (id + eps[i]) *
                      (dp * dpt * rho - p[i] * omega.blk(i, j) * dpt +
                       dp * omega.blk(i, j) * p[i].transpose()) *
                      p[j];
    }
  return out;
}

// Kernel A(x) Omega(x,y) - d_{1/2}A(x,y) for a matrix field A.
inline OdForm twisted_gradient(const Field& a, const OdForm& omega) {
  require_same_grid(a.grid, omega.grid, "twisted_gradient");
  OdForm out(a.grid, a.rows, omega.cols);
  const auto& r = a.grid->r;
  for (int i = 0; i < a.M(); ++i)
    for (int j = 0; j < a.M(); ++j) {
      if (j == i) continue;
      const double rho = 1.0 / std::sqrt(r(i, j));
      out.blk(i, j) = a[i] * omega.blk(i, j) - (a[i] - a[j]) * rho;
    }
  return out;
}

// Dual norm of a divergence-type field d (channelwise):
//   sqrt( <d, Lambda_{s}^{-1} d>_h ),
// the natural size of d as a functional on mean-zero test fields with unit
// gradient energy.  d is deflated channelwise; for divergences the means
// vanish identically.
inline double dual_divergence_norm(const Field& d, double s,
                                   double tol = 1e-12) {
  const Eigen::MatrixXd lam = assemble_frac_lap_matrix(d.grid, s);
  const int m = d.M();
  double acc = 0.0;
  for (int p = 0; p < d.rows; ++p)
    for (int q = 0; q < d.cols; ++q) {
      Eigen::VectorXd b(m);
      for (int i = 0; i < m; ++i) b[i] = d[i](p, q);
      const CgResult cg = cg_mean_zero(lam, b, tol, 100 * m);
      Eigen::VectorXd bz = b;
      bz.array() -= bz.mean();
      acc += std::max(0.0, bz.dot(cg.x)) * d.grid->h;
    }
  return std::sqrt(acc);
}

struct RotationGauge {
  Field p;                 // SO(N)-valued gauge
  OdForm w;                // Omega^P at the returned P
  double div_residual = 0.0;       // ||div_{1/2} Omega^P||_{l2(h)}
  double div_residual_dual = 0.0;  // dual-norm version
  std::vector<double> energy_history;
  std::vector<double> div_history;  // divergence-polish residual trace
  int iterations = 0;
  bool converged = true;
  double seminorm_ratio = 0.0;     // [P]_{W^{1/2,2}} / ||Omega||
};

namespace gauge_detail {

inline double rotation_energy(const OdForm& w) {
  return 0.5 * odform_inner(w, w);
}

// Riemannian gradient of a functional of W = Omega^P under left so(N)
// perturbations P_k -> (I + t theta) P_k, given the cotangent kernel V
// with  dF = sum_{i != j} <V_ij, dW_ij>_F.  Each pair contributes to both
// endpoints; the trace identities <V, theta X> = <theta, V X^T> and
// <V, X theta^T> = <theta, V^T X> turn the chain rule into the closed
// forms below.  theta_k is the skew part of the collected differential.
inline std::vector<Eigen::MatrixXd> gradient_from_cotangent(
    const Field& p, const OdForm& omega, const OdForm& v) {
  const int m = p.M();
  const int n = p.rows;
  const auto& r = p.grid->r;
  std::vector<Eigen::MatrixXd> grad(static_cast<std::size_t>(m),
                                    Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double rho = 1.0 / std::sqrt(r(i, j));
      const Eigen::MatrixXd vij = v.blk(i, j);
      const Eigen::MatrixXd om = omega.blk(i, j);
      const Eigen::MatrixXd s = (p[i] - p[j]) * rho;
      // differential with respect to the first argument P_i
      grad[static_cast<std::size_t>(i)] +=
          0.5 * (rho * vij * (p[j] + p[i]) * p[i].transpose() +
                 vij.transpose() * s * p[i].transpose() -
                 vij * p[j] * om.transpose() * p[i].transpose() -
                 vij.transpose() * p[j] * om * p[i].transpose());
      // differential with respect to the second argument P_j
      grad[static_cast<std::size_t>(j)] +=
          0.5 * (-rho * vij * (p[j] + p[i]) * p[j].transpose() +
                 vij.transpose() * s * p[j].transpose() -
                 vij.transpose() * p[i] * om * p[j].transpose() -
                 vij * p[i] * om.transpose() * p[j].transpose());
    }
  for (auto& g : grad) g = (0.5 * (g - g.transpose().eval())).eval();
  return grad;
}

// Gradient of E(P) = 1/2 sum mu ||Omega^P||_F^2: cotangent V = mu W.
inline std::vector<Eigen::MatrixXd> rotation_gradient(const Field& p,
                                                      const OdForm& omega,
                                                      const OdForm& w) {
  OdForm v(p.grid, w.rows, w.cols);
  const auto& mu = p.grid->mu;
  for (int i = 0; i < p.M(); ++i)
    for (int j = 0; j < p.M(); ++j)
      if (j != i) v.blk(i, j) = mu(i, j) * w.blk(i, j);
  return gradient_from_cotangent(p, omega, v);
}

// Directional derivative of W_ij when the perturbation theta acts at the
// first (x) or second (y) argument of the pair.
inline Eigen::MatrixXd dw_pair_first(const Field& p, const OdForm& omega,
                                     int i, int j,
                                     const Eigen::MatrixXd& theta) {
  const double rho = 1.0 / std::sqrt(p.grid->r(i, j));
  const Eigen::MatrixXd s = (p[i] - p[j]) * rho;
  return 0.5 * (theta * p[i] * rho * (p[j] + p[i]).transpose() +
                s * p[i].transpose() * theta.transpose() -
                theta * p[i] * omega.blk(i, j) * p[j].transpose() -
                p[j] * omega.blk(i, j) * p[i].transpose() *
                    theta.transpose());
}

inline Eigen::MatrixXd dw_pair_second(const Field& p, const OdForm& omega,
                                      int i, int j,
                                      const Eigen::MatrixXd& theta) {
  const double rho = 1.0 / std::sqrt(p.grid->r(i, j));
  const Eigen::MatrixXd s = (p[i] - p[j]) * rho;
  return 0.5 * (-theta * p[j] * rho * (p[j] + p[i]).transpose() +
                s * p[j].transpose() * theta.transpose() -
                p[i] * omega.blk(i, j) * p[j].transpose() *
                    theta.transpose() -
                theta * p[j] * omega.blk(i, j) * p[i].transpose());
}

// Basis of so(N): E_ab - E_ba for a < b, in row-major (a,b) order.
inline std::vector<Eigen::MatrixXd> so_basis(int n) {
  std::vector<Eigen::MatrixXd> basis;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
      t(a, b) = 1.0;
      t(b, a) = -1.0;
      basis.push_back(t);
    }
  return basis;
}

// Nearest rotation (polar factor); keeps drift at rounding level after
// repeated retractions.
inline Eigen::MatrixXd reorthonormalize(const Eigen::MatrixXd& p) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      p, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace gauge_detail

// Coulomb-type rotation gauge: find SO(N)-valued P with div_{1/2}Omega^P
// as small as possible.  Two phases:
//   1. Riemannian gradient descent on E(P) = 1/2 ||Omega^P||^2 with
//      exponential retraction P_k <- exp(-t theta_k) P_k and Armijo
//      backtracking (first step in {rot_step * 2^-m} with sufficient
//      decrease), starting at P = I.  This finds the energy-critical
//      gauge but leaves an O(||Omega||^2) divergence floor.
//   2. Levenberg-Marquardt on the residual F(P) = 1/2 h sum ||div W||^2
//      with the analytic Jacobian over so(N) node perturbations, which
//      drives the divergence to rot_tol.
inline RotationGauge coulomb_rotation_gauge(const OdForm& omega,
                                            const GaugeConfig& cfg = {}) {
  cfg.validate();
  const int n = omega.rows;
  if (omega.cols != n)
    throw std::invalid_argument("coulomb_rotation_gauge: omega not square");
  const int m = omega.M();
  RotationGauge out;
  out.p = Field(omega.grid, n, n);
  for (int i = 0; i < m; ++i)
    out.p[i] = Eigen::MatrixXd::Identity(n, n);

  const double omega_norm = odform_norm_l2(omega);
  out.w = omega_p(out.p, omega);
  double energy = gauge_detail::rotation_energy(out.w);
  out.energy_history.push_back(energy);
  const double h = omega.grid->h;

  if (n >= 2 && omega_norm > 0.0) {
    // Phase 1: energy descent.
    for (int it = 0; it < cfg.rot_max_iter; ++it) {
      const auto theta =
          gauge_detail::rotation_gradient(out.p, omega, out.w);
      double g2 = 0.0;
      for (const auto& t : theta) g2 += t.squaredNorm();
      if (std::sqrt(g2) <= 1e-12) break;

      bool accepted = false;
      double step = cfg.rot_step;
      for (int back = 0; back < 40; ++back, step *= 0.5) {
        Field cand = out.p;
        for (int k = 0; k < m; ++k)
          cand[k] = gauge_detail::reorthonormalize(
              ((-step * theta[static_cast<std::size_t>(k)]).exp() *
               out.p[k])
                  .eval());
        const OdForm wc = omega_p(cand, omega);
        const double ec = gauge_detail::rotation_energy(wc);
        if (ec <= energy - 1e-4 * step * g2) {
          out.p = cand;
          out.w = wc;
          energy = ec;
          accepted = true;
          break;
        }
      }
      out.iterations = it + 1;
      out.energy_history.push_back(energy);
      if (!accepted) break;  // no productive step length left
    }

    // Phase 2: divergence polish.
    const auto basis = gauge_detail::so_basis(n);
    const int q = static_cast<int>(basis.size());
    const auto& r = omega.grid->r;
    const auto& kappa = omega.grid->kappa;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (j != i) c(i, j) = std::pow(r(i, j), -0.5) * h * kappa(i, j);

    const auto div_of = [&](const OdForm& w) { return div_s(w, 0.5); };
    const auto res_norm = [&](const Field& d) {
      return norm_lp_field(d, 2.0);
    };

    Field d = div_of(out.w);
    double res = res_norm(d);
    out.div_history.push_back(res);
    double lambda = 1e-6;
    const double sqh = std::sqrt(h);
    for (int it = 0; it < 60 && res > cfg.rot_tol; ++it) {
      // residual vector and Jacobian over (node, basis) parameters
      Eigen::VectorXd rv(m * n * n);
      for (int i = 0; i < m; ++i)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            rv[(i * n + a) * n + b] = sqh * d[i](a, b);
      Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m * n * n, m * q);
      for (int k = 0; k < m; ++k)
        for (int al = 0; al < q; ++al) {
          const int col = k * q + al;
          for (int j = 0; j < m; ++j) {
            if (j == k) continue;
            const Eigen::MatrixXd delta =
                c(k, j) *
                (gauge_detail::dw_pair_first(out.p, omega, k, j,
                                             basis[static_cast<std::size_t>(
                                                 al)]) -
                 gauge_detail::dw_pair_second(out.p, omega, j, k,
                                              basis[static_cast<std::size_t>(
                                                  al)]));
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b) {
                jac((k * n + a) * n + b, col) += sqh * delta(a, b);
                jac((j * n + a) * n + b, col) -= sqh * delta(a, b);
              }
          }
        }
      const Eigen::MatrixXd hmat = jac.transpose() * jac;
      const Eigen::VectorXd g = jac.transpose() * rv;
      const double diag_scale = std::max(hmat.diagonal().maxCoeff(), 1e-300);

      bool accepted = false;
      for (int trial = 0; trial < 30; ++trial) {
        Eigen::MatrixXd reg = hmat;
        reg.diagonal().array() += lambda * diag_scale;
        const Eigen::VectorXd delta = reg.ldlt().solve(-g);
        Field cand = out.p;
        for (int k = 0; k < m; ++k) {
          Eigen::MatrixXd th = Eigen::MatrixXd::Zero(n, n);
          for (int al = 0; al < q; ++al)
            th += delta[k * q + al] * basis[static_cast<std::size_t>(al)];
          cand[k] = gauge_detail::reorthonormalize(
              (th.exp() * out.p[k]).eval());
        }
        const OdForm wc = omega_p(cand, omega);
        const Field dc = div_of(wc);
        const double rc = res_norm(dc);
        if (rc < res) {
          out.p = cand;
          out.w = wc;
          d = dc;
          res = rc;
          lambda = std::max(lambda * 0.25, 1e-14);
          accepted = true;
          break;
        }
        lambda *= 10.0;
      }
      out.div_history.push_back(res);
      if (!accepted) break;
    }
    out.converged = res <= cfg.rot_tol;
  }

  const Field divw = div_s(out.w, 0.5);
  out.div_residual = norm_lp_field(divw, 2.0);
  out.div_residual_dual = dual_divergence_norm(divw, 0.5, cfg.hodge_tol);
  if (omega_norm > 0.0)
    out.seminorm_ratio = sobolev_seminorm(out.p, 0.5, 2.0) / omega_norm;
  return out;
}

struct FixedPointStep {
  Field eps_next;
  Field a;
  OdForm b;
  double solver_residual = 0.0;
  bool converged = true;
};

namespace gauge_detail {

// Kernel F(x,y) * P^T(y).
inline OdForm times_pt_y(const OdForm& f, const Field& p) {
  OdForm out(f.grid, f.rows, p.rows);
  for (int i = 0; i < f.M(); ++i)
    for (int j = 0; j < f.M(); ++j)
      if (j != i) out.blk(i, j) = f.blk(i, j) * p[j].transpose();
  return out;
}

// Kernel (I + eps(x)) F(x,y).
inline OdForm times_one_plus_eps_x(const Field& eps, const OdForm& f) {
  OdForm out(f.grid, eps.rows, f.cols);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(eps.rows, eps.cols);
  for (int i = 0; i < f.M(); ++i)
    for (int j = 0; j < f.M(); ++j)
      if (j != i) out.blk(i, j) = (id + eps[i]) * f.blk(i, j);
  return out;
}

}  // namespace gauge_detail

// One sweep of the perturbation update.  The rewrite kernel
//   G = -(I + eps(x)) Omega^P P(y) - d_{1/2}eps P(y) + R_eps
// (equal to A Omega - d_{1/2}A for A = (I+eps)P) is Hodge-split into
// d_{1/2}a + B, and the next perturbation solves
//   -Lambda_{1/2} tau = div_{1/2}(B P^T(y)) + div_{1/2}((I+eps(x)) Omega^P)
//                       - div_{1/2}(R_eps P^T(y))
// with the mean-zero representative standing in for decay at infinity.
inline FixedPointStep fixed_point_step(const Field& eps,
                                       const RotationGauge& rotation,
                                       const OdForm& omega,
                                       const GaugeConfig& cfg = {}) {
  cfg.validate();
  if (!eps.finite())
    throw std::invalid_argument("fixed_point_step: eps not finite");
  const Field& p = rotation.p;
  const OdForm& w = rotation.w;

  const OdForm lhs = [&] {
    // assemble -(I+eps(x)) W P(y) - d_{1/2}eps P(y) + R_eps
    const OdForm deps = d_s(eps, 0.5);
    OdForm wpy(w.grid, w.rows, w.cols);
    OdForm depspy(w.grid, w.rows, w.cols);
    for (int i = 0; i < w.M(); ++i)
      for (int j = 0; j < w.M(); ++j) {
        if (j == i) continue;
        wpy.blk(i, j) = w.blk(i, j) * p[j];
        depspy.blk(i, j) = deps.blk(i, j) * p[j];
      }
    const OdForm first = gauge_detail::times_one_plus_eps_x(eps, wpy);
    OdForm out = r_epsilon(eps, p, omega);
    out -= first;
    out -= depspy;
    return out;
  }();

  const PoissonOptions popt{cfg.hodge_tol, 100};
  FixedPointStep out;
  const HodgeParts hp = hodge_decompose(lhs, 0.5, popt);
  out.a = hp.a;
  out.b = hp.b;
  out.solver_residual = hp.solver_residual;
  out.converged = hp.converged;

  Field rhs = div_s(gauge_detail::times_pt_y(out.b, p), 0.5);
  rhs += div_s(gauge_detail::times_one_plus_eps_x(eps, w), 0.5);
  rhs -= div_s(gauge_detail::times_pt_y(r_epsilon(eps, p, omega), p), 0.5);

  rhs *= -1.0;
  const PoissonResult pr = solve_frac_poisson(rhs, 0.5, popt);
  out.eps_next = pr.u;
  out.solver_residual = std::max(out.solver_residual, pr.max_residual);
  out.converged = out.converged && pr.converged;
  return out;
}

struct GaugeResult {
  RotationGauge rotation;
  Field eps;
  Field a;
  OdForm b;
  Field big_a;          // A = (I + eps) P
  OdForm omega_a;       // A Omega - d_{1/2}A
  double div_residual_a = 0.0;       // l2(h) norm of div_{1/2} Omega^A
  double div_residual_a_dual = 0.0;  // dual-norm report
  double osc_a = 0.0;
  std::vector<double> contraction_ratios;
  std::vector<double> delta_history;
  double ratio_seminorm_a = 0.0;  // [A] / ||Omega||
  double ratio_sup_a = 0.0;       // ||A||_inf / (1 + ||Omega||)
  double ratio_sup_eps = 0.0;     // ||eps||_inf / ||Omega||
  double omega_a_minus_b = 0.0;   // ||Omega^A - B||
  double min_abs_det_a = 0.0;
  int iterations = 0;
  bool smallness_ok = true;
  bool converged = false;
  bool diverged = false;
};

// Full gauge construction: rotation descent, then Banach-style iteration of
// the perturbation update from eps = 0 until
// ||d eps||_inf + [d eps]_{W^{1/2,2}} < fp_tol.
inline GaugeResult build_gauge(const OdForm& omega, const GaugeConfig& cfg = {}) {
  cfg.validate();
  const int n = omega.rows;
  const double omega_norm = odform_norm_l2(omega);

  GaugeResult out;
  out.smallness_ok = omega_norm <= cfg.sigma_check;
  out.rotation = coulomb_rotation_gauge(omega, cfg);

  out.eps = Field(omega.grid, n, n);
  double prev_delta = -1.0;
  for (int it = 0; it < cfg.fp_max_iter; ++it) {
    const FixedPointStep step = fixed_point_step(out.eps, out.rotation, omega, cfg);
    const Field delta = step.eps_next - out.eps;
    const double dnorm =
        field_sup(delta) + sobolev_seminorm(delta, 0.5, 2.0);
    out.delta_history.push_back(dnorm);
    if (prev_delta > 0.0)
      out.contraction_ratios.push_back(dnorm / prev_delta);
    prev_delta = dnorm;
    out.eps = step.eps_next;
    out.a = step.a;
    out.b = step.b;
    out.iterations = it + 1;
    if (dnorm < cfg.fp_tol) {
      out.converged = true;
      break;
    }
    if (!std::isfinite(dnorm) ||
        (it >= 2 && dnorm > 10.0 * out.delta_history.front())) {
      out.diverged = true;
      break;
    }
  }
  if (!out.converged && !out.diverged) {
    // cap reached; growing steps at the end mean non-contraction
    const std::size_t k = out.contraction_ratios.size();
    out.diverged = k >= 2 && out.contraction_ratios[k - 1] >= 1.0 &&
                   out.contraction_ratios[k - 2] >= 1.0;
  }

  out.big_a = Field(omega.grid, n, n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < omega.M(); ++i)
    out.big_a[i] = (id + out.eps[i]) * out.rotation.p[i];
  out.omega_a = twisted_gradient(out.big_a, omega);

  const Field div_oa = div_s(out.omega_a, 0.5);
  out.div_residual_a = norm_lp_field(div_oa, 2.0);
  out.div_residual_a_dual =
      dual_divergence_norm(div_oa, 0.5, cfg.hodge_tol);
  out.osc_a = field_oscillation(out.a);
  if (omega_norm > 0.0) {
    out.ratio_seminorm_a = sobolev_seminorm(out.big_a, 0.5, 2.0) / omega_norm;
    out.ratio_sup_eps = field_sup(out.eps) / omega_norm;
  }
  out.ratio_sup_a = field_sup(out.big_a) / (1.0 + omega_norm);
  out.omega_a_minus_b = odform_norm_l2(out.omega_a - out.b);
  out.min_abs_det_a = std::abs(out.big_a[0].determinant());
  for (int i = 1; i < omega.M(); ++i)
    out.min_abs_det_a =
        std::min(out.min_abs_det_a, std::abs(out.big_a[i].determinant()));
  return out;
}

}  // namespace nlg
