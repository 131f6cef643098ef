#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "nlg/calculus.hpp"

namespace nlg {

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;  // ||b - A x||_2 / max(||b||_2, tiny)
  bool converged = false;
};

// Conjugate gradient on the mean-zero subspace of a dense symmetric PSD
// matrix whose kernel is spanned by constants.  Right-hand sides are
// deflated (mean removed) before the solve, so the system is definite on
// the working subspace.  Fully deterministic: fixed starting point, fixed
// operation order.
inline CgResult cg_mean_zero(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                             double tol, int max_iter) {
  const int m = static_cast<int>(b.size());
  const auto deflate = [m](Eigen::VectorXd& v) {
    v.array() -= v.mean();
    (void)m;
  };
  Eigen::VectorXd rhs = b;
  deflate(rhs);
  const double bnorm = std::max(rhs.norm(), 1e-300);

  CgResult out;
  out.x = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) / bnorm <= tol) break;
    Eigen::VectorXd ap = a * p;
    deflate(ap);  // guard against drift out of the subspace
    const double alpha = rr / p.dot(ap);
    out.x += alpha * p;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    out.iterations = it + 1;
  }
  deflate(out.x);
  out.residual = (rhs - a * out.x).norm() / bnorm;
  out.converged = out.residual <= 10.0 * tol;
  return out;
}

struct PoissonOptions {
  double tol = 1e-10;
  int max_iter_per_node = 50;  // max CG iterations = this * M
};

struct PoissonResult {
  Field u;  // mean-zero solution, channel by channel
  int max_iterations = 0;
  double max_residual = 0.0;
  bool converged = true;
};

// Solve Lambda_s u = f on the mean-zero subspace, channel by channel.
// f is implicitly deflated; the operator's kernel (constants) makes the
// mean-zero representative the natural solution.
inline PoissonResult solve_frac_poisson(const Field& f, double s,
                                        const PoissonOptions& opt = {}) {
  const int m = f.M();
  const Eigen::MatrixXd a = assemble_frac_lap_matrix(f.grid, s);
  PoissonResult out;
  out.u = Field(f.grid, f.rows, f.cols);
  for (int p = 0; p < f.rows; ++p)
    for (int q = 0; q < f.cols; ++q) {
      Eigen::VectorXd b(m);
      for (int i = 0; i < m; ++i) b[i] = f[i](p, q);
      // The matrix acts in plain coordinates while the natural pairing is
      // h-weighted; the uniform weight drops out of the linear system.
      const CgResult cg =
          cg_mean_zero(a, b, opt.tol, opt.max_iter_per_node * m);
      for (int i = 0; i < m; ++i) out.u[i](p, q) = cg.x[i];
      out.max_iterations = std::max(out.max_iterations, cg.iterations);
      out.max_residual = std::max(out.max_residual, cg.residual);
      out.converged = out.converged && cg.converged;
    }
  return out;
}

struct HodgeParts {
  Field a;        // mean-zero potential
  OdForm b;       // divergence-free remainder  B = G - d_s a
  double energy_total = 0.0;     // ||G||^2
  double energy_gradient = 0.0;  // ||d_s a||^2
  double energy_remainder = 0.0; // ||B||^2
  double solver_residual = 0.0;
  int solver_iterations = 0;
  bool converged = true;
};

// Orthogonal splitting G = d_s a + B with div_s B = 0 up to solver
// tolerance: a solves Lambda_s a = div_s G.  Orthogonality of the parts in
// the pair measure follows from adjointness, so the Pythagoras identity
// energy_total = energy_gradient + energy_remainder holds to rounding plus
// solver tolerance.
inline HodgeParts hodge_decompose(const OdForm& g, double s,
                                  const PoissonOptions& opt = {}) {
  const Field rhs = div_s(g, s);
  const PoissonResult pr = solve_frac_poisson(rhs, s, opt);
  HodgeParts out;
  out.a = pr.u;
  out.b = g - d_s(pr.u, s);
  out.energy_total = odform_inner(g, g);
  const OdForm da = d_s(pr.u, s);
  out.energy_gradient = odform_inner(da, da);
  out.energy_remainder = odform_inner(out.b, out.b);
  out.solver_residual = pr.max_residual;
  out.solver_iterations = pr.max_iterations;
  out.converged = pr.converged;
  return out;
}

// Oscillation max_i |u_i| ... for mean-zero scalars this is the natural
// size measure of the potential; for matrix channels use the Frobenius norm
// per node.
inline double field_sup(const Field& u) {
  double m = 0.0;
  for (int i = 0; i < u.M(); ++i) m = std::max(m, u[i].cwiseAbs().maxCoeff());
  return m;
}

// osc(u) = max_i u_i - min_i u_i, entrywise max over channels.
inline double field_oscillation(const Field& u) {
  double osc = 0.0;
  for (int p = 0; p < u.rows; ++p)
    for (int q = 0; q < u.cols; ++q) {
      double lo = u[0](p, q), hi = u[0](p, q);
      for (int i = 1; i < u.M(); ++i) {
        lo = std::min(lo, u[i](p, q));
        hi = std::max(hi, u[i](p, q));
      }
      osc = std::max(osc, hi - lo);
    }
  return osc;
}

}  // namespace nlg
