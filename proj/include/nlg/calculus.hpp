#pragma once

#include <cmath>
#include <stdexcept>

#include "nlg/field.hpp"
#include "nlg/norms.hpp"

namespace nlg {

// d_s u(x,y) = (u(x) - u(y)) / |x-y|^s
inline OdForm d_s(const Field& u, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("d_s: need 0 < s < 1");
  OdForm out(u.grid, u.rows, u.cols);
  const auto& r = u.grid->r;
  for (int i = 0; i < u.M(); ++i)
    for (int j = 0; j < u.M(); ++j) {
      if (j == i) continue;
      out.blk(i, j) = (u[i] - u[j]) * std::pow(r(i, j), -s);
    }
  return out;
}

// Pointwise s-divergence, the exact adjoint of d_s under the discrete
// measures:  div_s F(x_i) = sum_{j != i} (F_ij - F_ji) r^{-s} h kappa(i,j),
// so that  <F, d_s phi>_mu = <div_s F, phi>_h  holds as an algebraic
// identity of the discretization.
inline Field div_s(const OdForm& f, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("div_s: need 0 < s < 1");
  Field out(f.grid, f.rows, f.cols);
  const auto& r = f.grid->r;
  const auto& kappa = f.grid->kappa;
  const double h = f.grid->h;
  std::vector<double> buf(static_cast<std::size_t>(f.M()));
  for (int i = 0; i < f.M(); ++i) {
    for (int a = 0; a < f.rows; ++a)
      for (int b = 0; b < f.cols; ++b) {
        std::size_t n = 0;
        for (int j = 0; j < f.M(); ++j) {
          if (j == i) continue;
          const double w = std::pow(r(i, j), -s) * h * kappa(i, j);
          buf[n++] = (f.blk(i, j)(a, b) - f.blk(j, i)(a, b)) * w;
        }
        out[i](a, b) = detail::pairwise_sum(buf.data(), n);
      }
  }
  return out;
}

// Distributional s-divergence: evaluation against a test field phi equals
// sum_{i,j} <F_ij, (d_s phi)_ij> mu(i,j).
struct WeakFunctional {
  OdForm f;
  double s = 0.5;

  // Test field must have the shape the contraction expects:
  // scalar kernel x scalar phi, or matching channels contracted Frobenius.
  double operator()(const Field& phi) const {
    return odform_inner(f, d_s(phi, s));
  }
};

inline WeakFunctional div_s_weak(const OdForm& f, double s) {
  return WeakFunctional{f, s};
}

// Lambda_s := div_s d_s, the artifact's fractional Laplacian (the
// constant-free div/grad composition).
inline Field frac_laplacian(const Field& u, double s) {
  return div_s(d_s(u, s), s);
}

// Dense symmetric matrix of Lambda_s acting on scalar grid functions.
// Row sums are zero (constants in the kernel); PSD in the h-weighted
// inner product.
inline Eigen::MatrixXd assemble_frac_lap_matrix(const GridPtr& grid, double s) {
  const int m = grid->M;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  const auto& r = grid->r;
  const auto& kappa = grid->kappa;
  const double h = grid->h;
  for (int i = 0; i < m; ++i) {
    std::vector<double> buf(static_cast<std::size_t>(m));
    std::size_t n = 0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double c = 2.0 * std::pow(r(i, j), -2.0 * s) * h * kappa(i, j);
      a(i, j) = -c;
      buf[n++] = c;
    }
    a(i, i) = detail::pairwise_sum(buf.data(), n);
  }
  return a;
}

// Scalar product of two off-diagonal forms as a grid function:
// F.G(x_i) = sum_{j != i} F_ij G_ij h kappa(i,j), with the matrix case
// contracted row-times-column (A_{il} Omega_{lk}).
// Shapes: (r x c) . (c x c2) -> (r x c2) per node; scalars broadcast.
inline Field odform_dot(const OdForm& f, const OdForm& g) {
  require_same_grid(f.grid, g.grid, "odform_dot");
  const bool f_scalar = (f.rows == 1 && f.cols == 1);
  const bool g_scalar = (g.rows == 1 && g.cols == 1);
  int rows, cols;
  if (f_scalar && g_scalar) { rows = 1; cols = 1; }
  else if (f_scalar) { rows = g.rows; cols = g.cols; }
  else if (g_scalar) { rows = f.rows; cols = f.cols; }
  else if (f.cols == g.rows) { rows = f.rows; cols = g.cols; }
  else throw std::invalid_argument("odform_dot: incompatible channel shapes");

  Field out(f.grid, rows, cols);
  const auto& kappa = f.grid->kappa;
  const double h = f.grid->h;
  std::vector<double> buf(static_cast<std::size_t>(f.M()));
  for (int i = 0; i < f.M(); ++i) {
    for (int a = 0; a < rows; ++a)
      for (int b = 0; b < cols; ++b) {
        std::size_t n = 0;
        for (int j = 0; j < f.M(); ++j) {
          if (j == i) continue;
          double term;
          if (f_scalar && g_scalar)
            term = f.s(i, j) * g.s(i, j);
          else if (f_scalar)
            term = f.s(i, j) * g.blk(i, j)(a, b);
          else if (g_scalar)
            term = f.blk(i, j)(a, b) * g.s(i, j);
          else
            term = f.blk(i, j).row(a).dot(g.blk(i, j).col(b));
          buf[n++] = term * h * kappa(i, j);
        }
        out[i](a, b) = detail::pairwise_sum(buf.data(), n);
      }
  }
  return out;
}

// Gagliardo-Slobodeckij seminorm [u]_{W^{s,p}} = ||d_s u||_{L^p(od)}.
inline double sobolev_seminorm(const Field& u, double s, double p) {
  return norm_odform_lp(d_s(u, s), p);
}

enum class ProductRuleVariant { with_x, with_y };

// Max-norm defect of the product rules
//   div_s(F u(x)) = div_s(F) u + F* . d_s u
//   div_s(F u(y)) = div_s(F) u - F  . d_s u
// Exact discrete identities; the defect is rounding noise.
// F may be scalar or matrix (N x N); u scalar or vector (N), multiplied
// from the right in the matrix case.
inline double product_rule_defect(const OdForm& f, const Field& u, double s,
                                  ProductRuleVariant variant) {
  require_same_grid(f.grid, u.grid, "product_rule_defect");
  const bool f_scalar = (f.rows == 1 && f.cols == 1);
  if (!f_scalar && f.cols != u.rows)
    throw std::invalid_argument("product_rule_defect: incompatible shapes");

  // kernel F(x,y) * u(x) or F(x,y) * u(y)
  const int kr = f_scalar ? u.rows : f.rows;
  const int kc = u.cols;
  OdForm fu(f.grid, kr, kc);
  for (int i = 0; i < f.M(); ++i)
    for (int j = 0; j < f.M(); ++j) {
      if (j == i) continue;
      const auto& uu = (variant == ProductRuleVariant::with_x) ? u[i] : u[j];
      if (f_scalar)
        fu.blk(i, j) = f.s(i, j) * uu;
      else
        fu.blk(i, j) = f.blk(i, j) * uu;
    }

  const Field lhs = div_s(fu, s);
  const Field divf = div_s(f, s);
  Field rhs(u.grid, kr, kc);
  const OdForm du = d_s(u, s);
  Field coupling = (variant == ProductRuleVariant::with_x)
                       ? odform_dot(odform_star(f), du)
                       : odform_dot(f, du);
  for (int i = 0; i < u.M(); ++i) {
    Eigen::MatrixXd term = f_scalar ? (divf.s(i) * u[i]).eval()
                                    : (divf[i] * u[i]).eval();
    rhs[i] = (variant == ProductRuleVariant::with_x)
                 ? (term + coupling[i]).eval()
                 : (term - coupling[i]).eval();
  }

  double defect = 0.0;
  for (int i = 0; i < u.M(); ++i)
    defect = std::max(defect, (lhs[i] - rhs[i]).cwiseAbs().maxCoeff());
  return defect;
}

// |D_{s,q} u|(x_i) = (sum_{j != i} |u_i - u_j|^q r^{-sq} h kappa)^{1/q}
inline Field dsq_density(const Field& u, double s, double q) {
  if (!(s > 0.0 && s < 1.0) || !(q > 1.0))
    throw std::invalid_argument("dsq_density: need 0 < s < 1 and q > 1");
  Field out(u.grid, 1, 1);
  const auto& r = u.grid->r;
  const auto& kappa = u.grid->kappa;
  const double h = u.grid->h;
  std::vector<double> buf(static_cast<std::size_t>(u.M()));
  for (int i = 0; i < u.M(); ++i) {
    std::size_t n = 0;
    for (int j = 0; j < u.M(); ++j) {
      if (j == i) continue;
      buf[n++] = std::pow((u[i] - u[j]).norm(), q) *
                 std::pow(r(i, j), -s * q) * h * kappa(i, j);
    }
    out.s(i) = std::pow(detail::pairwise_sum(buf.data(), n), 1.0 / q);
  }
  return out;
}

}  // namespace nlg
