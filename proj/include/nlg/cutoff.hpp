#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlg/system.hpp"

namespace nlg {

// Radii A_k = (e^{e^k} - 1)^{-1/2}; double-exponentially decreasing.
inline double cutoff_radius(int k) {
  const double e = std::exp(static_cast<double>(k));
  if (e > 700.0) throw std::invalid_argument("cutoff_radius: k too large");
  return 1.0 / std::sqrt(std::expm1(e));
}

struct CutoffSequence {
  int k = 1;
  double rho = 0.0;  // plateau radius A_{k+1}
  double big_r = 0.0;  // support radius A_k
  std::vector<double> x;      // geometric evaluation grid (cell centers)
  std::vector<double> w;      // cell widths
  std::vector<double> zeta;   // cut-off values
  double seminorm = 0.0;      // [zeta_k]_{W^{1/2,2}(R)}
};

// The double-well profile f(x) = log log(1 + 1/x^2), clipped to [0,1]
// around level k:  zeta_k = clamp(f - k, 0, 1).  Then zeta_k = 1 on
// |x| <= A_{k+1} and zeta_k = 0 on |x| >= A_k.
inline double cutoff_profile(double xx, int k) {
  if (xx == 0.0) return 1.0;
  const double f = std::log(std::log1p(1.0 / (xx * xx)));
  return std::min(1.0, std::max(0.0, f - static_cast<double>(k)));
}

// Evaluate zeta_k on a sign-symmetric geometric grid spanning
// [A_{k+1} * 1e-3, 4 A_k] (plus the inner plateau cell) and compute the
// Gagliardo 1/2-seminorm by midpoint quadrature of the double integral,
// with the analytic outer tail 1/(X - x) + 1/(X + x) added for |y| > 4A_k.
// The grid must be geometric: the radii decay double-exponentially, so no
// uniform grid can host all three transition layers.
inline CutoffSequence loglog_cutoff(int k, int refinement = 200) {
  if (k < 1) throw std::invalid_argument("loglog_cutoff: k must be >= 1");
  if (k > 3)
    throw std::invalid_argument(
        "loglog_cutoff: k > 3 underflows the plateau radius in double "
        "precision");
  if (refinement < 8)
    throw std::invalid_argument("loglog_cutoff: refinement too small");

  CutoffSequence out;
  out.k = k;
  out.rho = cutoff_radius(k + 1);
  out.big_r = cutoff_radius(k);

  const double a0 = 1e-3 * out.rho;
  const double xmax = 4.0 * out.big_r;
  const int decades = static_cast<int>(
      std::ceil(std::log10(xmax / a0)));
  const int cells = decades * refinement;
  const double ratio = std::pow(xmax / a0, 1.0 / cells);

  // boundaries b_0 = a0 < ... < b_cells = xmax, mirrored to negative x;
  // inner plateau cell [-a0, a0]
  std::vector<double> bnd(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) bnd[static_cast<std::size_t>(i)] = a0 * std::pow(ratio, i);
  const auto push_cell = [&out, k](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    out.x.push_back(mid);
    out.w.push_back(hi - lo);
    out.zeta.push_back(cutoff_profile(std::abs(mid), k));
  };
  for (int i = cells; i >= 1; --i) push_cell(-bnd[static_cast<std::size_t>(i)], -bnd[static_cast<std::size_t>(i) - 1]);
  push_cell(-a0, a0);
  for (int i = 0; i < cells; ++i) push_cell(bnd[static_cast<std::size_t>(i)], bnd[static_cast<std::size_t>(i) + 1]);

  const std::size_t n = out.x.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dz = out.zeta[i] - out.zeta[j];
      if (dz == 0.0) continue;
      const double dx = out.x[i] - out.x[j];
      acc += dz * dz / (dx * dx) * out.w[i] * out.w[j];
    }
    // diagonal cell: integrand ~ zeta'(x)^2, estimated from neighbors
    if (i > 0 && i + 1 < n) {
      const double dzdx =
          (out.zeta[i + 1] - out.zeta[i - 1]) / (out.x[i + 1] - out.x[i - 1]);
      acc += dzdx * dzdx * out.w[i] * out.w[i];
    }
    // analytic tail against the zero region |y| > xmax
    if (out.zeta[i] > 0.0) {
      const double z2 = out.zeta[i] * out.zeta[i];
      acc += 2.0 * z2 *
             (1.0 / (xmax - out.x[i]) + 1.0 / (xmax + out.x[i])) * out.w[i];
    }
  }
  out.seminorm = std::sqrt(acc);
  return out;
}

// Contiguous node-index windows D1 within D2 within D.
struct Windows {
  int d_lo = 0, d_hi = 0;    // D  = [d_lo, d_hi]  (inclusive)
  int d2_lo = 0, d2_hi = 0;  // D2
  int d1_lo = 0, d1_hi = 0;  // D1

  void validate(int m) const {
    const bool ordered = 0 <= d_lo && d_lo < d2_lo && d2_lo < d1_lo &&
                         d1_lo <= d1_hi && d1_hi < d2_hi && d2_hi < d_hi &&
                         d_hi < m;
    if (!ordered)
      throw std::invalid_argument(
          "Windows: need strict nesting D1 within D2 within D within grid");
  }
  bool in_d2(int i) const { return i >= d2_lo && i <= d2_hi; }
  bool in_d1(int i) const { return i >= d1_lo && i <= d1_hi; }
};

struct LocalizationParts {
  Field v;              // eta * u
  OdForm omega_tilde;   // coefficient restricted to D2 x D2
  double restricted_norm = 0.0;      // ||Omega~||
  double restriction_bound = 0.0;    // ||Omega|| on pairs touching D2
  std::vector<double> g_direct;      // defect functional per test field
  std::vector<double> g_four_term;   // G1+G2+G3+G4 per test field
  std::vector<double> g1, g2, g3, g4;
  double match_defect = 0.0;         // max |direct - four-term|
  double equation_residual = 0.0;    // how well u solves the global system
  bool equation_ok = true;           // four-term identity only valid then
};

// Localization of the system by cut-off multiplication: v = eta u solves
//   Lambda_{1/2} v = Omega~ . d_{1/2}v + eta f + G(u, .)
// with the remainder evaluated two ways for each test field phi:
//  - directly:  G = <d v, d phi>_mu - <Omega~ . d v, phi>_h - <eta f, phi>_h
//  - as the exact four-term split (all sums over ordered pairs, weight mu):
//      G1 = sum (eta_i - eta_j)(u_j.phi_i - u_i.phi_j) / r      (cut-off
//           commutator with the gradient pairing)
//      G2 = sum_{i in D2, j notin D2} eta_i (Omega_ij u_i).phi_i r^{-1/2}
//           (boundary coupling carrying the interior value)
//      G3 = -sum_{i in D2, j notin D2} eta_i (Omega_ij u_j).phi_i r^{-1/2}
//           (boundary coupling carrying the exterior value)
//      G4 = -sum_{i,j in D2} (eta_i - eta_j) (Omega_ij u_j).phi_i r^{-1/2}
//           (coefficient against the cut-off gradient)
// The two evaluations agree identically whenever u solves the unlocalized
// system; the match defect is reported (and skipped when u does not solve).
inline LocalizationParts localize(const Field& u, const OdForm& omega,
                                  const Field& f, const Windows& win,
                                  const Field& eta,
                                  const std::vector<Field>& panel,
                                  double eq_tol = 1e-10) {
  require_same_grid(u.grid, omega.grid, "localize");
  require_same_grid(u.grid, eta.grid, "localize");
  win.validate(u.M());
  if (eta.rows != 1 || eta.cols != 1)
    throw std::invalid_argument("localize: eta must be scalar");
  for (int i = 0; i < u.M(); ++i)
    if (!win.in_d1(i) && eta.s(i) != 0.0)
      throw std::invalid_argument("localize: eta must vanish outside D1");

  const int m = u.M();
  const int n = u.rows;
  LocalizationParts out;

  out.v = Field(u.grid, n, 1);
  for (int i = 0; i < m; ++i) out.v[i] = eta.s(i) * u[i];

  out.omega_tilde = OdForm(u.grid, n, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && win.in_d2(i) && win.in_d2(j))
        out.omega_tilde.blk(i, j) = omega.blk(i, j);
  out.restricted_norm = odform_norm_l2(out.omega_tilde);
  std::vector<int> d2_nodes;
  for (int i = win.d2_lo; i <= win.d2_hi; ++i) d2_nodes.push_back(i);
  out.restriction_bound = norm_odform_lp(omega, 2.0, d2_nodes);

  // global equation residual (the identity needs a true solution)
  Field eqres = frac_laplacian(u, 0.5);
  eqres -= apply_omega(omega, u);
  eqres -= f;
  out.equation_residual = field_sup(eqres);
  const double uscale = std::max(1.0, field_sup(u));
  out.equation_ok = out.equation_residual <= eq_tol * uscale;

  const OdForm dv = d_s(out.v, 0.5);
  const Field coupling = odform_dot(out.omega_tilde, dv);
  Field etaf(u.grid, n, 1);
  for (int i = 0; i < m; ++i) etaf[i] = eta.s(i) * f[i];

  const auto& mu = u.grid->mu;
  const auto& r = u.grid->r;
  for (const Field& phi : panel) {
    const double direct = odform_inner(dv, d_s(phi, 0.5)) -
                          field_inner(coupling, phi) -
                          field_inner(etaf, phi);
    out.g_direct.push_back(direct);
    if (!out.equation_ok) continue;

    double g1 = 0.0, g2 = 0.0, g3 = 0.0, g4 = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        const double de = eta.s(i) - eta.s(j);
        if (de != 0.0)
          g1 += de *
                (u[j].col(0).dot(phi[i].col(0)) -
                 u[i].col(0).dot(phi[j].col(0))) /
                r(i, j) * mu(i, j);
        const double rho = 1.0 / std::sqrt(r(i, j));
        if (win.in_d2(i) && !win.in_d2(j)) {
          const Eigen::VectorXd oui = omega.blk(i, j) * u[i].col(0);
          const Eigen::VectorXd ouj = omega.blk(i, j) * u[j].col(0);
          g2 += eta.s(i) * oui.dot(phi[i].col(0)) * rho * mu(i, j);
          g3 -= eta.s(i) * ouj.dot(phi[i].col(0)) * rho * mu(i, j);
        }
        if (win.in_d2(i) && win.in_d2(j) && de != 0.0) {
          const Eigen::VectorXd ouj = omega.blk(i, j) * u[j].col(0);
          g4 -= de * rho * ouj.dot(phi[i].col(0)) * mu(i, j);
        }
      }
    out.g1.push_back(g1);
    out.g2.push_back(g2);
    out.g3.push_back(g3);
    out.g4.push_back(g4);
    const double four = g1 + g2 + g3 + g4;
    out.g_four_term.push_back(four);
    out.match_defect = std::max(out.match_defect, std::abs(direct - four));
  }
  return out;
}

// Smooth bump supported on the node window [lo, hi]: zero at and outside
// the window edges, one at the center.
inline Field window_bump(const GridPtr& g, int lo, int hi) {
  Field eta(g, 1, 1);
  const double a = g->x[lo];
  const double b = g->x[hi];
  for (int i = lo; i <= hi; ++i) {
    const double t = (g->x[i] - a) / (b - a);  // in [0, 1]
    const double s = t * (1.0 - t);
    eta.s(i) = s > 0.0 ? std::exp(1.0 - 0.25 / s) : 0.0;
  }
  return eta;
}

}  // namespace nlg
