#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nlg/cutoff.hpp"
#include "nlg/rng.hpp"

namespace {

using namespace nlg;

TEST(CutoffRadius, MatchesDirectFormulaAndDecays) {
  for (int k = 1; k <= 4; ++k) {
    const double e = std::exp(static_cast<double>(k));
    EXPECT_NEAR(cutoff_radius(k), 1.0 / std::sqrt(std::exp(e) - 1.0),
                1e-14 * cutoff_radius(k));
  }
  EXPECT_LT(cutoff_radius(2), 0.1 * cutoff_radius(1));
  EXPECT_LT(cutoff_radius(3), 2e-3 * cutoff_radius(2));
}

TEST(CutoffProfile, PlateauTransitionAndSupport) {
  for (int k = 1; k <= 3; ++k) {
    const double rho = cutoff_radius(k + 1);
    const double big_r = cutoff_radius(k);
    EXPECT_DOUBLE_EQ(cutoff_profile(0.0, k), 1.0);
    EXPECT_NEAR(cutoff_profile(rho, k), 1.0, 1e-12);
    EXPECT_NEAR(cutoff_profile(0.5 * rho, k), 1.0, 1e-15);
    EXPECT_NEAR(cutoff_profile(big_r, k), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(cutoff_profile(2.0 * big_r, k), 0.0);
    const double mid = std::sqrt(rho * big_r);
    const double z = cutoff_profile(mid, k);
    EXPECT_GT(z, 0.05);
    EXPECT_LT(z, 0.95);
    // monotone in |x| across the transition layer
    double prev = 1.0;
    for (int t = 0; t <= 40; ++t) {
      const double xx =
          rho * std::pow(big_r / rho, static_cast<double>(t) / 40.0);
      const double cur = cutoff_profile(xx, k);
      EXPECT_LE(cur, prev + 1e-15);
      prev = cur;
    }
  }
}

TEST(LoglogCutoff, RejectsOutOfRangeLevels) {
  EXPECT_THROW(loglog_cutoff(0), std::invalid_argument);
  EXPECT_THROW(loglog_cutoff(4), std::invalid_argument);
  EXPECT_THROW(loglog_cutoff(2, 4), std::invalid_argument);
}

TEST(LoglogCutoff, GridCoversSupportAndWidthsTile) {
  const CutoffSequence c = loglog_cutoff(2, 40);
  EXPECT_DOUBLE_EQ(c.rho, cutoff_radius(3));
  EXPECT_DOUBLE_EQ(c.big_r, cutoff_radius(2));
  ASSERT_EQ(c.x.size(), c.w.size());
  ASSERT_EQ(c.x.size(), c.zeta.size());
  // cells tile [-4R, 4R] without gaps
  double edge = -4.0 * c.big_r;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    EXPECT_NEAR(c.x[i], edge + 0.5 * c.w[i], 1e-12 * c.big_r + 1e-18);
    edge += c.w[i];
  }
  EXPECT_NEAR(edge, 4.0 * c.big_r, 1e-12 * c.big_r);
  for (std::size_t i = 0; i + 1 < c.x.size(); ++i)
    EXPECT_LT(c.x[i], c.x[i + 1]);
}

// Independent quadrature of the Gagliardo 1/2-seminorm on a uniform grid in
// t = log|x| (trapezoid in t, both signs, plateau cell, analytic outer
// tail), written from scratch to cross-check the library value.
double seminorm_oracle(int k, int nt) {
  const double rho = cutoff_radius(k + 1);
  const double big_r = cutoff_radius(k);
  const double a0 = 1e-4 * rho;
  const double xmax = 4.0 * big_r;
  const double t0 = std::log(a0);
  const double t1 = std::log(xmax);
  const double dt = (t1 - t0) / nt;
  std::vector<double> xs, ws, zs;
  // negative axis (descending t), plateau cell, positive axis
  for (int i = nt - 1; i >= 0; --i) {
    const double lo = std::exp(t0 + dt * i);
    const double hi = std::exp(t0 + dt * (i + 1));
    xs.push_back(-0.5 * (lo + hi));
    ws.push_back(hi - lo);
    zs.push_back(cutoff_profile(0.5 * (lo + hi), k));
  }
  xs.push_back(0.0);
  ws.push_back(2.0 * a0);
  zs.push_back(1.0);
  for (int i = 0; i < nt; ++i) {
    const double lo = std::exp(t0 + dt * i);
    const double hi = std::exp(t0 + dt * (i + 1));
    xs.push_back(0.5 * (lo + hi));
    ws.push_back(hi - lo);
    zs.push_back(cutoff_profile(0.5 * (lo + hi), k));
  }
  double acc = 0.0;
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dz = zs[i] - zs[j];
      if (dz == 0.0) continue;
      const double dx = xs[i] - xs[j];
      acc += dz * dz / (dx * dx) * ws[i] * ws[j];
    }
    if (i > 0 && i + 1 < n) {
      const double d = (zs[i + 1] - zs[i - 1]) / (xs[i + 1] - xs[i - 1]);
      acc += d * d * ws[i] * ws[i];
    }
    if (zs[i] > 0.0)
      acc += 2.0 * zs[i] * zs[i] *
             (1.0 / (xmax - xs[i]) + 1.0 / (xmax + xs[i])) * ws[i];
  }
  return std::sqrt(acc);
}

TEST(LoglogCutoff, SeminormMatchesIndependentQuadrature) {
  for (int k = 1; k <= 3; ++k) {
    const double lib = loglog_cutoff(k, 200).seminorm;
    const double ora = seminorm_oracle(k, 4000);
    EXPECT_NEAR(lib, ora, 0.02 * ora) << "k=" << k;
  }
}

TEST(LoglogCutoff, SeminormConvergesUnderRefinement) {
  for (int k = 1; k <= 3; ++k) {
    const double coarse = loglog_cutoff(k, 100).seminorm;
    const double fine = loglog_cutoff(k, 300).seminorm;
    EXPECT_NEAR(coarse, fine, 0.01 * fine) << "k=" << k;
  }
}

TEST(LoglogCutoff, SeminormStrictlyDecreasesAcrossLevels) {
  const double s1 = loglog_cutoff(1).seminorm;
  const double s2 = loglog_cutoff(2).seminorm;
  const double s3 = loglog_cutoff(3).seminorm;
  EXPECT_GT(s1, s2);
  EXPECT_GT(s2, s3);
  EXPECT_LT(s3 / s1, 0.9);
}

TEST(Windows, ValidationRejectsBadNesting) {
  Windows w{2, 29, 6, 25, 10, 21};
  EXPECT_NO_THROW(w.validate(32));
  EXPECT_THROW(w.validate(29), std::invalid_argument);
  Windows bad = w;
  bad.d1_lo = 6;  // D1 must be strictly inside D2
  EXPECT_THROW(bad.validate(32), std::invalid_argument);
  bad = w;
  bad.d2_hi = 29;
  EXPECT_THROW(bad.validate(32), std::invalid_argument);
}

TEST(WindowBump, SupportAndNormalization) {
  auto g = make_grid(1.0, 32);
  const Field eta = window_bump(g, 10, 21);
  double mx = 0.0;
  for (int i = 0; i < 32; ++i) {
    if (i < 10 || i > 21) EXPECT_DOUBLE_EQ(eta.s(i), 0.0);
    EXPECT_GE(eta.s(i), 0.0);
    mx = std::max(mx, eta.s(i));
  }
  EXPECT_DOUBLE_EQ(eta.s(10), 0.0);
  EXPECT_DOUBLE_EQ(eta.s(21), 0.0);
  EXPECT_GT(eta.s(15), 0.5);
  EXPECT_LE(mx, 1.0 + 1e-15);
}

std::vector<Field> smooth_panel(const GridPtr& g, int n, int count,
                                Rng& rng) {
  std::vector<Field> panel;
  for (int t = 0; t < count; ++t)
    panel.push_back(random_smooth_field(g, n, 1, rng));
  return panel;
}

TEST(Localize, DirectFunctionalMatchesNaiveTripleLoop) {
  auto g = make_grid(1.0, 16);
  Rng rng(811);
  const int n = 2;
  const OdForm om = random_antisymmetric_omega(g, n, rng, 0.4);
  const Field u = random_smooth_field(g, n, 1, rng);
  const Field f = manufactured_forcing(om, u);
  const Windows win{1, 14, 3, 12, 5, 10};
  const Field eta = window_bump(g, win.d1_lo, win.d1_hi);
  const auto panel = smooth_panel(g, n, 3, rng);
  const LocalizationParts parts = localize(u, om, f, win, eta, panel);

  for (std::size_t t = 0; t < panel.size(); ++t) {
    const Field& phi = panel[t];
    double acc = 0.0;
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) {
        if (j == i) continue;
        const double rr = g->r(i, j);
        const Eigen::VectorXd dv =
            (eta.s(i) * u[i].col(0) - eta.s(j) * u[j].col(0)) / std::sqrt(rr);
        const Eigen::VectorXd dphi =
            (phi[i].col(0) - phi[j].col(0)) / std::sqrt(rr);
        acc += dv.dot(dphi) * g->mu(i, j);
        if (win.in_d2(i) && win.in_d2(j))
          acc -= (om.blk(i, j) * dv).dot(phi[i].col(0)) * g->h * g->h *
                 g->kappa(i, j);
      }
      acc -= eta.s(i) * f[i].col(0).dot(phi[i].col(0)) * g->h;
    }
    EXPECT_NEAR(parts.g_direct[t], acc, 1e-11);
  }
}

TEST(Localize, FourTermSplitMatchesDirectWhenSolutionIsExact) {
  Rng rng(823);
  for (int n : {1, 2, 3}) {
    auto g = make_grid(1.0, 32);
    const OdForm om = n >= 2 ? random_antisymmetric_omega(g, n, rng, 0.5)
                             : OdForm(g, 1, 1);
    const Field u = random_smooth_field(g, n, 1, rng);
    const Field f = manufactured_forcing(om, u);
    const Windows win{2, 29, 6, 25, 10, 21};
    const Field eta = window_bump(g, win.d1_lo, win.d1_hi);
    const auto panel = smooth_panel(g, n, 4, rng);
    const LocalizationParts parts = localize(u, om, f, win, eta, panel);
    ASSERT_TRUE(parts.equation_ok) << "n=" << n;
    ASSERT_EQ(parts.g_four_term.size(), panel.size());
    double scale = 1.0;
    for (double v : parts.g_direct) scale = std::max(scale, std::abs(v));
    EXPECT_LT(parts.match_defect, 1e-11 * scale) << "n=" << n;
  }
}

TEST(Localize, SkipsFourTermSplitWhenEquationFails) {
  auto g = make_grid(1.0, 24);
  Rng rng(827);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.4);
  const Field u = random_smooth_field(g, 2, 1, rng);
  Field f = manufactured_forcing(om, u);
  f[5](0, 0) += 0.1;  // break the equation at one node
  const Windows win{1, 22, 4, 19, 8, 15};
  const Field eta = window_bump(g, win.d1_lo, win.d1_hi);
  const auto panel = smooth_panel(g, 2, 2, rng);
  const LocalizationParts parts = localize(u, om, f, win, eta, panel);
  EXPECT_FALSE(parts.equation_ok);
  EXPECT_GT(parts.equation_residual, 1e-3);
  EXPECT_EQ(parts.g_direct.size(), panel.size());
  EXPECT_TRUE(parts.g_four_term.empty());
}

TEST(Localize, RestrictedCoefficientNormIsMonotoneInWindow) {
  auto g = make_grid(1.0, 32);
  Rng rng(829);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.6);
  const Field u = random_smooth_field(g, 2, 1, rng);
  const Field f = manufactured_forcing(om, u);
  const auto panel = smooth_panel(g, 2, 1, rng);
  double prev = -1.0;
  for (int grow = 0; grow <= 2; ++grow) {
    const Windows win{1, 30, 8 - 2 * grow, 23 + 2 * grow, 12, 19};
    const Field eta = window_bump(g, win.d1_lo, win.d1_hi);
    const LocalizationParts parts = localize(u, om, f, win, eta, panel);
    EXPECT_LE(parts.restricted_norm, parts.restriction_bound + 1e-14);
    EXPECT_LE(parts.restriction_bound, odform_norm_l2(om) + 1e-14);
    EXPECT_GE(parts.restricted_norm, prev - 1e-14);
    prev = parts.restricted_norm;
  }
}

TEST(Localize, ZeroCoefficientLeavesOnlyCutoffCommutator) {
  auto g = make_grid(1.0, 24);
  Rng rng(839);
  const OdForm zero(g, 2, 2);
  const Field u = random_smooth_field(g, 2, 1, rng);
  const Field f = manufactured_forcing(zero, u);
  const Windows win{1, 22, 4, 19, 8, 15};
  const Field eta = window_bump(g, win.d1_lo, win.d1_hi);
  const auto panel = smooth_panel(g, 2, 3, rng);
  const LocalizationParts parts = localize(u, zero, f, win, eta, panel);
  ASSERT_TRUE(parts.equation_ok);
  for (std::size_t t = 0; t < panel.size(); ++t) {
    EXPECT_NEAR(parts.g2[t], 0.0, 1e-15);
    EXPECT_NEAR(parts.g3[t], 0.0, 1e-15);
    EXPECT_NEAR(parts.g4[t], 0.0, 1e-15);
    EXPECT_NEAR(parts.g_direct[t], parts.g1[t],
                1e-12 * std::max(1.0, std::abs(parts.g1[t])));
  }
}

TEST(Localize, RejectsEtaLeakingOutsideInnerWindow) {
  auto g = make_grid(1.0, 24);
  Rng rng(841);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.3);
  const Field u = random_smooth_field(g, 2, 1, rng);
  const Field f = manufactured_forcing(om, u);
  const Windows win{1, 22, 4, 19, 8, 15};
  Field eta = window_bump(g, win.d1_lo, win.d1_hi);
  eta.s(3) = 0.2;  // support violation
  const auto panel = smooth_panel(g, 2, 1, rng);
  EXPECT_THROW(localize(u, om, f, win, eta, panel), std::invalid_argument);
}

}  // namespace
