#include <gtest/gtest.h>

#include <cmath>

#include "nlg/rng.hpp"
#include "nlg/system.hpp"

namespace {

using namespace nlg;

TEST(ApplyOmega, ZeroCoefficientAndConstantFieldVanish) {
  auto g = make_grid(1.0, 8);
  Rng rng(301);
  const OdForm zero(g, 2, 2);
  const Field u = random_smooth_field(g, 2, 1, rng);
  EXPECT_LT(field_sup(apply_omega(zero, u)), 1e-15);
  Field c(g, 2, 1);
  for (int i = 0; i < 8; ++i) c[i] << 1.5, -0.3;
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.3);
  EXPECT_LT(field_sup(apply_omega(om, c)), 1e-14);
}

TEST(ApplyOmega, MatchesBruteForceTripleSum) {
  auto g = make_grid(1.0, 3);
  Rng rng(303);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.5);
  const Field u = random_smooth_field(g, 2, 1, rng);
  const Field out = apply_omega(om, u);
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 2; ++a) {
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) {
        if (j == i) continue;
        for (int b = 0; b < 2; ++b)
          acc += om.blk(i, j)(a, b) * (u[i](b, 0) - u[j](b, 0)) /
                 std::sqrt(g->r(i, j)) * g->h * g->kappa(i, j);
      }
      EXPECT_NEAR(out[i](a, 0), acc, 1e-13);
    }
}

TEST(SystemOperator, MatrixActionMatchesOperatorEvaluation) {
  auto g = make_grid(1.0, 16);
  Rng rng(307);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.3);
  const SystemOperator op = assemble_system(om);
  for (int t = 0; t < 3; ++t) {
    const Field u = random_smooth_field(g, 2, 1, rng);
    Field ref = frac_laplacian(u, 0.5);
    ref -= apply_omega(om, u);
    const Field got = op.apply(u);
    for (int i = 0; i < 16; ++i)
      EXPECT_LT((got[i] - ref[i]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ManufacturedForcing, ConstantSolutionGivesZeroForcing) {
  auto g = make_grid(1.0, 8);
  Rng rng(311);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.3);
  Field c(g, 2, 1);
  for (int i = 0; i < 8; ++i) c[i] << 0.4, 2.0;
  EXPECT_LT(field_sup(manufactured_forcing(om, c)), 1e-13);
}

TEST(SolveSystem, PoissonReductionAtZeroCoefficient) {
  auto g = make_grid(1.0, 24);
  Rng rng(313);
  Field v = random_smooth_field(g, 2, 1, rng);
  v.remove_mean();
  const OdForm zero(g, 2, 2);
  const Field f = frac_laplacian(v, 0.5);
  const SolveReport rep = solve_system(zero, f);
  EXPECT_TRUE(rep.converged);
  // solution agrees with v up to a per-component constant
  Field diff = rep.u - v;
  double dev = 0.0;
  for (int a = 0; a < 2; ++a) {
    double mean = 0.0;
    for (int i = 0; i < 24; ++i) mean += diff[i](a, 0);
    mean /= 24.0;
    for (int i = 0; i < 24; ++i)
      dev = std::max(dev, std::abs(diff[i](a, 0) - mean));
  }
  EXPECT_LT(dev, 1e-8);
}

TEST(SolveSystem, RoundTripWithManufacturedForcing) {
  auto g = make_grid(1.0, 32);
  Rng rng(317);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.05);
  Field u = random_smooth_field(g, 2, 1, rng);
  u.remove_mean();
  const Field f = manufactured_forcing(om, u);
  const SolveReport rep = solve_system(om, f);
  EXPECT_TRUE(rep.converged);
  EXPECT_LT(rep.residual, 1e-10);
  // align per-component means before comparing
  Field diff = rep.u - u;
  for (int a = 0; a < 2; ++a) {
    double mean = 0.0;
    for (int i = 0; i < 32; ++i) mean += diff[i](a, 0);
    mean /= 32.0;
    for (int i = 0; i < 32; ++i)
      EXPECT_NEAR(diff[i](a, 0), mean, 1e-8);
  }
}

TEST(SolveSystem, PerturbationBoundedBySingularValues) {
  auto g = make_grid(1.0, 16);
  Rng rng(319);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.05);
  Field u = random_smooth_field(g, 2, 1, rng);
  u.remove_mean();
  const Field f = manufactured_forcing(om, u);
  Field delta = random_smooth_field(g, 2, 1, rng);
  delta.remove_mean();
  delta *= 1e-4;
  const SolveReport r0 = solve_system(om, f);
  const SolveReport r1 = solve_system(om, f + delta);
  const double kappa = 1.0 / r0.sigma_min_kept;
  double diff = 0.0, dn = 0.0;
  for (int i = 0; i < 16; ++i) {
    diff = std::max(diff, (r1.u[i] - r0.u[i]).cwiseAbs().maxCoeff());
    dn = std::max(dn, delta[i].cwiseAbs().maxCoeff());
  }
  EXPECT_LE(diff, 10.0 * kappa * dn * std::sqrt(16.0 * 2.0));
}

TEST(ReformulationDefect, IdentityGaugeReducesToTheEquation) {
  auto g = make_grid(1.0, 8);
  Rng rng(323);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.3);
  const Field u = random_smooth_field(g, 2, 1, rng);
  Field id(g, 2, 2);
  for (int i = 0; i < 8; ++i) id[i] = Eigen::MatrixXd::Identity(2, 2);
  std::vector<Field> panel;
  for (int k = 0; k < 8; ++k) panel.push_back(random_smooth_field(g, 2, 1, rng));
  EXPECT_LT(reformulation_defect(u, om, id, panel), 1e-12);
}

TEST(ReformulationDefect, RandomInvertibleGaugeIsExact) {
  auto g = make_grid(1.0, 4);
  Rng rng(327);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.4);
  const Field u = random_smooth_field(g, 2, 1, rng);
  Field a(g, 2, 2);
  for (int i = 0; i < 4; ++i) {
    a[i] = Eigen::MatrixXd::Identity(2, 2);
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) a[i](p, q) += 0.3 * rng.gaussian();
  }
  std::vector<Field> panel;
  for (int k = 0; k < 8; ++k) panel.push_back(random_smooth_field(g, 2, 1, rng));
  const double d = reformulation_defect(u, om, a, panel);
  EXPECT_LT(d, 1e-12);
  // scaling the gauge leaves the (zero) defect at rounding level
  Field a2 = a;
  a2 *= 3.0;
  EXPECT_LT(reformulation_defect(u, om, a2, panel), 1e-11);
}

TEST(Conservation, IdentityGaugeZeroCoefficientIsExact) {
  auto g = make_grid(1.0, 16);
  Rng rng(331);
  const OdForm zero(g, 2, 2);
  const GaugeResult gauge = build_gauge(zero);
  const Field u = random_smooth_field(g, 2, 1, rng);
  const Field f = manufactured_forcing(zero, u);
  const std::vector<Field> panel = test_panel(g, 2, 8, rng);
  const ConservationReport rep =
      conservation_residual(u, f, zero, gauge, panel);
  EXPECT_LT(rep.max_residual, 1e-11);
}

TEST(Conservation, ResidualControlledByGaugeDivergence) {
  auto g = make_grid(1.0, 32);
  Rng rng(337);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.05);
  const GaugeResult gauge = build_gauge(om);
  ASSERT_TRUE(gauge.converged);
  Field u = random_smooth_field(g, 2, 1, rng);
  u.remove_mean();
  const Field f = manufactured_forcing(om, u);
  const std::vector<Field> panel = test_panel(g, 2, 16, rng);
  const ConservationReport rep =
      conservation_residual(u, f, om, gauge, panel);
  EXPECT_LE(rep.max_residual,
            10.0 * rep.gauge_div_residual * rep.u_norm + 1e-13);
  EXPECT_LT(rep.reformulation, 1e-11);
  // linearity: doubling (u, f) doubles the residual
  Field u2 = u;
  u2 *= 2.0;
  Field f2 = f;
  f2 *= 2.0;
  const ConservationReport rep2 =
      conservation_residual(u2, f2, om, gauge, panel);
  EXPECT_NEAR(rep2.max_residual, 2.0 * rep.max_residual,
              1e-10 + 1e-6 * rep.max_residual);
}

TEST(WeakConvergence, ConstantSequenceIsFlat) {
  auto g = make_grid(1.0, 24);
  Rng rng(341);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.05);
  Field u = random_smooth_field(g, 2, 1, rng);
  u.remove_mean();
  const Field f = manufactured_forcing(om, u);
  const Field gzero(g, 2, 1);
  WeakConvConfig wc;
  wc.ell_max = 4;
  wc.osc_amplitude = 0.0;
  Rng seed(99);
  const WeakConvReport rep =
      weak_convergence_experiment(om, f, gzero, wc, seed);
  EXPECT_TRUE(rep.all_solved);
  for (std::size_t l = 1; l < rep.panel_values.size(); ++l)
    for (std::size_t q = 0; q < rep.panel_values[l].size(); ++q)
      EXPECT_NEAR(rep.panel_values[l][q], rep.panel_values[0][q], 1e-9);
}

TEST(WeakConvergence, ControlForcingShowsInverseEllSlope) {
  auto g = make_grid(1.0, 24);
  Rng rng(347);
  const OdForm om = random_antisymmetric_omega(g, 2, rng, 0.05);
  Field u = random_smooth_field(g, 2, 1, rng);
  u.remove_mean();
  const Field f = manufactured_forcing(om, u);
  Field gc = random_smooth_field(g, 2, 1, rng);
  gc.remove_mean();
  WeakConvConfig wc;
  wc.ell_max = 8;
  wc.osc_amplitude = 0.0;
  wc.control_decay = 1.0;
  Rng seed(1234);
  const WeakConvReport rep = weak_convergence_experiment(om, f, gc, wc, seed);
  EXPECT_TRUE(rep.all_solved);
  EXPECT_NEAR(rep.loglog_slope, -1.0, 0.3);
  for (std::size_t l = 1; l < rep.limit_residuals.size(); ++l)
    EXPECT_LT(rep.limit_residuals[l], rep.limit_residuals[l - 1]);
}

}  // namespace
