#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "nlg/calculus.hpp"
#include "nlg/field.hpp"

namespace nlg {

// Deterministic counter-mode generator built on the SplitMix64 mixing
// function: output n is mix(seed, n), so a stream is a pure function of
// (seed, draw index) and identical across platforms and call orderings.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (++counter_);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1); never returns 0 so logs are safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (both values used, in order).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Smooth random scalar/vector/matrix field: a short Fourier-type series of
// global smooth modes with Gaussian coefficients, entrywise independent.
inline Field random_smooth_field(const GridPtr& grid, int rows, int cols,
                                 Rng& rng, int modes = 4, double amplitude = 1.0) {
  Field out(grid, rows, cols);
  const double L = grid->L;
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b)
      for (int m = 1; m <= modes; ++m) {
        const double cs = rng.gaussian() * amplitude / m;
        const double sn = rng.gaussian() * amplitude / m;
        const double w = m * std::numbers::pi / L;
        for (int i = 0; i < grid->M; ++i)
          out[i](a, b) += cs * std::cos(w * grid->x[i]) + sn * std::sin(w * grid->x[i]);
      }
  return out;
}

// Random rotation field P: SO(N)-valued, built as a product of exact Givens
// rotations with smoothly varying angles, so P(x_i) is orthogonal to
// machine precision by construction.
inline Field random_rotation_field(const GridPtr& grid, int n, Rng& rng,
                                   double angle_scale = 1.0) {
  Field out(grid, n, n);
  for (int i = 0; i < grid->M; ++i) out[i] = Eigen::MatrixXd::Identity(n, n);
  if (n < 2) return out;
  const double L = grid->L;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const double c1 = rng.gaussian() * angle_scale;
      const double c2 = rng.gaussian() * angle_scale;
      const double c0 = rng.gaussian() * angle_scale;
      const double w = std::numbers::pi / L;
      for (int i = 0; i < grid->M; ++i) {
        const double th =
            c0 + c1 * std::cos(w * grid->x[i]) + c2 * std::sin(w * grid->x[i]);
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
        g(p, p) = std::cos(th);
        g(q, q) = std::cos(th);
        g(p, q) = -std::sin(th);
        g(q, p) = std::sin(th);
        out[i] = (g * out[i]).eval();
      }
    }
  return out;
}

// Random antisymmetric coefficient kernel Omega(x,y), N x N matrix valued,
// with Omega_ij(x,y) = -Omega_ji(x,y) entrywise in the matrix indices:
// a separable sum  sum_m c_m alpha_m(x) beta_m(y) K_m  with smooth Gaussian
// bump profiles and antisymmetric constant matrices K_m, rescaled so its
// weighted L2 norm hits norm_target.
inline OdForm random_antisymmetric_omega(const GridPtr& grid, int n, Rng& rng,
                                         double norm_target, int terms = 3) {
  if (n < 2)
    throw std::invalid_argument("random_antisymmetric_omega: need N >= 2");
  OdForm out(grid, n, n);
  const double L = grid->L;
  for (int m = 0; m < terms; ++m) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double v = rng.gaussian();
        k(p, q) = v;
        k(q, p) = -v;
      }
    const double ca = rng.uniform(-0.6 * L, 0.6 * L);
    const double cb = rng.uniform(-0.6 * L, 0.6 * L);
    const double wa = rng.uniform(0.3 * L, 0.8 * L);
    const double wb = rng.uniform(0.3 * L, 0.8 * L);
    const double c = rng.gaussian();
    Eigen::VectorXd alpha(grid->M), beta(grid->M);
    for (int i = 0; i < grid->M; ++i) {
      const double xa = (grid->x[i] - ca) / wa;
      const double xb = (grid->x[i] - cb) / wb;
      alpha[i] = std::exp(-xa * xa);
      beta[i] = std::exp(-xb * xb);
    }
    for (int i = 0; i < grid->M; ++i)
      for (int j = 0; j < grid->M; ++j) {
        if (j == i) continue;
        out.blk(i, j) += c * alpha[i] * beta[j] * k;
      }
  }
  const double nrm = odform_norm_l2(out);
  if (nrm == 0.0)
    throw std::runtime_error("random_antisymmetric_omega: degenerate draw");
  out *= norm_target / nrm;
  return out;
}

// Random smooth two-point kernel F(x,y): per channel entry a short series
// of separable trigonometric modes with Gaussian coefficients.
inline OdForm random_odform(const GridPtr& grid, int rows, int cols, Rng& rng,
                            int terms = 3, double amplitude = 1.0) {
  OdForm out(grid, rows, cols);
  const double w0 = std::numbers::pi / grid->L;
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b)
      for (int m = 1; m <= terms; ++m) {
        const double c = rng.gaussian() * amplitude / m;
        const double pa = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double pb = rng.uniform(0.0, 2.0 * std::numbers::pi);
        for (int i = 0; i < grid->M; ++i)
          for (int j = 0; j < grid->M; ++j) {
            if (j == i) continue;
            out.blk(i, j)(a, b) += c * std::cos(m * w0 * grid->x[i] + pa) *
                                   std::cos(m * w0 * grid->x[j] + pb);
          }
      }
  return out;
}

}  // namespace nlg
