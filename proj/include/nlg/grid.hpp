#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace nlg {

enum class Geometry { truncated_line, periodic_torus };

// Uniform 1D grid carrying the pair geometry of the singular reference
// measure dx dy / |x - y|.  Nodes are x_i = -L + i h with h = 2L/M.
//
// For each ordered pair (i,j), i != j, we precompute
//   r(i,j)     pair distance (min-image distance on the torus),
//   kappa(i,j) periodized measure density sum_m 1/|dx + 2L m|
//              (truncated line: 1/r),
//   mu(i,j)    = h^2 * kappa(i,j), the discrete weight of dx dy/|x-y|.
// Diagonal entries are zero and excluded from every sum.
struct GridSpec {
  double L = 1.0;
  int M = 2;
  Geometry geometry = Geometry::truncated_line;
  int image_count = 0;
  double h = 1.0;

  Eigen::VectorXd x;      // node coordinates
  Eigen::MatrixXd r;      // pair distances, zero diagonal
  Eigen::MatrixXd kappa;  // measure density, zero diagonal
  Eigen::MatrixXd mu;     // h^2 * kappa

  // r^(-s) with zero diagonal.
  Eigen::MatrixXd pow_minus(double s) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(M, M);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j)
        if (j != i) out(i, j) = std::pow(r(i, j), -s);
    return out;
  }

  bool same_as(const GridSpec& o) const {
    return L == o.L && M == o.M && geometry == o.geometry &&
           image_count == o.image_count;
  }
};

using GridPtr = std::shared_ptr<const GridSpec>;

inline constexpr int kMaxGridPoints = 2048;  // M^2 pair-storage cap

inline GridPtr make_grid(double L, int M,
                         Geometry geometry = Geometry::truncated_line,
                         int image_count = 0) {
  if (!(L > 0.0)) throw std::invalid_argument("make_grid: L must be positive");
  if (M < 2) throw std::invalid_argument("make_grid: M must be at least 2");
  if (image_count < 0)
    throw std::invalid_argument("make_grid: image_count must be >= 0");
  if (M > kMaxGridPoints)
    throw std::invalid_argument("make_grid: M=" + std::to_string(M) +
                                " exceeds pair-storage cap " +
                                std::to_string(kMaxGridPoints));

  auto g = std::make_shared<GridSpec>();
  g->L = L;
  g->M = M;
  g->geometry = geometry;
  g->image_count = geometry == Geometry::periodic_torus ? image_count : 0;
  g->h = 2.0 * L / static_cast<double>(M);
  g->x.resize(M);
  for (int i = 0; i < M; ++i) g->x(i) = -L + g->h * static_cast<double>(i);

  g->r = Eigen::MatrixXd::Zero(M, M);
  g->kappa = Eigen::MatrixXd::Zero(M, M);
  const double period = 2.0 * L;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      const double dx = g->x(i) - g->x(j);
      if (geometry == Geometry::truncated_line) {
        const double d = std::abs(dx);
        g->r(i, j) = d;
        g->kappa(i, j) = 1.0 / d;
      } else {
        // Min-image representative in (-L, L]; the image window is centered
        // on it so kappa depends only on the wrapped offset.
        double dmin = std::remainder(dx, period);
        const double rmin = std::abs(dmin);
        double k = 0.0;
        for (int m = -g->image_count; m <= g->image_count; ++m)
          k += 1.0 / std::abs(dmin - period * static_cast<double>(m));
        g->r(i, j) = rmin;
        g->kappa(i, j) = k;
      }
    }
  }
  g->mu = g->h * g->h * g->kappa;
  return g;
}

}  // namespace nlg
