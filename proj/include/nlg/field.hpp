#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlg/detail/sum.hpp"
#include "nlg/grid.hpp"

namespace nlg {

// Grid function with values in R^{rows x cols} per node.
// Scalar fields are 1x1, vector fields N x 1, matrix fields N x N.
struct Field {
  GridPtr grid;
  int rows = 1, cols = 1;
  std::vector<Eigen::MatrixXd> v;

  Field() = default;
  Field(GridPtr g, int r_, int c_) : grid(std::move(g)), rows(r_), cols(c_) {
    v.assign(static_cast<std::size_t>(grid->M),
             Eigen::MatrixXd::Zero(rows, cols));
  }

  int M() const { return grid->M; }
  double& s(int i) { return v[static_cast<std::size_t>(i)](0, 0); }
  double s(int i) const { return v[static_cast<std::size_t>(i)](0, 0); }
  Eigen::MatrixXd& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  const Eigen::MatrixXd& operator[](int i) const {
    return v[static_cast<std::size_t>(i)];
  }

  bool finite() const {
    for (const auto& m : v)
      if (!m.allFinite()) return false;
    return true;
  }

  // Max over nodes of || P_i P_i^T - I ||_F (orthogonality drift).
  double orthogonality_drift() const {
    double d = 0.0;
    for (const auto& p : v)
      d = std::max(d, (p * p.transpose() -
                       Eigen::MatrixXd::Identity(rows, rows)).norm());
    return d;
  }

  bool is_special_orthogonal(double tol = 1e-10) const {
    if (rows != cols) return false;
    for (const auto& p : v) {
      if ((p * p.transpose() - Eigen::MatrixXd::Identity(rows, rows)).norm() >
          tol)
        return false;
      if (p.determinant() <= 0.0) return false;
    }
    return true;
  }

  // Subtract the per-component node mean.
  void remove_mean() {
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& m : v) mean += m;
    mean /= static_cast<double>(M());
    for (auto& m : v) m -= mean;
  }

  Field& operator+=(const Field& o) {
    for (int i = 0; i < M(); ++i) v[i] += o.v[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (int i = 0; i < M(); ++i) v[i] -= o.v[i];
    return *this;
  }
  Field& operator*=(double c) {
    for (auto& m : v) m *= c;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double c, Field a) { return a *= c; }
};

inline void require_same_grid(const GridPtr& a, const GridPtr& b,
                              const char* where) {
  if (!a->same_as(*b))
    throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

// Off-diagonal two-point kernel F(x_i, x_j) valued in R^{rows x cols}.
// Stored as an (M*rows) x (M*cols) block matrix; diagonal blocks are kept
// zero and excluded from every sum.
struct OdForm {
  GridPtr grid;
  int rows = 1, cols = 1;
  Eigen::MatrixXd k;

  OdForm() = default;
  OdForm(GridPtr g, int r_, int c_) : grid(std::move(g)), rows(r_), cols(c_) {
    k = Eigen::MatrixXd::Zero(grid->M * rows, grid->M * cols);
  }

  int M() const { return grid->M; }

  auto blk(int i, int j) { return k.block(i * rows, j * cols, rows, cols); }
  auto blk(int i, int j) const {
    return k.block(i * rows, j * cols, rows, cols);
  }
  double& s(int i, int j) { return k(i, j); }  // scalar kernels only
  double s(int i, int j) const { return k(i, j); }

  bool finite() const { return k.allFinite(); }

  // Entrywise defect of matrix antisymmetry F_ij = -F_ji (matrix indices).
  double matrix_antisymmetry_defect() const {
    if (rows != cols) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (int i = 0; i < M(); ++i)
      for (int j = 0; j < M(); ++j) {
        if (j == i) continue;
        d = std::max(d, (blk(i, j) + blk(i, j).transpose())
                            .cwiseAbs()
                            .maxCoeff());
      }
    return d;
  }

  OdForm& operator+=(const OdForm& o) { k += o.k; return *this; }
  OdForm& operator-=(const OdForm& o) { k -= o.k; return *this; }
  OdForm& operator*=(double c) { k *= c; return *this; }
  friend OdForm operator+(OdForm a, const OdForm& b) { return a += b; }
  friend OdForm operator-(OdForm a, const OdForm& b) { return a -= b; }
  friend OdForm operator*(double c, OdForm a) { return a *= c; }
};

// Argument swap F*(x,y) = F(y,x).  Matrix channels untouched.
inline OdForm odform_star(const OdForm& f) {
  OdForm out(f.grid, f.rows, f.cols);
  for (int i = 0; i < f.M(); ++i)
    for (int j = 0; j < f.M(); ++j) {
      if (j == i) continue;
      out.blk(i, j) = f.blk(j, i);
    }
  return out;
}

// L^2(pair measure) inner product sum_{i != j} <F_ij, G_ij>_F mu(i,j).
inline double odform_inner(const OdForm& f, const OdForm& g) {
  require_same_grid(f.grid, g.grid, "odform_inner");
  const auto& mu = f.grid->mu;
  return detail::sum_pairs(f.M(), [&](int i, int j) {
    return f.blk(i, j).cwiseProduct(g.blk(i, j)).sum() * mu(i, j);
  });
}

inline double odform_norm_l2(const OdForm& f) {
  return std::sqrt(odform_inner(f, f));
}

// h-weighted node inner product sum_i <u_i, w_i>_F h.
inline double field_inner(const Field& u, const Field& w) {
  require_same_grid(u.grid, w.grid, "field_inner");
  const double h = u.grid->h;
  return detail::sum_nodes(u.M(), [&](int i) {
    return u[i].cwiseProduct(w[i]).sum() * h;
  });
}

}  // namespace nlg
