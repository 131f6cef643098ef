#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "nlg/field.hpp"

namespace nlg {

struct NormReport {
  double lp = 0.0;          // plain L^p value
  double restricted = 0.0;  // restricted-domain value (when requested)
  double seminorm = 0.0;    // Gagliardo seminorm (when computed)
  double split_t = 0.0;     // optimal threshold t* of the L^2+L^inf split
};

// Pointwise magnitude |f_i| (Frobenius for matrix channels).
inline double node_abs(const Field& u, int i) { return u[i].norm(); }

inline double norm_linf_field(const Field& u) {
  double m = 0.0;
  for (int i = 0; i < u.M(); ++i) m = std::max(m, node_abs(u, i));
  return m;
}

inline double norm_lp_field(const Field& u, double p) {
  if (p < 1.0) throw std::invalid_argument("norm_lp_field: p must be >= 1");
  const double h = u.grid->h;
  const double s = detail::sum_nodes(
      u.M(), [&](int i) { return std::pow(node_abs(u, i), p) * h; });
  return std::pow(s, 1.0 / p);
}

namespace detail {
// || (|f| - t)_+ ||_{L^2(h)}
inline double clipped_l2(const std::vector<double>& mag, double h, double t) {
  std::vector<double> buf(mag.size());
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double e = std::max(mag[i] - t, 0.0);
    buf[i] = e * e * h;
  }
  return std::sqrt(pairwise_sum(buf));
}
}  // namespace detail

// Infimal L^2+L^inf norm: inf_{t >= 0} t + ||(|f|-t)_+||_{L^2(h)}.
// The objective is convex in t; dense scan followed by golden-section
// refinement around the scan minimum.
inline NormReport norm_l2_plus_linf(const Field& u) {
  NormReport rep;
  const double h = u.grid->h;
  std::vector<double> mag(static_cast<std::size_t>(u.M()));
  for (int i = 0; i < u.M(); ++i) mag[static_cast<std::size_t>(i)] = node_abs(u, i);
  const double tmax = *std::max_element(mag.begin(), mag.end());
  auto obj = [&](double t) { return t + detail::clipped_l2(mag, h, t); };
  if (tmax == 0.0) return rep;

  const int n_scan = 10000;
  double best_t = 0.0, best = obj(0.0);
  for (int k = 1; k <= n_scan; ++k) {
    const double t = tmax * static_cast<double>(k) / n_scan;
    const double f = obj(t);
    if (f < best) { best = f; best_t = t; }
  }
  // golden-section refinement on the bracketing scan interval
  double lo = std::max(0.0, best_t - tmax / n_scan);
  double hi = std::min(tmax, best_t + tmax / n_scan);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = obj(c), fd = obj(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) { hi = d; d = c; fd = fc; c = hi - gr * (hi - lo); fc = obj(c); }
    else { lo = c; c = d; fc = fd; d = lo + gr * (hi - lo); fd = obj(d); }
  }
  const double t_ref = 0.5 * (lo + hi);
  const double f_ref = obj(t_ref);
  if (f_ref < best) { best = f_ref; best_t = t_ref; }

  rep.lp = best;
  rep.split_t = best_t;
  return rep;
}

// (sum_{pairs} mu(i,j) |F_ij|^p)^{1/p}, optionally restricted to pairs with
// at least one endpoint in the node set D, i.e. over (D x R) u (R x D).
inline double norm_odform_lp(const OdForm& f, double p,
                             const std::optional<std::vector<int>>& restrict_to =
                                 std::nullopt) {
  if (p < 1.0) throw std::invalid_argument("norm_odform_lp: p must be >= 1");
  std::vector<char> in(static_cast<std::size_t>(f.M()), 1);
  if (restrict_to) {
    if (restrict_to->empty())
      throw std::invalid_argument("norm_odform_lp: empty restriction set");
    in.assign(static_cast<std::size_t>(f.M()), 0);
    for (int i : *restrict_to) in.at(static_cast<std::size_t>(i)) = 1;
  }
  const auto& mu = f.grid->mu;
  const double s = detail::sum_pairs(f.M(), [&](int i, int j) {
    if (!in[static_cast<std::size_t>(i)] && !in[static_cast<std::size_t>(j)])
      return 0.0;
    return std::pow(f.blk(i, j).norm(), p) * mu(i, j);
  });
  return std::pow(s, 1.0 / p);
}

}  // namespace nlg
