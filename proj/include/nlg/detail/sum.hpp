#pragma once

#include <cstddef>
#include <vector>

namespace nlg::detail {

// Pairwise (cascade) summation. Used for every pair/node reduction in the
// library so that results do not depend on accumulation chunking.
inline double pairwise_sum(const double* d, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += d[i];
    return s;
  }
  const std::size_t mid = n / 2;
  return pairwise_sum(d, mid) + pairwise_sum(d + mid, n - mid);
}

inline double pairwise_sum(const std::vector<double>& d) {
  return pairwise_sum(d.data(), d.size());
}

// Row-major reduction over all ordered pairs (i,j), i != j, of an M x M
// kernel. term(i,j) is evaluated in row-major order, each row is pairwise
// summed, and the row totals are pairwise summed again.
template <class Term>
double sum_pairs(int m, Term&& term) {
  std::vector<double> rows(static_cast<std::size_t>(m));
  std::vector<double> buf(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    std::size_t k = 0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      buf[k++] = term(i, j);
    }
    rows[static_cast<std::size_t>(i)] = pairwise_sum(buf.data(), k);
  }
  return pairwise_sum(rows);
}

// Same deterministic order over nodes only.
template <class Term>
double sum_nodes(int m, Term&& term) {
  std::vector<double> buf(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) buf[static_cast<std::size_t>(i)] = term(i);
  return pairwise_sum(buf);
}

}  // namespace nlg::detail
