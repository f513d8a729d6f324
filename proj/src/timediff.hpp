#pragma once

#include <span>
#include <vector>

#include "shearflow/ops.hpp"

namespace shearflow::detail {

// Fornberg weights for the m-th derivative at x0 from the given nodes.
inline std::vector<double> fd_weights(double x0, std::span<const double> x,
                                      int m) {
  const int n = (int)x.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0, c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

template <class F>
F time_deriv(const std::vector<F>& q, std::span<const double> times, int ell) {
  auto w = fd_weights(times.back(), times, ell);
  F out(q[0].grid());
  for (size_t m = 0; m < q.size(); ++m)
    if (w[m] != 0.0) axpy(w[m], q[m], out);
  return out;
}

}  // namespace shearflow::detail
