#include "shearflow/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "shearflow/fft.hpp"

namespace shearflow {

namespace detail {

struct GridImpl {
  double L1, L2, b;
  int N1, N2, N3;
  int max_order;
  std::vector<double> x3;             // ascending, -b .. 0
  std::vector<double> w3;             // Clenshaw-Curtis on [-b, 0]
  std::vector<Eigen::MatrixXd> dmat;  // dmat[m-1] = m-th derivative
  std::unique_ptr<FftEngine> fft;
};

namespace {

// Clenshaw-Curtis weights for nodes cos(j pi / n), j = 0..n, on [-1, 1].
std::vector<double> clenshaw_curtis(int n) {
  std::vector<double> w(n + 1, 0.0);
  if (n == 0) {
    w[0] = 2.0;
    return w;
  }
  const double pi = std::numbers::pi;
  std::vector<double> v(n - 1, 1.0);
  if (n % 2 == 0) {
    w[0] = w[n] = 1.0 / (n * n - 1.0);
    for (int k = 1; k <= n / 2 - 1; ++k)
      for (int j = 1; j < n; ++j)
        v[j - 1] -= 2.0 * std::cos(2.0 * k * pi * j / n) / (4.0 * k * k - 1.0);
    for (int j = 1; j < n; ++j)
      v[j - 1] -= std::cos(pi * j) / (n * n - 1.0);
  } else {
    w[0] = w[n] = 1.0 / (n * n);
    for (int k = 1; k <= (n - 1) / 2; ++k)
      for (int j = 1; j < n; ++j)
        v[j - 1] -= 2.0 * std::cos(2.0 * k * pi * j / n) / (4.0 * k * k - 1.0);
  }
  for (int j = 1; j < n; ++j) w[j] = 2.0 * v[j - 1] / n;
  return w;
}

// Barycentric differentiation matrix on the given nodes with the
// Chebyshev-Gauss-Lobatto weight pattern; diagonal by the negative-sum trick.
Eigen::MatrixXd diff_matrix(const std::vector<double>& x) {
  const int n = (int)x.size();
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j)
    w[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0);
  Eigen::MatrixXd D(n, n);
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (w[j] / w[i]) / (x[i] - x[j]);
      rowsum += D(i, j);
    }
    D(i, i) = -rowsum;
  }
  return D;
}

}  // namespace

}  // namespace detail

Grid make_grid(double L1, double L2, double b, int N1, int N2, int N3,
               int max_order) {
  if (L1 <= 0 || L2 <= 0 || b <= 0)
    throw std::invalid_argument("make_grid: lengths must be positive");
  if (N1 < 4 || N2 < 4 || N1 % 2 || N2 % 2)
    throw std::invalid_argument("make_grid: N1, N2 must be even and >= 4");
  if (N3 < 5) throw std::invalid_argument("make_grid: N3 must be >= 5");
  if (max_order < 1) throw std::invalid_argument("make_grid: max_order >= 1");

  auto impl = std::make_shared<detail::GridImpl>();
  impl->L1 = L1;
  impl->L2 = L2;
  impl->b = b;
  impl->N1 = N1;
  impl->N2 = N2;
  impl->N3 = N3;
  impl->max_order = max_order;

  const double pi = std::numbers::pi;
  const int n = N3 - 1;
  impl->x3.resize(N3);
  for (int j = 0; j < N3; ++j) {
    double z = -std::cos(pi * j / n);  // ascending -1 .. 1
    impl->x3[j] = 0.5 * b * (z - 1.0);
  }
  impl->x3[0] = -b;
  impl->x3[N3 - 1] = 0.0;

  auto wcc = detail::clenshaw_curtis(n);  // symmetric, ordering-insensitive
  impl->w3.resize(N3);
  for (int j = 0; j < N3; ++j) impl->w3[j] = 0.5 * b * wcc[j];

  impl->dmat.reserve(max_order);
  Eigen::MatrixXd D1 = detail::diff_matrix(impl->x3);
  impl->dmat.push_back(D1);
  for (int m = 2; m <= max_order; ++m)
    impl->dmat.push_back(D1 * impl->dmat.back());

  impl->fft = std::make_unique<detail::FftEngine>(N1, N2, N3, 3 * N1 / 2,
                                                  3 * N2 / 2);
  Grid g;
  g.p_ = std::move(impl);
  return g;
}

double Grid::L1() const { return p_->L1; }
double Grid::L2() const { return p_->L2; }
double Grid::b() const { return p_->b; }
int Grid::N1() const { return p_->N1; }
int Grid::N2() const { return p_->N2; }
int Grid::N3() const { return p_->N3; }
int Grid::max_order() const { return p_->max_order; }
int Grid::K1() const { return p_->N1 / 2 + 1; }
int Grid::M1() const { return 3 * p_->N1 / 2; }
int Grid::M2() const { return 3 * p_->N2 / 2; }
int Grid::K1p() const { return M1() / 2 + 1; }

std::span<const double> Grid::x3() const { return p_->x3; }
double Grid::x3(int j) const { return p_->x3[j]; }
std::span<const double> Grid::w3() const { return p_->w3; }

double Grid::xi1(int k1) const {
  return 2.0 * std::numbers::pi * k1 / p_->L1;
}
double Grid::xi2(int k2) const {
  int m = (k2 <= p_->N2 / 2) ? k2 : k2 - p_->N2;
  return 2.0 * std::numbers::pi * m / p_->L2;
}
double Grid::xi_sq(int k1, int k2) const {
  double a = xi1(k1), b2 = xi2(k2);
  return a * a + b2 * b2;
}
double Grid::xi_abs(int k1, int k2) const { return std::sqrt(xi_sq(k1, k2)); }
bool Grid::nyquist1(int k1) const { return k1 == p_->N1 / 2; }
bool Grid::nyquist2(int k2) const { return k2 == p_->N2 / 2; }

double Grid::hermitian_weight(int k1) const {
  return (k1 == 0 || k1 == p_->N1 / 2) ? 1.0 : 2.0;
}
double Grid::horiz_weight() const {
  return p_->L1 * p_->L2 / ((double)p_->N1 * p_->N2);
}

const Eigen::MatrixXd& Grid::dmat(int order) const {
  if (order < 1 || order > p_->max_order)
    throw std::invalid_argument("Grid::dmat: order out of range");
  return p_->dmat[order - 1];
}

detail::FftEngine& Grid::fft() const { return *p_->fft; }

}  // namespace shearflow
