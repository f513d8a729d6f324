#include "modesolver.hpp"

#include "shearflow/equilibrium.hpp"

namespace shearflow::detail {

Eigen::VectorXcd gather_mode(const VolumeField& f, int k1, int k2) {
  const Grid& g = f.grid();
  auto sp = f.spec();
  const size_t plane = (size_t)g.K1() * g.N2();
  Eigen::VectorXcd v(g.N3());
  for (int l = 0; l < g.N3(); ++l)
    v(l) = sp[(size_t)l * plane + (size_t)k2 * g.K1() + k1];
  return v;
}

void scatter_mode(VolumeField& f, int k1, int k2, const Eigen::VectorXcd& v) {
  const Grid& g = f.grid();
  auto sp = f.spec_mut();
  const size_t plane = (size_t)g.K1() * g.N2();
  for (int l = 0; l < g.N3(); ++l)
    sp[(size_t)l * plane + (size_t)k2 * g.K1() + k1] = v(l);
}

Eigen::MatrixXcd build_mode_block(const Grid& g, const Params& params,
                                  const ModeBlockSpec& spec) {
  const int N = g.N3();
  const double mu = params.mu;
  const double xi1 = spec.xi1, xi2 = spec.xi2;
  const double xisq = xi1 * xi1 + xi2 * xi2;
  const Eigen::MatrixXd& D = g.dmat(1);
  const Eigen::MatrixXd& D2 = g.dmat(2);
  const cplx I(0.0, 1.0);

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(4 * N, 4 * N);
  auto vb = [N](int comp) { return comp * N; };  // block base for v1,v2,v3
  const int qb = 3 * N;

  // momentum rows at interior nodes
  for (int i = 0; i < 3; ++i) {
    const int base = vb(i);
    for (int l = 1; l < N - 1; ++l) {
      const int row = base + l;
      const double s = shear_profile(params.gamma, g.b(), g.x3(l));
      // lam + s i xi1 on the own diagonal; -mu Lap part
      M(row, base + l) += spec.lam + s * I * xi1 + mu * xisq;
      for (int m = 0; m < N; ++m) M(row, base + m) -= mu * D2(l, m);
      if (spec.sprime_coupling && i == 0)
        M(row, vb(2) + l) += shear_profile_deriv(params.gamma, g.b(), g.x3(l));
      // grad q
      if (i == 0) M(row, qb + l) += I * xi1;
      if (i == 1) M(row, qb + l) += I * xi2;
      if (i == 2)
        for (int m = 0; m < N; ++m) M(row, qb + m) += D(l, m);
      // -mu grad(div v)
      if (i == 0) {
        M(row, vb(0) + l) += mu * xi1 * xi1;
        M(row, vb(1) + l) += mu * xi1 * xi2;
        for (int m = 0; m < N; ++m) M(row, vb(2) + m) -= mu * I * xi1 * D(l, m);
      } else if (i == 1) {
        M(row, vb(0) + l) += mu * xi1 * xi2;
        M(row, vb(1) + l) += mu * xi2 * xi2;
        for (int m = 0; m < N; ++m) M(row, vb(2) + m) -= mu * I * xi2 * D(l, m);
      } else {
        for (int m = 0; m < N; ++m) {
          M(row, vb(0) + m) -= mu * I * xi1 * D(l, m);
          M(row, vb(1) + m) -= mu * I * xi2 * D(l, m);
          M(row, vb(2) + m) -= mu * D2(l, m);
        }
      }
    }
    // bottom no-slip
    M(base + 0, base + 0) = 1.0;
  }

  // top rows
  const int top = N - 1;
  if (spec.dirichlet_top) {
    for (int i = 0; i < 3; ++i) M(vb(i) + top, vb(i) + top) = 1.0;
  } else {
    // S(q,v) e3 rows: i = 0,1: -mu (d_i v3 + d3 v_i); i = 2: q - 2 mu d3 v3
    {
      const int row = vb(0) + top;
      M(row, vb(2) + top) -= mu * I * xi1;
      for (int m = 0; m < N; ++m) M(row, vb(0) + m) -= mu * D(top, m);
      if (spec.beta != cplx(0.0))
        M(row, vb(2) + top) += params.gamma * spec.beta;
    }
    {
      const int row = vb(1) + top;
      M(row, vb(2) + top) -= mu * I * xi2;
      for (int m = 0; m < N; ++m) M(row, vb(1) + m) -= mu * D(top, m);
    }
    {
      const int row = vb(2) + top;
      M(row, qb + top) += 1.0;
      for (int m = 0; m < N; ++m) M(row, vb(2) + m) -= 2.0 * mu * D(top, m);
      if (spec.beta != cplx(0.0))
        M(row, vb(2) + top) -= (1.0 + spec.sigma * xisq) * spec.beta;
    }
  }

  // divergence rows at every node
  for (int l = 0; l < N; ++l) {
    const int row = qb + l;
    M(row, vb(0) + l) += I * xi1;
    M(row, vb(1) + l) += I * xi2;
    for (int m = 0; m < N; ++m) M(row, vb(2) + m) += D(l, m);
  }

  return M;
}

Eigen::VectorXcd assemble_mode_rhs(const Grid& g, const ModeBlockSpec& /*spec*/,
                                   const Eigen::VectorXcd& r1,
                                   const Eigen::VectorXcd& r2,
                                   const Eigen::VectorXcd& r3,
                                   const Eigen::VectorXcd& rdiv,
                                   const std::array<cplx, 3>& bc_top) {
  const int N = g.N3();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(4 * N);
  for (int l = 1; l < N - 1; ++l) {
    b(0 * N + l) = r1(l);
    b(1 * N + l) = r2(l);
    b(2 * N + l) = r3(l);
  }
  for (int l = 0; l < N; ++l) b(3 * N + l) = rdiv(l);
  for (int i = 0; i < 3; ++i) b(i * N + (N - 1)) = bc_top[i];
  // bottom rows stay zero (no-slip)
  return b;
}

namespace {

// solve D f = rhs with f pinned at one node (drops the ODE row there)
Eigen::VectorXcd integrate_pinned(const Grid& g, const Eigen::VectorXcd& rhs,
                                  int pin_node, cplx pin_value) {
  Eigen::MatrixXcd M = g.dmat(1).cast<cplx>();
  Eigen::VectorXcd b = rhs;
  M.row(pin_node).setZero();
  M(pin_node, pin_node) = 1.0;
  b(pin_node) = pin_value;
  return M.partialPivLu().solve(b);
}

// solve D f = rhs with sum_l w(l) f(l) = 0 replacing the row at drop_node
Eigen::VectorXcd integrate_gauged(const Grid& g, const Eigen::VectorXcd& rhs,
                                  int drop_node) {
  const int N = g.N3();
  Eigen::MatrixXcd M = g.dmat(1).cast<cplx>();
  Eigen::VectorXcd b = rhs;
  M.row(drop_node).setZero();
  for (int m = 0; m < N; ++m) M(drop_node, m) = g.w3()[m];
  b(drop_node) = 0.0;
  return M.partialPivLu().solve(b);
}

// Helmholtz (lam - mu D^2) f = rhs, f(bottom) = bc_bottom, and either
// f(top) = bc_top (dirichlet) or -mu D f(top) = bc_top (stress row)
Eigen::VectorXcd helmholtz_1d(const Grid& g, double lam, double mu,
                              const Eigen::VectorXcd& rhs, bool dirichlet_top,
                              cplx bc_top) {
  const int N = g.N3();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  Eigen::VectorXcd b = rhs;
  const Eigen::MatrixXd& D = g.dmat(1);
  const Eigen::MatrixXd& D2 = g.dmat(2);
  for (int l = 1; l < N - 1; ++l) {
    M(l, l) += lam;
    for (int m = 0; m < N; ++m) M(l, m) -= mu * D2(l, m);
  }
  M(0, 0) = 1.0;
  b(0) = 0.0;
  if (dirichlet_top) {
    M(N - 1, N - 1) = 1.0;
  } else {
    for (int m = 0; m < N; ++m) M(N - 1, m) = -mu * D(N - 1, m);
  }
  b(N - 1) = bc_top;
  return M.partialPivLu().solve(b);
}

}  // namespace

ZeroModeSolution solve_zero_mode(const Grid& g, const Params& params,
                                 const ModeBlockSpec& spec,
                                 const Eigen::VectorXcd& r1,
                                 const Eigen::VectorXcd& r2,
                                 const Eigen::VectorXcd& r3,
                                 const Eigen::VectorXcd& rdiv,
                                 const std::array<cplx, 3>& bc_top) {
  const int N = g.N3();
  const double mu = params.mu;
  const Eigen::MatrixXd& D = g.dmat(1);
  const Eigen::MatrixXd& D2 = g.dmat(2);
  ZeroModeSolution out;

  // v3 from the divergence constraint, pinned at the no-slip bottom
  out.v3 = integrate_pinned(g, rdiv, 0, 0.0);

  // v1, v2 Helmholtz solves; the s' coupling moves to the right side
  Eigen::VectorXcd rr1 = r1;
  if (spec.sprime_coupling)
    for (int l = 0; l < N; ++l)
      rr1(l) -= shear_profile_deriv(params.gamma, g.b(), g.x3(l)) * out.v3(l);
  cplx t1 = bc_top[0], t2 = bc_top[1];
  if (!spec.dirichlet_top && spec.beta != cplx(0.0))
    t1 -= params.gamma * spec.beta * out.v3(N - 1);
  out.v1 = helmholtz_1d(g, spec.lam, mu, rr1, spec.dirichlet_top, t1);
  out.v2 = helmholtz_1d(g, spec.lam, mu, r2, spec.dirichlet_top, t2);

  // q from momentum-3: D q = r3 - lam v3 + 2 mu D^2 v3
  Eigen::VectorXcd d2v3 = D2.cast<cplx>() * out.v3;
  Eigen::VectorXcd rq = r3 - spec.lam * out.v3 + 2.0 * mu * d2v3;
  if (spec.dirichlet_top) {
    out.q = integrate_gauged(g, rq, N - 1);
  } else {
    cplx dv3_top = (D.row(N - 1).cast<cplx>() * out.v3)(0);
    cplx pin = bc_top[2] + 2.0 * mu * dv3_top;
    if (spec.beta != cplx(0.0)) pin += spec.beta * out.v3(N - 1);
    out.q = integrate_pinned(g, rq, N - 1, pin);
  }
  return out;
}

}  // namespace shearflow::detail
