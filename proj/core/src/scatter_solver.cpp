#include "wqed/scatter_solver.hpp"

#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

struct Grouped {
  std::vector<double> z;       // distinct positions, ascending
  std::vector<Complex> phi;    // summed strengths per group
  std::vector<Complex> psi;    // summed drives per group
  std::vector<std::size_t> group_of;  // input index -> group index
};

// Scatterers within a phase distance beta dz < 1e-7 of a group's first
// member are merged: the phase they would contribute is below double
// roundoff in the solve, while keeping them distinct makes the tridiagonal
// inverse arbitrarily ill-conditioned.
constexpr double kMergePhase = 1e-7;

Grouped group_by_position(const std::vector<Scatterer>& sc, double beta) {
  const std::size_t n = sc.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sc[a].z < sc[b].z; });
  Grouped g;
  g.group_of.resize(n);
  const double tol = kMergePhase / beta;
  for (std::size_t i = 0; i < n; ++i) {
    const Scatterer& s = sc[order[i]];
    if (g.z.empty() || s.z - g.z.back() > tol) {
      g.z.push_back(s.z);
      g.phi.push_back(s.phi);
      g.psi.push_back(s.drive);
    } else {
      g.phi.back() += s.phi;
      g.psi.back() += s.drive;
    }
    g.group_of[order[i]] = g.z.size() - 1;
  }
  return g;
}

std::vector<Complex> solve_grouped_dense(const Grouped& g, double beta) {
  const std::size_t n = g.z.size();
  Eigen::MatrixXcd a(n, n);
  Eigen::VectorXcd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex gij = std::exp(iunit * beta * std::abs(g.z[i] - g.z[j]));
      a(i, j) = (i == j ? 1.0 : 0.0) + iunit * gij * g.phi[j];
      acc -= gij * g.psi[j];
    }
    rhs(i) = acc;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  // cheap singularity screen via the U diagonal
  const auto& u = lu.matrixLU();
  double dmin = 1e300, dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(u(i, i));
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  if (dmin == 0.0 || dmax / dmin > 1e14) {
    throw SingularSystem("scatterer system numerically singular (diag ratio " +
                         std::to_string(dmax / (dmin > 0 ? dmin : 1e-300)) + ")");
  }
  Eigen::VectorXcd f = lu.solve(rhs);
  return std::vector<Complex>(f.data(), f.data() + n);
}

// Tridiagonal inverse of the exponential kernel on distinct ascending
// positions: with rho_j = e^{i beta (z_{j+1} - z_j)},
//   T_{11} = 1/(1-rho_1^2),  T_{nn} = 1/(1-rho_{n-1}^2),
//   T_{jj} = (1 - rho_{j-1}^2 rho_j^2) / ((1-rho_{j-1}^2)(1-rho_j^2)),
//   T_{j,j+1} = T_{j+1,j} = -rho_j/(1-rho_j^2).
bool solve_grouped_tridiag(const Grouped& g, double beta, std::vector<Complex>* f_out) {
  const std::size_t n = g.z.size();
  if (n == 1) {
    f_out->assign(1, -g.psi[0] / (1.0 + iunit * g.phi[0]));
    return true;
  }
  // 1 - e^{2 i theta} = -2 i sin(theta) e^{i theta}: the explicit sin form
  // keeps full relative accuracy for nearly coincident scatterers, where
  // the naive difference would cancel catastrophically
  auto one_minus_e2i = [](double theta) {
    return -2.0 * iunit * std::sin(theta) * std::exp(iunit * theta);
  };
  std::vector<double> gap(n - 1);
  std::vector<Complex> rho(n - 1), denom(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    gap[j] = beta * (g.z[j + 1] - g.z[j]);
    rho[j] = std::exp(iunit * gap[j]);
    denom[j] = one_minus_e2i(gap[j]);
    if (std::abs(denom[j]) < 1e-8) return false;  // near half-wavelength gap
  }
  std::vector<Complex> dl(n - 1), d(n), du(n - 1), rhs(n);
  d[0] = 1.0 / denom[0];
  d[n - 1] = 1.0 / denom[n - 2];
  for (std::size_t j = 1; j + 1 < n; ++j) {
    d[j] = one_minus_e2i(gap[j - 1] + gap[j]) / (denom[j - 1] * denom[j]);
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    du[j] = -rho[j] / denom[j];
    dl[j] = du[j];
  }
  // (T + i D_Phi) F = -psi
  for (std::size_t j = 0; j < n; ++j) {
    d[j] += iunit * g.phi[j];
    rhs[j] = -g.psi[j];
  }

  // factorize once; near-coincident scatterers make T ill-conditioned
  // (entries ~ 1/(beta dz)), so polish with iterative refinement
  std::vector<Complex> dl_f = dl, d_f = d, du_f = du, du2(std::max<std::size_t>(n, 2) - 2);
  std::vector<int> ipiv(n);
  int info = LAPACKE_zgttrf(static_cast<int>(n),
                            reinterpret_cast<lapack_complex_double*>(dl_f.data()),
                            reinterpret_cast<lapack_complex_double*>(d_f.data()),
                            reinterpret_cast<lapack_complex_double*>(du_f.data()),
                            reinterpret_cast<lapack_complex_double*>(du2.data()),
                            ipiv.data());
  if (info != 0) {
    throw SingularSystem("tridiagonal factorization failed (info = " +
                         std::to_string(info) + ")");
  }
  auto back_solve = [&](std::vector<Complex>* x) {
    const int inf2 = LAPACKE_zgttrs(
        LAPACK_COL_MAJOR, 'N', static_cast<int>(n), 1,
        reinterpret_cast<lapack_complex_double*>(dl_f.data()),
        reinterpret_cast<lapack_complex_double*>(d_f.data()),
        reinterpret_cast<lapack_complex_double*>(du_f.data()),
        reinterpret_cast<lapack_complex_double*>(du2.data()), ipiv.data(),
        reinterpret_cast<lapack_complex_double*>(x->data()), static_cast<int>(n));
    if (inf2 != 0) throw SingularSystem("tridiagonal back-substitution failed");
  };
  std::vector<Complex> f = rhs;
  back_solve(&f);
  // residuals in extended precision: in working precision the huge T
  // entries cancel to exactly the error being corrected, and refinement
  // would be blind
  using CL = std::complex<long double>;
  std::vector<Complex> r(n), delta(n);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < n; ++j) {
      CL acc = CL(d[j]) * CL(f[j]);
      if (j > 0) acc += CL(dl[j - 1]) * CL(f[j - 1]);
      if (j + 1 < n) acc += CL(du[j]) * CL(f[j + 1]);
      const CL res = CL(rhs[j]) - acc;
      r[j] = Complex(static_cast<double>(res.real()), static_cast<double>(res.imag()));
    }
    delta = r;
    back_solve(&delta);
    for (std::size_t j = 0; j < n; ++j) f[j] += delta[j];
  }
  *f_out = std::move(f);
  return true;
}

}  // namespace

std::vector<Complex> solve_scatter_field(const std::vector<Scatterer>& sc,
                                         double beta, bool force_dense) {
  if (sc.empty()) return {};
  const Grouped g = group_by_position(sc, beta);
  std::vector<Complex> f_groups;
  if (force_dense || !solve_grouped_tridiag(g, beta, &f_groups)) {
    f_groups = solve_grouped_dense(g, beta);
  }
  std::vector<Complex> out(sc.size());
  for (std::size_t i = 0; i < sc.size(); ++i) out[i] = f_groups[g.group_of[i]];
  return out;
}

}  // namespace wqed
