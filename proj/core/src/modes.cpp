#include "wqed/modes.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

void sort_modes(std::vector<Complex>& lambda, std::vector<Complex>* k) {
  std::vector<std::size_t> idx(lambda.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (lambda[a].imag() != lambda[b].imag()) return lambda[a].imag() > lambda[b].imag();
    return lambda[a].real() < lambda[b].real();
  });
  std::vector<Complex> ls(lambda.size());
  for (std::size_t i = 0; i < idx.size(); ++i) ls[i] = lambda[idx[i]];
  lambda = std::move(ls);
  if (k && !k->empty()) {
    std::vector<Complex> ks(k->size());
    for (std::size_t i = 0; i < idx.size(); ++i) ks[i] = (*k)[idx[i]];
    *k = std::move(ks);
  }
}

}  // namespace

CouplingMatrix coupling_matrix(const BinnedLayout& layout) {
  const std::size_t m = layout.size();
  if (m == 0) throw SchemaError("empty layout");
  CouplingMatrix out;
  out.m.resize(m, m);
  std::vector<double> c(m);
  for (std::size_t p = 0; p < m; ++p) {
    const auto& ens = layout.ensembles[layout.ensemble_id[p]];
    c[p] = std::sqrt(layout.bin_weight[p] * ens.gamma_1d / 2.0);
  }
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = p; q < m; ++q) {
      const double phase = layout.beta * std::abs(layout.positions[p] - layout.positions[q]);
      const Complex val = iunit * c[p] * c[q] * std::exp(iunit * phase);
      out.m(p, q) = val;
      out.m(q, p) = val;
    }
  }
  return out;
}

ModeSet collective_modes(const CouplingMatrix& matrix, int dense_limit) {
  const int n = static_cast<int>(matrix.m.rows());
  if (n > dense_limit) {
    throw SizeLimit("dense eigensolve limit exceeded: m = " + std::to_string(n) +
                    " > " + std::to_string(dense_limit));
  }
  Eigen::MatrixXcd a = matrix.m;  // zgeev overwrites
  std::vector<Complex> w(n);
  Eigen::MatrixXcd vr(n, n);
  const int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
      reinterpret_cast<lapack_complex_double*>(vr.data()), n);
  if (info != 0) {
    throw EigenFailure("zgeev failed to converge (info = " + std::to_string(info) + ")");
  }
  // For the complex-symmetric kernel the two-sided Rayleigh quotient
  // v^T M v / v^T v (transpose, no conjugation) is stationary, so one pass
  // squares away the QR iteration's error on ill-conditioned clustered
  // eigenvalues; this keeps the Eq.-(5) product route at 1e-8 of the
  // linear-solve route even at m = 10^3.
  for (int j = 0; j < n; ++j) {
    const auto v = vr.col(j);
    const Complex vtv = (v.transpose() * v)(0);
    if (std::abs(vtv) < 1e-6) continue;  // quasi-null vector, keep zgeev value
    const Complex vtmv = (v.transpose() * (matrix.m * v))(0);
    w[j] = vtmv / vtv;
  }
  ModeSet out;
  out.method = ModeMethod::Dense;
  out.lambda = std::move(w);
  sort_modes(out.lambda, nullptr);
  return out;
}

ModeSet perturbative_modes(double n_emitters, double gamma_1d, double nu, int mu_max) {
  if (nu < 0.0) throw SchemaError("nu must be >= 0");
  const double half_ng = 0.5 * n_emitters * gamma_1d;
  ModeSet out;
  out.method = ModeMethod::Perturbative;
  out.lambda.reserve(mu_max + 1);
  out.lambda.emplace_back(half_ng * (-nu / 3.0), half_ng * (1.0 - 4.0 * nu * nu / 45.0));
  for (int mu = 1; mu <= mu_max; ++mu) {
    const double mp = mu * pi;
    out.lambda.emplace_back(half_ng * 2.0 * nu / (mp * mp),
                            half_ng * 8.0 * nu * nu / (mp * mp * mp * mp));
  }
  sort_modes(out.lambda, nullptr);
  return out;
}

namespace {

// Residual of the dispersion relation on branch mu:
// f(k) = 2 i k - 2 Log((k + nu)/(k - nu)) - 2 pi i mu.
Complex branch_residual(Complex k, double nu, int mu) {
  return 2.0 * iunit * k - 2.0 * std::log((k + nu) / (k - nu)) -
         two_pi * iunit * static_cast<double>(mu);
}

Complex branch_residual_deriv(Complex k, double nu) {
  return 2.0 * iunit + 4.0 * nu / (k * k - nu * nu);
}

// Branch integer consistent with the current iterate (the principal log may
// hop a sheet while nu is continued).
int infer_branch(Complex k, double nu) {
  const Complex r = 2.0 * iunit * k - 2.0 * std::log((k + nu) / (k - nu));
  return static_cast<int>(std::lround(r.imag() / two_pi));
}

Complex newton_root(Complex k0, double nu, int mu, int max_iter, bool* ok) {
  Complex k = k0;
  *ok = false;
  for (int it = 0; it < max_iter; ++it) {
    const Complex f = branch_residual(k, nu, mu);
    if (std::abs(f) < 1e-13) {
      *ok = true;
      return k;
    }
    const Complex fp = branch_residual_deriv(k, nu);
    Complex step = f / fp;
    // damp steps that would jump past the branch spacing
    const double max_step = 0.45 * pi;
    if (std::abs(step) > max_step) step *= max_step / std::abs(step);
    k -= step;
  }
  *ok = std::abs(branch_residual(k, nu, mu)) < 1e-9;
  return k;
}

Complex seed_wavenumber(double nu, int mu) {
  if (mu == 0) {
    return std::sqrt(nu) * Complex(1.0, -1.0);
  }
  const double mp = mu * pi;
  return Complex(mp + 4.0 * nu * nu / (mp * mp * mp), -2.0 * nu / mp);
}

}  // namespace

ModeSet continuum_modes(double n_emitters, double gamma_1d, double nu, int count) {
  if (!(nu > 0.0)) throw SchemaError("continuum modes need nu > 0");
  if (count < 1) throw SchemaError("count must be >= 1");
  ModeSet out;
  out.method = ModeMethod::Continuum;

  const double nu_start = std::min(nu, 0.01);
  for (int mu = 0; mu < count; ++mu) {
    double nu_cur = nu_start;
    bool ok = false;
    Complex k = newton_root(seed_wavenumber(nu_cur, mu), nu_cur, mu, 200, &ok);
    if (!ok) {
      throw RootDivergence("Newton failed at seed for mu = " + std::to_string(mu));
    }
    // homotopy continuation in nu; geometric steps, halved on guard trips
    double step_factor = 1.5;
    int iter_budget = 200;
    while (nu_cur < nu) {
      const double nu_next = std::min(nu, nu_cur * step_factor);
      const int branch = infer_branch(k, nu_next);
      const Complex k_prev = k;
      Complex k_new = newton_root(k, nu_next, branch, 50, &ok);
      if (!ok || std::abs(k_new - k_prev) > 0.5 * pi) {
        step_factor = 1.0 + 0.5 * (step_factor - 1.0);
        if (--iter_budget <= 0 || step_factor < 1.0 + 1e-6) {
          throw RootDivergence("homotopy left branch mu = " + std::to_string(mu) +
                               " near nu = " + std::to_string(nu_next));
        }
        continue;
      }
      k = k_new;
      nu_cur = nu_next;
    }
    out.k.push_back(k);
    out.lambda.push_back(n_emitters * gamma_1d * nu / (k * k - nu * nu));
  }
  sort_modes(out.lambda, &out.k);
  return out;
}

double dark_coupling_rate(double n_emitters, double gamma_1d, double delta_z) {
  if (delta_z < 0.0) throw SchemaError("delta_z must be >= 0");
  return 0.5 * n_emitters * gamma_1d * delta_z;
}

double single_resonance_margin(double n_emitters, double gamma_1d, double nu) {
  const ModeSet modes = perturbative_modes(n_emitters, gamma_1d, nu, 1);
  // identify the branches by real part (Re Lambda_0 <= 0 <= Re Lambda_1) so
  // the ratio stays meaningful past the linewidth crossing
  Complex l0 = modes.lambda[0], l1 = modes.lambda[1];
  if (l1.real() < l0.real()) std::swap(l0, l1);
  if (l0.imag() == 0.0) return 0.0;
  return l1.imag() / l0.imag();
}

std::vector<double> dark_coupling_elements(double n_emitters, double gamma_1d,
                                           double nu, int mu_max) {
  std::vector<double> out;
  out.reserve(mu_max);
  for (int mu = 1; mu <= mu_max; ++mu) {
    if (mu % 2 == 1) {
      out.push_back(0.0);
    } else {
      const double mp = mu * pi;
      out.push_back(n_emitters * gamma_1d * nu / (2.0 * std::sqrt(2.0) * mp * mp));
    }
  }
  return out;
}

std::string modeset_to_csv(const ModeSet& modes) {
  const char* tag = modes.method == ModeMethod::Dense        ? "dense"
                    : modes.method == ModeMethod::Continuum  ? "continuum"
                                                             : "perturbative";
  std::string out = "mu,re_lambda_hz,im_lambda_hz,re_k,im_k,method\n";
  char buf[160];
  for (std::size_t i = 0; i < modes.lambda.size(); ++i) {
    const Complex k = i < modes.k.size() ? modes.k[i] : Complex(0.0, 0.0);
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%s\n", i,
                  rad_to_hz(modes.lambda[i].real()), rad_to_hz(modes.lambda[i].imag()),
                  k.real(), k.imag(), tag);
    out += buf;
  }
  return out;
}

}  // namespace wqed
