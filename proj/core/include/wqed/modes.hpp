#ifndef WQED_MODES_HPP
#define WQED_MODES_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wqed/ensemble.hpp"
#include "wqed/types.hpp"

namespace wqed {

// Waveguide coupling kernel M_{pp'} = (i/2) sqrt(n_p G_p n_p' G_p')
// e^{i beta |z_p - z_p'|}; complex symmetric by construction.
struct CouplingMatrix {
  Eigen::MatrixXcd m;

  Eigen::MatrixXcd hermitian_part() const { return 0.5 * (m + m.adjoint()); }
  Eigen::MatrixXcd anti_hermitian_part() const { return 0.5 * (m - m.adjoint()); }
};

enum class ModeMethod { Dense, Continuum, Perturbative };

// Collective eigenvalues Lambda_mu = omega_mu + i Gamma_mu / 2, sorted by
// descending imaginary part (ties: ascending real part).
struct ModeSet {
  std::vector<Complex> lambda;  // rad/s
  std::vector<Complex> k;       // Continuum only: spin wavenumbers
  ModeMethod method = ModeMethod::Dense;
};

CouplingMatrix coupling_matrix(const BinnedLayout& layout);

// All eigenvalues of the kernel via a dense non-Hermitian solver
// (LAPACK zgeev). Throws SizeLimit above `dense_limit`, EigenFailure if the
// QR iteration fails.
ModeSet collective_modes(const CouplingMatrix& matrix, int dense_limit = 10000);

// Eq.-(7)-style expansion in nu = beta dz: Lambda_0 = (N G / 2)(-nu/3 +
// i [1 - 4 nu^2/45]); Lambda_mu = (N G / 2)(2 nu/(mu^2 pi^2) + i 8 nu^2/(mu^4 pi^4)).
ModeSet perturbative_modes(double n_emitters, double gamma_1d, double nu, int mu_max);

// Roots of ((k+nu)/(k-nu))^2 = e^{2ik} continuously connected to k = mu pi,
// tracked by a damped-Newton homotopy in nu; Lambda = N G nu / (k^2 - nu^2).
ModeSet continuum_modes(double n_emitters, double gamma_1d, double nu, int count);

// eta(N) = (N Gamma_1D / 2)(delta_z / lambda): approximate loss rate of the
// symmetric coherence into the narrow resonances.
double dark_coupling_rate(double n_emitters, double gamma_1d, double delta_z);

// Im Lambda_1 / Im Lambda_0 from the perturbative expansion; << 1 means a
// clean single broad resonance.
double single_resonance_margin(double n_emitters, double gamma_1d, double nu);

// Mode-resolved bright-to-dark coupling elements (N G nu)/(2 sqrt(2) mu^2 pi^2)
// for even mu (zero for odd); diagnostic only, their sum is not asserted
// against eta.
std::vector<double> dark_coupling_elements(double n_emitters, double gamma_1d,
                                           double nu, int mu_max);

// CSV export: mu, re_lambda_hz, im_lambda_hz, re_k, im_k, method.
std::string modeset_to_csv(const ModeSet& modes);

}  // namespace wqed

#endif
