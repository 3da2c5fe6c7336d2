#ifndef WQED_CQED_HPP
#define WQED_CQED_HPP

#include <string>
#include <vector>

#include "wqed/spectral.hpp"
#include "wqed/types.hpp"

namespace wqed {

// Mapped cavity-QED parameters of the mirror-qubit-mirror system:
// gamma = N_Q Gamma_1D + gamma_inh, kappa = gamma_inh, g = sqrt(N_Q N_C / 2) Gamma_1D.
struct CavityParams {
  double gamma = 0.0;  // rad/s
  double kappa = 0.0;  // rad/s
  double g = 0.0;      // rad/s
};

struct CqedEigenvalues {
  Complex lambda_plus;
  Complex lambda_minus;
  bool weak_coupling = false;  // 8 N_Q N_C < N_Q^2: imaginary splitting
};

struct StrongCouplingReport {
  CavityParams params;
  CqedEigenvalues eigenvalues;
  double splitting = 0.0;          // |Re l+ - Re l-|, rad/s
  double collective_ratio = 0.0;   // sqrt(N_C N_Q) Gamma_1D / gamma_inh (want >> 1)
  bool balance_ok = false;         // 2 N_C >= N_Q
  double dark_qubit_ratio = 0.0;   // eta(N_Q) / g (want <~ 1)
  double dark_mirror_ratio = 0.0;  // eta(2 N_C) / g (want <~ 1)
  double gamma_1d = 0.0;           // rad/s, for unit conversion on export
};

CavityParams cqed_params(double n_q, double n_c, double gamma_1d, double gamma_inh);

// Eigenvalues of the two-mode qubit/cavity system,
//   lambda_pm = +- (Gamma_1D/4) sqrt(8 N_Q N_C - N_Q^2)
//               - i (N_Q Gamma_1D / 4 + gamma_inh / 2),
// i.e. exactly the eigenvalues of the coefficient matrix
// [[-(N_Q G + g_inh)/2, i g], [i g, -g_inh/2]] written as energies.
// Below threshold (8 N_Q N_C < N_Q^2) the splitting turns imaginary and the
// result is tagged weak_coupling.
CqedEigenvalues cqed_eigenvalues(double n_q, double n_c, double gamma_1d,
                                 double gamma_inh);

struct ReducedTrace {
  std::vector<double> times;   // s
  std::vector<Complex> b_q;
  std::vector<Complex> b_c;
  std::vector<double> p;       // |B_Q|^2
};

// Exact 2x2 propagation of the reduced qubit/cavity equations at drive
// detuning delta_c (eigendecomposition, no stepping error).
ReducedTrace reduced_evolve(double n_q, double n_c, double gamma_1d, double gamma_inh,
                            double delta_c, Complex b_q0, Complex b_c0,
                            const std::vector<double>& t_grid);

// Cavity protection: gamma_inh -> 2 (pi Re[lambda]^2 rho(Re[lambda]) + Gamma'/2)
// in (gamma, kappa); limits N_Q Gamma_1D + Gamma' and Gamma'.
struct ProtectedRates {
  double gamma_eff = 0.0;
  double kappa_eff = 0.0;
};
ProtectedRates protected_rates(const SpectralLine& line, Complex lambda,
                               double gamma_prime, const CavityParams& params);

StrongCouplingReport strong_coupling_report(double n_q, double n_c, double gamma_1d,
                                            double gamma_inh, double delta_z);

// JSON export with rates in Hz and in units of Gamma_1D.
std::string report_to_json(const StrongCouplingReport& report);

}  // namespace wqed

#endif
