#include "wqed/cqed.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "wqed/errors.hpp"
#include "wqed/modes.hpp"

namespace wqed {

CavityParams cqed_params(double n_q, double n_c, double gamma_1d, double gamma_inh) {
  if (n_q < 1 || n_c < 1) throw SchemaError("cqed_params needs N_Q, N_C >= 1");
  CavityParams p;
  p.gamma = n_q * gamma_1d + gamma_inh;
  p.kappa = gamma_inh;
  p.g = std::sqrt(0.5 * n_q * n_c) * gamma_1d;
  return p;
}

CqedEigenvalues cqed_eigenvalues(double n_q, double n_c, double gamma_1d,
                                 double gamma_inh) {
  CqedEigenvalues out;
  const double radicand = 8.0 * n_q * n_c - n_q * n_q;
  const double decay = 0.25 * n_q * gamma_1d + 0.5 * gamma_inh;
  if (radicand >= 0.0) {
    const double split = 0.25 * gamma_1d * std::sqrt(radicand);
    out.lambda_plus = Complex(split, -decay);
    out.lambda_minus = Complex(-split, -decay);
  } else {
    // below threshold the pair stays on the imaginary axis
    const double im_split = 0.25 * gamma_1d * std::sqrt(-radicand);
    out.lambda_plus = Complex(0.0, -decay + im_split);
    out.lambda_minus = Complex(0.0, -decay - im_split);
    out.weak_coupling = true;
  }
  return out;
}

ReducedTrace reduced_evolve(double n_q, double n_c, double gamma_1d, double gamma_inh,
                            double delta_c, Complex b_q0, Complex b_c0,
                            const std::vector<double>& t_grid) {
  const double g = std::sqrt(0.5 * n_q * n_c) * gamma_1d;
  const Complex a11(-0.5 * (n_q * gamma_1d + gamma_inh), delta_c);
  const Complex a22(-0.5 * gamma_inh, delta_c);
  const Complex a12 = iunit * g;

  // eigen-decomposition of [[a11, a12], [a12, a22]]
  const Complex mean = 0.5 * (a11 + a22);
  const Complex halfdiff = 0.5 * (a11 - a22);
  const Complex root = std::sqrt(halfdiff * halfdiff + a12 * a12);

  ReducedTrace out;
  out.times = t_grid;
  out.b_q.resize(t_grid.size());
  out.b_c.resize(t_grid.size());
  out.p.resize(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    Complex bq, bc;
    if (std::abs(root) * t < 1e-14) {
      // degenerate pair: exp(mean t)(1 + (A - mean) t)
      const Complex e = std::exp(mean * t);
      bq = e * (b_q0 + t * (halfdiff * b_q0 + a12 * b_c0));
      bc = e * (b_c0 + t * (a12 * b_q0 - halfdiff * b_c0));
    } else {
      const Complex ep = std::exp((mean + root) * t);
      const Complex em = std::exp((mean - root) * t);
      const Complex ch = 0.5 * (ep + em);
      const Complex sh = 0.5 * (ep - em) / root;
      bq = ch * b_q0 + sh * (halfdiff * b_q0 + a12 * b_c0);
      bc = ch * b_c0 + sh * (a12 * b_q0 - halfdiff * b_c0);
    }
    out.b_q[i] = bq;
    out.b_c[i] = bc;
    out.p[i] = std::norm(bq);
  }
  return out;
}

ProtectedRates protected_rates(const SpectralLine& line, Complex lambda,
                               double gamma_prime, const CavityParams& params) {
  const double omega = lambda.real();
  const double gamma_inh_eff =
      2.0 * (pi * omega * omega * density_eval(line, omega) + 0.5 * gamma_prime);
  ProtectedRates out;
  out.kappa_eff = gamma_inh_eff;
  out.gamma_eff = (params.gamma - params.kappa) + gamma_inh_eff;
  return out;
}

StrongCouplingReport strong_coupling_report(double n_q, double n_c, double gamma_1d,
                                            double gamma_inh, double delta_z) {
  StrongCouplingReport rep;
  rep.params = cqed_params(n_q, n_c, gamma_1d, gamma_inh);
  rep.eigenvalues = cqed_eigenvalues(n_q, n_c, gamma_1d, gamma_inh);
  rep.splitting = std::abs(rep.eigenvalues.lambda_plus.real() -
                           rep.eigenvalues.lambda_minus.real());
  rep.collective_ratio = std::sqrt(n_c * n_q) * gamma_1d / gamma_inh;
  rep.balance_ok = 2.0 * n_c >= n_q;
  rep.dark_qubit_ratio = dark_coupling_rate(n_q, gamma_1d, delta_z) / rep.params.g;
  rep.dark_mirror_ratio = dark_coupling_rate(2.0 * n_c, gamma_1d, delta_z) / rep.params.g;
  rep.gamma_1d = gamma_1d;
  return rep;
}

std::string report_to_json(const StrongCouplingReport& rep) {
  nlohmann::json j;
  const double g1 = rep.gamma_1d;
  j["params_hz"] = {{"gamma", rad_to_hz(rep.params.gamma)},
                    {"kappa", rad_to_hz(rep.params.kappa)},
                    {"g", rad_to_hz(rep.params.g)}};
  j["params_gamma1d"] = {{"gamma", rep.params.gamma / g1},
                         {"kappa", rep.params.kappa / g1},
                         {"g", rep.params.g / g1}};
  j["lambda_plus_hz"] = {rad_to_hz(rep.eigenvalues.lambda_plus.real()),
                         rad_to_hz(rep.eigenvalues.lambda_plus.imag())};
  j["lambda_minus_hz"] = {rad_to_hz(rep.eigenvalues.lambda_minus.real()),
                          rad_to_hz(rep.eigenvalues.lambda_minus.imag())};
  j["weak_coupling"] = rep.eigenvalues.weak_coupling;
  j["splitting_hz"] = rad_to_hz(rep.splitting);
  j["splitting_gamma1d"] = rep.splitting / g1;
  j["conditions"] = {{"collective_ratio", rep.collective_ratio},
                     {"balance_2nc_ge_nq", rep.balance_ok},
                     {"dark_qubit_ratio", rep.dark_qubit_ratio},
                     {"dark_mirror_ratio", rep.dark_mirror_ratio}};
  return j.dump(2) + "\n";
}

}  // namespace wqed
