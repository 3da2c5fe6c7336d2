#ifndef WQED_SPECTRAL_HPP
#define WQED_SPECTRAL_HPP

#include <string>
#include <vector>

#include "wqed/types.hpp"

namespace wqed {

enum class LineKind { Gaussian, Uniform, Lorentzian, Tabulated };

// Inhomogeneous frequency density rho(Delta). gamma_inh is the line's
// width parameter in rad/s (the paper's gamma_inh; for the Gaussian kind
// the density is exp(-Delta^2/a^2)/(a sqrt(pi)) with a = gamma_inh/sqrt(ln 2)).
// Detunings are measured from the line mean. Tabulated lines are piecewise
// linear with unit trapezoidal integral.
struct SpectralLine {
  LineKind kind = LineKind::Gaussian;
  double gamma_inh = 0.0;            // rad/s
  std::vector<double> table_delta;   // Tabulated only, strictly increasing
  std::vector<double> table_rho;     // s/rad, >= 0

  static SpectralLine gaussian(double gamma_inh);
  static SpectralLine uniform(double gamma_inh);
  static SpectralLine lorentzian(double gamma_inh);
  // Normalizes rho to unit trapezoidal integral; throws InvalidLine on a
  // non-increasing grid, negative density or vanishing integral.
  static SpectralLine tabulated(std::vector<double> delta, std::vector<double> rho);

  void validate() const;  // throws InvalidLine
};

struct ResponseValue {
  Complex chi;          // dimensionless
  double delta_c;       // rad/s
  double gamma_prime;   // rad/s
};

// Lorentzian notch removed from a line: rho'(d) ~ rho(d) (1 - depth * L(d))
// with L unit-peak of FWHM `width` at `center`.
struct HoleSpec {
  double center = 0.0;  // rad/s
  double width = 0.0;   // rad/s, FWHM, > 0
  double depth = 0.0;   // in [0, 1]
};

double density_eval(const SpectralLine& line, double delta);
double cdf_eval(const SpectralLine& line, double delta);
// Inverse CDF; for Lorentzian the argument is used as-is (callers truncate).
double quantile_eval(const SpectralLine& line, double u);

// chi(Delta_c) = gamma_inh * Integral rho(d) / (Delta_c - d + i Gamma'/2) dd.
// Closed forms for Gaussian (erfcx), Uniform (principal log) and Lorentzian;
// adaptive quadrature with pole-forced subdivision for Tabulated.
ResponseValue chi_eval(const SpectralLine& line, double delta_c, double gamma_prime);

// First-order large-|Delta_c| expansion of gamma_inh * chi^{-1}:
// Delta_c + i pi Delta_c^2 rho(Delta_c) + i Gamma'/2.  Valid for
// |Delta_c| >> gamma_inh.
Complex chi_asymptotic(const SpectralLine& line, double delta_c, double gamma_prime);

// Burns Lorentzian notches into `base` and renormalizes on a tabulation
// grid of `grid_n` nodes (>= 1000) spanning +-10 gamma_inh, or
// +-1000 gamma_inh with logarithmic tail nodes for a Lorentzian base.
SpectralLine apply_hole_burn(const SpectralLine& base,
                             const std::vector<HoleSpec>& holes,
                             int grid_n);

// Two-column CSV (delta_hz, rho_per_hz) with a one-line header.
std::string tabulated_to_csv(const SpectralLine& line);
SpectralLine tabulated_from_csv(const std::string& text);

}  // namespace wqed

#endif
