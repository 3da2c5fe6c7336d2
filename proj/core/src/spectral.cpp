#include "wqed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "wqed/errors.hpp"
#include "wqed/faddeeva.hpp"
#include "wqed/quadrature.hpp"

namespace wqed {

namespace {

constexpr double kSqrtLn2 = 0.8325546111576977;  // sqrt(ln 2)
constexpr double kSqrtPi = 1.7724538509055160;

double gaussian_a(double gamma_inh) { return gamma_inh / kSqrtLn2; }

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    acc += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  }
  return acc;
}

double interp_table(const std::vector<double>& x, const std::vector<double>& y,
                    double xq) {
  if (xq <= x.front() || xq >= x.back()) {
    // exactly at the edge nodes counts as inside
    if (xq == x.front()) return y.front();
    if (xq == x.back()) return y.back();
    return 0.0;
  }
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double t = (xq - x[i]) / (x[i + 1] - x[i]);
  return y[i] + t * (y[i + 1] - y[i]);
}

}  // namespace

SpectralLine SpectralLine::gaussian(double gamma_inh) {
  SpectralLine l;
  l.kind = LineKind::Gaussian;
  l.gamma_inh = gamma_inh;
  l.validate();
  return l;
}

SpectralLine SpectralLine::uniform(double gamma_inh) {
  SpectralLine l;
  l.kind = LineKind::Uniform;
  l.gamma_inh = gamma_inh;
  l.validate();
  return l;
}

SpectralLine SpectralLine::lorentzian(double gamma_inh) {
  SpectralLine l;
  l.kind = LineKind::Lorentzian;
  l.gamma_inh = gamma_inh;
  l.validate();
  return l;
}

SpectralLine SpectralLine::tabulated(std::vector<double> delta,
                                     std::vector<double> rho) {
  SpectralLine l;
  l.kind = LineKind::Tabulated;
  l.table_delta = std::move(delta);
  l.table_rho = std::move(rho);
  if (l.table_delta.size() < 2 || l.table_delta.size() != l.table_rho.size()) {
    throw InvalidLine("tabulated line needs >= 2 (delta, rho) nodes");
  }
  for (std::size_t i = 0; i + 1 < l.table_delta.size(); ++i) {
    if (!(l.table_delta[i] < l.table_delta[i + 1])) {
      throw InvalidLine("tabulated delta nodes must be strictly increasing");
    }
  }
  for (double r : l.table_rho) {
    if (!(r >= 0.0)) throw InvalidLine("tabulated rho must be >= 0");
  }
  const double z = trapezoid(l.table_delta, l.table_rho);
  if (!(z > 0.0)) throw InvalidLine("tabulated density integrates to zero");
  for (double& r : l.table_rho) r /= z;

  // FWHM of the tabulated density, by scanning for half-max crossings.
  const double peak = *std::max_element(l.table_rho.begin(), l.table_rho.end());
  const double half = 0.5 * peak;
  double lo = l.table_delta.front(), hi = l.table_delta.back();
  for (std::size_t i = 0; i + 1 < l.table_rho.size(); ++i) {
    if (l.table_rho[i] < half && l.table_rho[i + 1] >= half) {
      const double t = (half - l.table_rho[i]) / (l.table_rho[i + 1] - l.table_rho[i]);
      lo = l.table_delta[i] + t * (l.table_delta[i + 1] - l.table_delta[i]);
      break;
    }
  }
  for (std::size_t i = l.table_rho.size() - 1; i > 0; --i) {
    if (l.table_rho[i] < half && l.table_rho[i - 1] >= half) {
      const double t = (half - l.table_rho[i]) / (l.table_rho[i - 1] - l.table_rho[i]);
      hi = l.table_delta[i] + t * (l.table_delta[i - 1] - l.table_delta[i]);
      break;
    }
  }
  l.gamma_inh = std::max(hi - lo, 0.0);
  if (l.gamma_inh == 0.0) l.gamma_inh = l.table_delta.back() - l.table_delta.front();
  return l;
}

void SpectralLine::validate() const {
  if (kind == LineKind::Tabulated) {
    if (table_delta.size() < 2) throw InvalidLine("empty tabulated line");
    return;
  }
  if (!(gamma_inh > 0.0)) throw InvalidLine("gamma_inh must be > 0");
}

double density_eval(const SpectralLine& line, double delta) {
  const double g = line.gamma_inh;
  switch (line.kind) {
    case LineKind::Gaussian: {
      const double a = gaussian_a(g);
      return std::exp(-delta * delta / (a * a)) / (a * kSqrtPi);
    }
    case LineKind::Uniform:
      return (std::abs(delta) <= 0.5 * g) ? 1.0 / g : 0.0;
    case LineKind::Lorentzian: {
      const double hg = 0.5 * g;
      return (hg / pi) / (hg * hg + delta * delta);
    }
    case LineKind::Tabulated:
      return interp_table(line.table_delta, line.table_rho, delta);
  }
  return 0.0;
}

double cdf_eval(const SpectralLine& line, double delta) {
  const double g = line.gamma_inh;
  switch (line.kind) {
    case LineKind::Gaussian:
      return 0.5 * (1.0 + std::erf(delta / gaussian_a(g)));
    case LineKind::Uniform:
      return std::clamp((delta + 0.5 * g) / g, 0.0, 1.0);
    case LineKind::Lorentzian:
      return 0.5 + std::atan(2.0 * delta / g) / pi;
    case LineKind::Tabulated: {
      const auto& x = line.table_delta;
      const auto& r = line.table_rho;
      if (delta <= x.front()) return 0.0;
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (delta >= x[i + 1]) {
          acc += 0.5 * (r[i] + r[i + 1]) * (x[i + 1] - x[i]);
        } else {
          const double t = (delta - x[i]) / (x[i + 1] - x[i]);
          const double rmid = r[i] + t * (r[i + 1] - r[i]);
          acc += 0.5 * (r[i] + rmid) * (delta - x[i]);
          break;
        }
      }
      return std::min(acc, 1.0);
    }
  }
  return 0.0;
}

double quantile_eval(const SpectralLine& line, double u) {
  const double g = line.gamma_inh;
  switch (line.kind) {
    case LineKind::Gaussian:
      return gaussian_a(g) * erf_inv(2.0 * u - 1.0);
    case LineKind::Uniform:
      return g * (u - 0.5);
    case LineKind::Lorentzian:
      return 0.5 * g * std::tan(pi * (u - 0.5));
    case LineKind::Tabulated: {
      const auto& x = line.table_delta;
      const auto& r = line.table_rho;
      if (u <= 0.0) return x.front();
      if (u >= 1.0) return x.back();
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = x[i + 1] - x[i];
        const double seg = 0.5 * (r[i] + r[i + 1]) * h;
        if (acc + seg < u) {
          acc += seg;
          continue;
        }
        // invert the piecewise-quadratic cumulative on this segment
        const double target = u - acc;
        const double slope = (r[i + 1] - r[i]) / h;
        if (std::abs(slope) < 1e-300) {
          return x[i] + (r[i] > 0.0 ? target / r[i] : 0.5 * h);
        }
        // 0.5*slope*t^2 + r[i]*t - target = 0
        const double disc = r[i] * r[i] + 2.0 * slope * target;
        const double t = (-r[i] + std::sqrt(std::max(disc, 0.0))) / slope;
        return x[i] + std::clamp(t, 0.0, h);
      }
      return x.back();
    }
  }
  return 0.0;
}

namespace {

Complex chi_tabulated(const SpectralLine& line, double delta_c, double gamma_prime) {
  const Complex zeta(delta_c, 0.5 * gamma_prime);
  const auto& x = line.table_delta;
  auto f = [&](double d) -> Complex {
    return interp_table(x, line.table_rho, d) / (zeta - d);
  };
  // Breakpoints at every table node keep each subinterval smooth; extra
  // forced splits within 5 node-widths of the pole at d = delta_c.
  std::vector<double> bp(x.begin() + 1, x.end() - 1);
  const double node_w = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  if (delta_c > x.front() && delta_c < x.back()) {
    for (int k = -5; k <= 5; ++k) {
      bp.push_back(delta_c + k * node_w);
      bp.push_back(delta_c + 0.2 * k * node_w);
    }
    std::sort(bp.begin(), bp.end());
  }
  const double tol = 1e-10 / line.gamma_inh;
  const QuadResult q = integrate_adaptive(f, x.front(), x.back(), tol, bp, 40000);
  if (!q.converged) {
    throw QuadratureFailure("tabulated chi quadrature did not reach tolerance " +
                            std::to_string(tol) + " (error " +
                            std::to_string(q.error) + ")");
  }
  return line.gamma_inh * q.value;
}

}  // namespace

ResponseValue chi_eval(const SpectralLine& line, double delta_c, double gamma_prime) {
  line.validate();
  if (!(gamma_prime >= 0.0)) throw InvalidLine("gamma_prime must be >= 0");
  const double g = line.gamma_inh;
  ResponseValue out;
  out.delta_c = delta_c;
  out.gamma_prime = gamma_prime;
  switch (line.kind) {
    case LineKind::Gaussian: {
      const double a = gaussian_a(g);
      const Complex arg = Complex(0.5 * gamma_prime, -delta_c) / a;
      out.chi = g * (-iunit * kSqrtPi / a) * erfcx(arg);
      break;
    }
    case LineKind::Uniform: {
      if (gamma_prime == 0.0) {
        const double hg = 0.5 * g;
        if (delta_c == hg || delta_c == -hg) {
          throw InvalidLine("chi is singular at the uniform-line edge for Gamma' = 0");
        }
        const double mag = std::log(std::abs((delta_c + hg) / (delta_c - hg)));
        // limit from Gamma' -> 0+: -i pi inside the support, real outside
        out.chi = (std::abs(delta_c) < hg) ? Complex(mag, -pi) : Complex(mag, 0.0);
      } else {
        const Complex zeta(delta_c, 0.5 * gamma_prime);
        out.chi = std::log((zeta + 0.5 * g) / (zeta - 0.5 * g));
      }
      break;
    }
    case LineKind::Lorentzian:
      out.chi = g / Complex(delta_c, 0.5 * (gamma_prime + g));
      break;
    case LineKind::Tabulated:
      out.chi = chi_tabulated(line, delta_c, gamma_prime);
      break;
  }
  return out;
}

Complex chi_asymptotic(const SpectralLine& line, double delta_c, double gamma_prime) {
  return Complex(delta_c, pi * delta_c * delta_c * density_eval(line, delta_c) +
                              0.5 * gamma_prime);
}

SpectralLine apply_hole_burn(const SpectralLine& base,
                             const std::vector<HoleSpec>& holes, int grid_n) {
  base.validate();
  if (grid_n < 1000) throw InvalidHole("hole-burn grid must have >= 1000 nodes");
  const double g = base.gamma_inh;
  for (const HoleSpec& h : holes) {
    if (!(h.width > 0.0)) throw InvalidHole("hole width must be > 0");
    if (!(h.depth >= 0.0 && h.depth <= 1.0)) throw InvalidHole("hole depth must be in [0,1]");
    if (std::abs(h.center) > 10.0 * g) {
      throw InvalidHole("hole center outside +-10 gamma_inh");
    }
  }

  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(grid_n));
  if (base.kind == LineKind::Lorentzian) {
    // uniform core +-10 g plus logarithmic tail nodes out to +-1000 g;
    // the heavy tails otherwise bias the normalization at the 1e-3 level
    const int n_core = (2 * grid_n) / 3;
    const int n_tail = (grid_n - n_core) / 2;
    for (int i = n_tail - 1; i >= 0; --i) {
      xs.push_back(-10.0 * g * std::pow(100.0, (i + 1.0) / n_tail));
    }
    for (int i = 0; i < n_core; ++i) {
      xs.push_back(-10.0 * g + 20.0 * g * i / (n_core - 1.0));
    }
    for (int i = 0; i < n_tail; ++i) {
      xs.push_back(10.0 * g * std::pow(100.0, (i + 1.0) / n_tail));
    }
  } else {
    double lo = -10.0 * g, hi = 10.0 * g;
    if (base.kind == LineKind::Tabulated) {
      lo = base.table_delta.front();
      hi = base.table_delta.back();
    }
    for (int i = 0; i < grid_n; ++i) {
      xs.push_back(lo + (hi - lo) * i / (grid_n - 1.0));
    }
  }

  std::vector<double> rho;
  rho.reserve(xs.size());
  for (double x : xs) {
    double r = density_eval(base, x);
    for (const HoleSpec& h : holes) {
      const double hw = 0.5 * h.width;
      const double notch = hw * hw / ((x - h.center) * (x - h.center) + hw * hw);
      r *= 1.0 - h.depth * notch;
    }
    rho.push_back(r);
  }
  const double z = trapezoid(xs, rho);
  if (z < 1e-6) throw InvalidHole("line burned away: residual integral < 1e-6");
  SpectralLine out = SpectralLine::tabulated(std::move(xs), std::move(rho));
  // keep the base width parameter; hole burning does not redefine the scale
  out.gamma_inh = base.gamma_inh;
  return out;
}

std::string tabulated_to_csv(const SpectralLine& line) {
  if (line.kind != LineKind::Tabulated) {
    throw InvalidLine("only tabulated lines have a CSV form");
  }
  std::string out = "delta_hz,rho_per_hz\n";
  char buf[80];
  for (std::size_t i = 0; i < line.table_delta.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", rad_to_hz(line.table_delta[i]),
                  line.table_rho[i] * two_pi);
    out += buf;
  }
  return out;
}

SpectralLine tabulated_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string linebuf;
  std::vector<double> xs, rs;
  bool first = true;
  while (std::getline(in, linebuf)) {
    if (linebuf.empty()) continue;
    if (first) {
      first = false;  // header
      continue;
    }
    double x, r;
    if (std::sscanf(linebuf.c_str(), "%lf,%lf", &x, &r) != 2) {
      throw ParseError("bad tabulated-line CSV row: " + linebuf);
    }
    xs.push_back(hz_to_rad(x));
    rs.push_back(r / two_pi);
  }
  return SpectralLine::tabulated(std::move(xs), std::move(rs));
}

}  // namespace wqed
