#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "wqed/errors.hpp"
#include "wqed/spectral.hpp"

using namespace wqed;

TEST_CASE("density closed forms") {
  CHECK(density_eval(SpectralLine::uniform(2.0), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(density_eval(SpectralLine::uniform(2.0), 1.5) == 0.0);
  // rho_g(0) = 1 / ((gamma/sqrt(ln 2)) sqrt(pi)) = sqrt(ln2/pi) for gamma = 1
  CHECK(density_eval(SpectralLine::gaussian(1.0), 0.0) ==
        doctest::Approx(std::sqrt(std::log(2.0) / pi)).epsilon(1e-12));
  CHECK(density_eval(SpectralLine::gaussian(1.0), 0.0) == doctest::Approx(0.46971).epsilon(1e-4));
  // Lorentzian at center: 2/(pi gamma)
  CHECK(density_eval(SpectralLine::lorentzian(3.0), 0.0) ==
        doctest::Approx(2.0 / (pi * 3.0)).epsilon(1e-14));
}

TEST_CASE("closed-form densities integrate to one") {
  using testing::density_norm_trapezoid;
  CHECK(density_norm_trapezoid(SpectralLine::gaussian(1.0), -14.0, 14.0, 2000001) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(density_norm_trapezoid(SpectralLine::uniform(1.0), -0.5, 0.5, 2000001) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // Lorentzian via the arctan substitution: d = (g/2) tan(theta)
  const SpectralLine lor = SpectralLine::lorentzian(1.0);
  double acc = 0.0;
  const int n = 400001;
  for (int i = 0; i < n; ++i) {
    const double th = -0.5 * pi + pi * (i + 0.5) / n;
    const double d = 0.5 * std::tan(th);
    const double jac = 0.5 / (std::cos(th) * std::cos(th));
    acc += density_eval(lor, d) * jac * (pi / n);
  }
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("chi closed forms: spec anchor values") {
  // Lorentzian, gamma=1, Gamma'=0
  CHECK(std::abs(chi_eval(SpectralLine::lorentzian(1.0), 0.0, 0.0).chi - Complex(0, -2)) <
        1e-14);
  CHECK(std::abs(chi_eval(SpectralLine::lorentzian(1.0), 0.5, 0.0).chi - Complex(1, -1)) <
        1e-14);
  // Uniform, Gamma' -> 0+: chi -> -i pi at center
  CHECK(std::abs(chi_eval(SpectralLine::uniform(1.0), 0.0, 0.0).chi - Complex(0, -pi)) < 1e-12);
  CHECK(std::abs(chi_eval(SpectralLine::uniform(1.0), 0.0, 1e-12).chi - Complex(0, -pi)) <
        1e-9);
  // Gaussian, Gamma' -> 0+: chi -> -i sqrt(pi ln 2) = -1.4756646...i
  const Complex chi_g = chi_eval(SpectralLine::gaussian(1.0), 0.0, 0.0).chi;
  CHECK(std::abs(chi_g - Complex(0.0, -std::sqrt(pi * std::log(2.0)))) < 1e-12);
  CHECK(chi_g.imag() == doctest::Approx(-1.4757).epsilon(1e-4));
}

TEST_CASE("lorentzian chi equals the rational closed form at machine precision") {
  for (double g : {0.3, 1.0, 7.7}) {
    const SpectralLine line = SpectralLine::lorentzian(g);
    for (double d : {-4.1, 0.0, 0.9, 12.0}) {
      for (double gp : {0.0, 0.02, 1.3}) {
        const Complex expect = g / Complex(d, 0.5 * (gp + g));
        CHECK(chi_eval(line, d, gp).chi == expect);
      }
    }
  }
}

TEST_CASE("chi passivity: Im chi < 0 for Gamma' > 0 on a wide scan") {
  for (const SpectralLine& line : {SpectralLine::gaussian(1.0), SpectralLine::uniform(1.0),
                                   SpectralLine::lorentzian(1.0)}) {
    for (int i = 0; i < 1000; ++i) {
      const double d = -8.0 + 16.0 * i / 999.0;
      CHECK(chi_eval(line, d, 1e-3).chi.imag() < 0.0);
    }
  }
}

TEST_CASE("chi symmetry for even densities") {
  for (const SpectralLine& line : {SpectralLine::gaussian(2.0), SpectralLine::uniform(2.0),
                                   SpectralLine::lorentzian(2.0)}) {
    for (double d : {0.13, 0.77, 1.9, 4.2}) {
      const Complex plus = chi_eval(line, d, 1e-2).chi;
      const Complex minus = chi_eval(line, -d, 1e-2).chi;
      CHECK(std::abs(plus.real() + minus.real()) < 1e-10);
      CHECK(std::abs(plus.imag() - minus.imag()) < 1e-10);
    }
  }
}

TEST_CASE("chi against the quadrature oracle (all closed forms)") {
  const double gp = 1e-3;
  for (const SpectralLine& line : {SpectralLine::gaussian(1.0), SpectralLine::uniform(1.0),
                                   SpectralLine::lorentzian(1.0)}) {
    for (int i = 0; i <= 40; ++i) {
      const double d = -5.0 + 10.0 * i / 40.0;
      if (line.kind == LineKind::Uniform && std::abs(std::abs(d) - 0.5) < 0.02) {
        continue;  // oracle converges slowly right at the edge discontinuity
      }
      const Complex ref = testing::chi_quadrature_oracle(line, d, gp);
      const Complex got = chi_eval(line, d, gp).chi;
      CHECK(std::abs(got - ref) / std::abs(ref) < 1e-8);
    }
  }
}

TEST_CASE("gaussian chi via erfcx vs quadrature, max relative error <= 1e-8") {
  const SpectralLine line = SpectralLine::gaussian(1.0);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double d = -5.0 + 10.0 * i / 100.0;
    const Complex ref = testing::chi_quadrature_oracle(line, d, 1e-3);
    worst = std::max(worst, std::abs(chi_eval(line, d, 1e-3).chi - ref) / std::abs(ref));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("tabulated chi: quadrature path reproduces a tabulated gaussian") {
  // tabulate the gaussian density and compare the response W = chi/gamma_inh
  // (chi itself carries the line's width label, which an honest FWHM scan of
  // the table pins at twice the gaussian-kind parameter)
  const SpectralLine g = SpectralLine::gaussian(1.0);
  std::vector<double> xs, rs;
  for (int i = 0; i < 6001; ++i) {
    const double x = -10.0 + 20.0 * i / 6000.0;
    xs.push_back(x);
    rs.push_back(density_eval(g, x));
  }
  const SpectralLine tab = SpectralLine::tabulated(xs, rs);
  CHECK(tab.gamma_inh == doctest::Approx(2.0).epsilon(1e-3));
  for (double d : {0.0, 0.6, 2.2, -3.7}) {
    const Complex ref = chi_eval(g, d, 1e-2).chi / g.gamma_inh;
    const Complex got = chi_eval(tab, d, 1e-2).chi / tab.gamma_inh;
    CHECK(std::abs(got - ref) / std::abs(ref) < 5e-5);  // piecewise-linear table bias
  }
}

TEST_CASE("chi_asymptotic") {
  // Lorentzian: exact tail identity gamma chi^{-1} = delta + i(gamma')/2 + i gamma/2
  const SpectralLine lor = SpectralLine::lorentzian(1.0);
  const double d = 1e6;
  const Complex asym = chi_asymptotic(lor, d, 0.0);
  const Complex exact = lor.gamma_inh / chi_eval(lor, d, 0.0).chi;
  CHECK(std::abs(asym - exact) / std::abs(exact) < 1e-9);

  // Gaussian at delta = 10 gamma: within 2% of the exact inverse response
  const SpectralLine gau = SpectralLine::gaussian(1.0);
  const Complex a2 = chi_asymptotic(gau, 10.0, 1e-6);
  const Complex e2 = gau.gamma_inh / chi_eval(gau, 10.0, 1e-6).chi;
  CHECK(std::abs(a2 - e2) / std::abs(e2) < 0.02);

  // Uniform outside the support with Gamma' = 0: purely real
  CHECK(chi_asymptotic(SpectralLine::uniform(1.0), 2.0, 0.0).imag() == 0.0);
}

TEST_CASE("hole burning") {
  const SpectralLine base = SpectralLine::gaussian(1.0);

  SUBCASE("depth zero is the identity up to renormalization") {
    const SpectralLine burned = apply_hole_burn(base, {{0.0, 0.5, 0.0}}, 2001);
    for (double d : {0.0, 0.4, -1.3, 3.0}) {
      CHECK(std::abs(density_eval(burned, d) - density_eval(base, d)) < 1e-10);
    }
  }

  SUBCASE("full-depth narrow hole removes the center, stays normalized") {
    const SpectralLine burned = apply_hole_burn(base, {{0.0, 1e-4, 1.0}}, 200001);
    CHECK(density_eval(burned, 0.0) < 1e-4);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < burned.table_delta.size(); ++i) {
      acc += 0.5 * (burned.table_rho[i] + burned.table_rho[i + 1]) *
             (burned.table_delta[i + 1] - burned.table_delta[i]);
    }
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("on-resonance absorption drops after burning") {
    const SpectralLine burned = apply_hole_burn(base, {{0.0, 0.5, 0.9}}, 20001);
    const double im_b = chi_eval(burned, 0.0, 1e-3).chi.imag();
    const double im_0 = chi_eval(base, 0.0, 1e-3).chi.imag();
    CHECK(std::abs(im_b) < std::abs(im_0));
  }

  SUBCASE("burning the whole line away fails") {
    // a full-depth notch much wider than the +-10 gamma grid leaves only
    // the ~ var/(w/2)^2 quadratic residue, below the 1e-6 threshold
    CHECK_THROWS_AS(apply_hole_burn(base, {{0.0, 4000.0, 1.0}}, 2001), InvalidHole);
  }
}

TEST_CASE("tabulated CSV round trip") {
  const SpectralLine g = SpectralLine::gaussian(1.0);
  const SpectralLine burned = apply_hole_burn(g, {{0.2, 0.3, 0.5}}, 2001);
  const SpectralLine back = tabulated_from_csv(tabulated_to_csv(burned));
  REQUIRE(back.table_delta.size() == burned.table_delta.size());
  for (std::size_t i = 0; i < back.table_delta.size(); i += 97) {
    CHECK(back.table_delta[i] == doctest::Approx(burned.table_delta[i]).epsilon(1e-12));
    CHECK(back.table_rho[i] == doctest::Approx(burned.table_rho[i]).epsilon(1e-12));
  }
}

TEST_CASE("quantiles") {
  CHECK(quantile_eval(SpectralLine::uniform(1.0), 0.25) == doctest::Approx(-0.25));
  CHECK(quantile_eval(SpectralLine::uniform(1.0), 0.75) == doctest::Approx(0.25));
  // gaussian quantiles invert the cdf
  const SpectralLine g = SpectralLine::gaussian(2.0);
  for (double u : {0.1, 0.37, 0.5, 0.9}) {
    CHECK(cdf_eval(g, quantile_eval(g, u)) == doctest::Approx(u).epsilon(1e-12));
  }
  const SpectralLine l = SpectralLine::lorentzian(1.0);
  for (double u : {0.02, 0.5, 0.93}) {
    CHECK(cdf_eval(l, quantile_eval(l, u)) == doctest::Approx(u).epsilon(1e-12));
  }
}
