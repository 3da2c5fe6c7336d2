#include <cmath>

#include "doctest.h"
#include "wqed/ensemble.hpp"
#include "wqed/modes.hpp"
#include "wqed/rng.hpp"

using namespace wqed;

namespace {

EnsembleSpec spec_with(std::uint64_t n, double gamma_1d, double dz,
                       Placement placement = Placement::RandomUniform) {
  EnsembleSpec s;
  s.n_emitters = n;
  s.gamma_1d = gamma_1d;
  s.line = SpectralLine::gaussian(1.0);
  s.delta_z = dz;
  s.placement = placement;
  return s;
}

}  // namespace

TEST_CASE("coupling matrix basics") {
  SUBCASE("m=1 entry is i N Gamma / 2") {
    const BinnedLayout l = build_bins(spec_with(1000, 2.0, 0.0), 1, 0);
    const CouplingMatrix m = coupling_matrix(l);
    CHECK(std::abs(m.m(0, 0) - Complex(0.0, 1000.0)) < 1e-9);
  }
  SUBCASE("quarter-wavelength pair picks up e^{i pi/2}") {
    EnsembleSpec s = spec_with(2, 1.0, 0.5, Placement::Explicit);
    s.explicit_positions = {0.0, 0.25};
    const BinnedLayout l = build_bins(s, 2, 0);
    const CouplingMatrix m = coupling_matrix(l);
    // off-diagonal (i n Gamma/2) e^{i beta/4} = i*(i/2) = -1/2
    CHECK(std::abs(m.m(0, 1) - Complex(-0.5, 0.0)) < 1e-12);
    CHECK(m.m(0, 1) == m.m(1, 0));
  }
  SUBCASE("complex symmetric and constant diagonal") {
    const BinnedLayout l = build_bins(spec_with(600, 1.3, 0.2), 6, 7);
    const CouplingMatrix m = coupling_matrix(l);
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(m.m(i, i) - Complex(0.0, 100.0 * 1.3 / 2.0)) < 1e-12);
      for (int j = 0; j < 6; ++j) CHECK(m.m(i, j) == m.m(j, i));
    }
  }
  SUBCASE("dissipator cos-kernel is PSD with rank <= 2") {
    const BinnedLayout l = build_bins(spec_with(500, 1.0, 0.3), 50, 3);
    const CouplingMatrix m = coupling_matrix(l);
    const Eigen::MatrixXcd h = m.anti_hermitian_part() / iunit;  // Im part kernel
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const auto& ev = es.eigenvalues();
    int positive = 0;
    for (int i = 0; i < ev.size(); ++i) {
      CHECK(ev[i] > -1e-9 * 500.0);
      if (ev[i] > 1e-9 * 500.0) ++positive;
    }
    CHECK(positive <= 2);
  }
}

TEST_CASE("dense collective modes") {
  SUBCASE("collapsed layout is rank one") {
    const BinnedLayout l = build_bins(spec_with(100000, two_pi * 100.0, 0.0), 100, 0);
    const ModeSet modes = collective_modes(coupling_matrix(l));
    const double ng = 1e5 * two_pi * 100.0;
    CHECK(std::abs(modes.lambda[0] - Complex(0.0, 0.5 * ng)) < 1e-8 * ng);
    for (std::size_t i = 1; i < modes.lambda.size(); ++i) {
      CHECK(std::abs(modes.lambda[i]) < 1e-8 * ng);
    }
  }
  SUBCASE("trace identity and passivity on random layouts") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const double dz = 0.05 + 0.1 * static_cast<double>(seed);
      const BinnedLayout l = build_bins(spec_with(6000, 1.0, dz), 60, seed);
      const ModeSet modes = collective_modes(coupling_matrix(l));
      Complex tr(0.0, 0.0);
      double min_im = 1e300;
      for (const Complex& lam : modes.lambda) {
        tr += lam;
        min_im = std::min(min_im, lam.imag());
      }
      const Complex expect(0.0, 0.5 * 6000.0);
      CHECK(std::abs(tr - expect) / std::abs(expect) < 1e-10);
      CHECK(min_im > -1e-9 * 6000.0);
    }
  }
  SUBCASE("two bins half a wavelength apart: {0, i N Gamma / 2}") {
    EnsembleSpec s = spec_with(2, 1.0, 1.0, Placement::Explicit);
    s.explicit_positions = {0.0, 0.5};
    const BinnedLayout l = build_bins(s, 2, 0);
    const ModeSet modes = collective_modes(coupling_matrix(l));
    CHECK(std::abs(modes.lambda[0] - Complex(0.0, 1.0)) < 1e-12);
    CHECK(std::abs(modes.lambda[1]) < 1e-12);
  }
}

TEST_CASE("perturbative modes: frozen expansion values") {
  // nu = 0.1, N Gamma = 2
  const ModeSet m = perturbative_modes(2.0, 1.0, 0.1, 2);
  REQUIRE(m.lambda.size() == 3);
  CHECK(m.lambda[0].real() == doctest::Approx(-0.0333333333).epsilon(1e-9));
  CHECK(m.lambda[0].imag() == doctest::Approx(0.9991111111).epsilon(1e-9));
  CHECK(m.lambda[1].real() == doctest::Approx(0.02026423672).epsilon(1e-9));
  CHECK(m.lambda[1].imag() == doctest::Approx(8.21280e-4).epsilon(1e-4));
  CHECK(m.lambda[2].real() == doctest::Approx(0.00506605918).epsilon(1e-9));
  CHECK(m.lambda[2].imag() == doctest::Approx(5.13300e-5).epsilon(1e-4));

  // nu = 0: collapsed ensemble
  const ModeSet z = perturbative_modes(2.0, 1.0, 0.0, 3);
  CHECK(z.lambda[0] == Complex(0.0, 1.0));
  for (std::size_t i = 1; i < z.lambda.size(); ++i) CHECK(z.lambda[i] == Complex(0.0, 0.0));

  // linewidth ordering 1/mu^4
  const ModeSet o = perturbative_modes(1.0, 1.0, 0.3, 6);
  for (std::size_t i = 2; i < o.lambda.size(); ++i) {
    CHECK(o.lambda[i - 1].imag() >= o.lambda[i].imag());
  }
}

TEST_CASE("continuum modes") {
  SUBCASE("k_1 matches the perturbative series at nu = 0.1") {
    const ModeSet m = continuum_modes(1.0, 1.0, 0.1, 3);
    REQUIRE(m.k.size() == 3);
    // k1 ~ pi - (2i/pi)0.1 + (4/pi^3)0.01; modes sorted by Im Lambda desc, so
    // k for mu=1 sits at index 1
    const Complex k1 = m.k[1];
    CHECK(k1.real() == doctest::Approx(pi + 4.0 * 0.01 / (pi * pi * pi)).epsilon(1e-4));
    CHECK(k1.imag() == doctest::Approx(-2.0 * 0.1 / pi).epsilon(2e-3));
  }
  SUBCASE("agreement with perturbative eigenvalues within 5 nu^3") {
    const double nu = 0.1;
    const ModeSet cont = continuum_modes(3.0, 1.0, nu, 3);
    const ModeSet pert = perturbative_modes(3.0, 1.0, nu, 2);
    for (int mu = 0; mu < 3; ++mu) {
      const double rel = std::abs(cont.lambda[mu] - pert.lambda[mu]) / std::abs(cont.lambda[mu]);
      CHECK(rel < 5.0 * nu * nu * nu);
    }
  }
  SUBCASE("perturbative agreement <= 10 nu^3 for mu <= 4, nu <= 0.3") {
    for (double nu : {0.1, 0.2, 0.3}) {
      const ModeSet cont = continuum_modes(1.0, 1.0, nu, 5);
      const ModeSet pert = perturbative_modes(1.0, 1.0, nu, 4);
      for (int mu = 0; mu < 5; ++mu) {
        const double rel =
            std::abs(cont.lambda[mu] - pert.lambda[mu]) / std::abs(cont.lambda[mu]);
        CHECK(rel < 10.0 * nu * nu * nu);
      }
    }
  }
  SUBCASE("trace of many continuum modes approaches i N Gamma / 2") {
    const ModeSet m = continuum_modes(1.0, 1.0, 0.4, 60);
    Complex tr(0.0, 0.0);
    for (const Complex& lam : m.lambda) tr += lam;
    CHECK(std::abs(tr - Complex(0.0, 0.5)) < 0.01);  // 1/mu^2 tail of the real parts
  }
  SUBCASE("large nu: the broadest mode has Re k near nu") {
    const double nu = 8.0;
    const ModeSet m = continuum_modes(1.0, 1.0, nu, 8);
    CHECK(std::abs(m.k[0].real() - nu) < 0.5 * pi);
  }
}

TEST_CASE("dense vs continuum eigenvalues at m = 1000 (equally spaced)") {
  for (double nu : {0.1, 0.5, 1.0}) {
    const double dz = nu / two_pi;
    const BinnedLayout l = build_bins(spec_with(1000000, 1.0, dz, Placement::EquallySpaced),
                                      1000, 0);
    const ModeSet dense = collective_modes(coupling_matrix(l));
    const ModeSet cont = continuum_modes(1e6, 1.0, nu, 8);
    for (int mu = 0; mu < 8; ++mu) {
      const double rel = std::abs(dense.lambda[mu] - cont.lambda[mu]) / std::abs(cont.lambda[mu]);
      CHECK(rel < 0.01);
    }
  }
}

TEST_CASE("dark coupling rate") {
  CHECK(dark_coupling_rate(100.0, 1.0, 0.0) == 0.0);
  // N = 4e8, Gamma/2pi = 100 Hz, dz = 0.1: eta/2pi = 2e9 Hz
  CHECK(rad_to_hz(dark_coupling_rate(4e8, two_pi * 100.0, 0.1)) ==
        doctest::Approx(2e9).epsilon(1e-12));
  CHECK(dark_coupling_rate(2e8, 1.0, 0.3) == doctest::Approx(2.0 * dark_coupling_rate(1e8, 1.0, 0.3)));
}

TEST_CASE("single resonance margin") {
  CHECK(single_resonance_margin(10.0, 1.0, 0.0) == 0.0);
  // nu = 0.2 pi: ratio = (8 nu^2 / pi^4) / (1 - 4 nu^2 / 45)
  const double nu = 0.2 * pi;
  const double expect = (8.0 * nu * nu / (pi * pi * pi * pi)) / (1.0 - 4.0 * nu * nu / 45.0);
  CHECK(single_resonance_margin(5.0, 2.0, nu) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(0.0325).epsilon(2e-2));

  // crossing at nu* = 1/sqrt(8/pi^4 + 4/45)
  double lo = 2.0, hi = 3.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (single_resonance_margin(1.0, 1.0, mid) < 1.0 ? lo : hi) = mid;
  }
  const double nu_star = 0.5 * (lo + hi);
  CHECK(nu_star == doctest::Approx(2.418).epsilon(5e-4));
  CHECK(nu_star / two_pi == doctest::Approx(0.3849).epsilon(5e-4));
}

TEST_CASE("appendix-E style diagnostic couplings (even mu only)") {
  const std::vector<double> el = dark_coupling_elements(10.0, 1.0, 0.2, 6);
  REQUIRE(el.size() == 6);
  CHECK(el[0] == 0.0);
  CHECK(el[2] == 0.0);
  CHECK(el[4] == 0.0);
  CHECK(el[1] > 0.0);
  CHECK(el[1] == doctest::Approx(10.0 * 0.2 / (2.0 * std::sqrt(2.0) * 4.0 * pi * pi)));
}

TEST_CASE("modeset csv") {
  const ModeSet m = perturbative_modes(2.0, 1.0, 0.1, 1);
  const std::string csv = modeset_to_csv(m);
  CHECK(csv.find("mu,re_lambda_hz,im_lambda_hz,re_k,im_k,method") == 0);
  CHECK(csv.find("perturbative") != std::string::npos);
}
