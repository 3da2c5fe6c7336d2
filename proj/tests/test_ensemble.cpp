#include <cmath>

#include "doctest.h"
#include "wqed/ensemble.hpp"
#include "wqed/errors.hpp"

using namespace wqed;

namespace {

EnsembleSpec basic_spec(std::uint64_t n, double dz) {
  EnsembleSpec s;
  s.n_emitters = n;
  s.gamma_1d = 1.0;
  s.gamma_prime = 0.0;
  s.line = SpectralLine::gaussian(1.0);
  s.delta_z = dz;
  return s;
}

}  // namespace

TEST_CASE("collapsed ensembles put every bin at the center") {
  EnsembleSpec s = basic_spec(1700, 0.0);
  s.center = 0.31;
  const BinnedLayout l = build_bins(s, 17, 5);
  for (double z : l.positions) CHECK(z == 0.31);
  CHECK(l.bin_weight.front() == 100.0);
}

TEST_CASE("random binning is deterministic and reproducible") {
  EnsembleSpec s = basic_spec(1000000000ULL, 0.1);
  const BinnedLayout a = build_bins(s, 1000, 42);
  const BinnedLayout b = build_bins(s, 1000, 42);
  CHECK(a.positions == b.positions);
  CHECK(a.bin_weight.front() == 1e6);
  const BinnedLayout c = build_bins(s, 1000, 43);
  CHECK(a.positions != c.positions);
  for (double z : a.positions) {
    CHECK(z >= -0.05);
    CHECK(z <= 0.05);
  }
}

TEST_CASE("equally spaced bins follow z_p = center - dz/2 + p dz/m") {
  EnsembleSpec s = basic_spec(4, 0.4);
  s.center = 0.2;
  s.placement = Placement::EquallySpaced;
  const BinnedLayout l = build_bins(s, 4, 0);
  REQUIRE(l.size() == 4);
  CHECK(l.positions[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(l.positions[1] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(l.positions[2] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(l.positions[3] == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("bin count must divide the emitter number") {
  EnsembleSpec s = basic_spec(1000, 0.1);
  CHECK_THROWS_AS(build_bins(s, 300, 0), BadBinCount);
  CHECK_THROWS_AS(build_bins(s, 1001, 0), BadBinCount);
  try {
    build_bins(s, 300, 0);
  } catch (const BadBinCount& e) {
    CHECK(std::string(e.what()).find("250") != std::string::npos);  // nearest valid m
  }
}

TEST_CASE("weight conservation: sum of bin weights equals N") {
  EnsembleSpec s = basic_spec(123456, 0.05);
  const BinnedLayout l = build_bins(s, 64, 9);
  double total = 0.0;
  for (double w : l.bin_weight) total += w;
  CHECK(total == 123456.0);
}

TEST_CASE("frequency quantile grids") {
  SUBCASE("uniform n_f = 2 gives the quartiles") {
    const FrequencyGrid g = sample_frequencies(SpectralLine::uniform(1.0), 2);
    REQUIRE(g.nodes.size() == 2);
    CHECK(g.nodes[0] == doctest::Approx(-0.25));
    CHECK(g.nodes[1] == doctest::Approx(0.25));
    CHECK(g.weights[0] == 0.5);
  }
  SUBCASE("gaussian nodes are symmetric about zero") {
    const FrequencyGrid g = sample_frequencies(SpectralLine::gaussian(3.0), 41);
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      CHECK(std::abs(g.nodes[q] + g.nodes[g.nodes.size() - 1 - q]) < 1e-10);
    }
  }
  SUBCASE("lorentzian truncation bound") {
    const FrequencyGrid g = sample_frequencies(SpectralLine::lorentzian(1.0), 10);
    const double bound = 0.5 * std::tan(pi * 0.499);
    for (double d : g.nodes) CHECK(std::abs(d) <= bound);
  }
  SUBCASE("weights sum to one") {
    for (int nf : {2, 7, 200}) {
      const FrequencyGrid g = sample_frequencies(SpectralLine::lorentzian(2.0), nf);
      double acc = 0.0;
      for (double w : g.weights) acc += w;
      CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("node mean approaches the line mean") {
    for (const SpectralLine& line :
         {SpectralLine::gaussian(1.0), SpectralLine::uniform(1.0),
          SpectralLine::lorentzian(1.0)}) {
      const int nf = 50;
      const FrequencyGrid g = sample_frequencies(line, nf);
      double mean = 0.0;
      for (std::size_t q = 0; q < g.nodes.size(); ++q) mean += g.weights[q] * g.nodes[q];
      CHECK(std::abs(mean) < 3.0 * line.gamma_inh / std::sqrt(static_cast<double>(nf)));
    }
  }
}

TEST_CASE("compensation detuning") {
  EnsembleSpec s = basic_spec(400000000ULL, 0.1);
  s.gamma_1d = two_pi * 100.0;
  // -(N Gamma/2)(nu/3), nu = 2 pi 0.1
  const double expected = -(4e8 * two_pi * 100.0 / 2.0) * (two_pi * 0.1 / 3.0);
  CHECK(compensation_detuning(s) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(compensation_detuning(basic_spec(100, 0.0)) == 0.0);
  EnsembleSpec d = basic_spec(800000000ULL, 0.1);
  d.gamma_1d = two_pi * 100.0;
  CHECK(compensation_detuning(d) == doctest::Approx(2.0 * expected).epsilon(1e-14));
}

TEST_CASE("cqed layout geometry") {
  EnsembleSpec mirror = basic_spec(400, 0.0);
  EnsembleSpec qubit = basic_spec(200, 0.0);

  SUBCASE("r=0, dz=0 collapses to {0, 1/4, 1/2}") {
    const CqedLayout cq = build_cqed_layout(mirror, qubit, 0, 1, 0, Compensation::Off);
    REQUIRE(cq.layout.size() == 3);
    CHECK(cq.layout.positions[0] == 0.0);
    CHECK(cq.layout.positions[1] == doctest::Approx(0.25));
    CHECK(cq.layout.positions[2] == doctest::Approx(0.5));
  }

  SUBCASE("r=3 separates the mirrors by 3.5 lambda") {
    const CqedLayout cq = build_cqed_layout(mirror, qubit, 3, 1, 0, Compensation::Off);
    CHECK(cq.layout.positions[2] - cq.layout.positions[0] == doctest::Approx(3.5));
  }

  SUBCASE("compensation difference lands on the qubit offset") {
    EnsembleSpec m2 = basic_spec(400, 0.1);
    EnsembleSpec q2 = basic_spec(200, 0.1);
    const CqedLayout cq = build_cqed_layout(m2, q2, 0, 4, 1, Compensation::Difference);
    const double want = compensation_detuning(m2) - compensation_detuning(q2);
    CHECK(cq.qubit.detuning_offset == doctest::Approx(want));
    // mirror bins keep zero offset
    CHECK(cq.layout.detuning_offset.front() == 0.0);
  }

  SUBCASE("overlapping supports are rejected") {
    EnsembleSpec wide = basic_spec(400, 0.6);
    CHECK_THROWS_AS(build_cqed_layout(wide, qubit, 0, 4, 1, Compensation::Off), OverlapError);
  }
}
