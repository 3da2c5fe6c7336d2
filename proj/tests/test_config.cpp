#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "wqed/config.hpp"
#include "wqed/errors.hpp"
#include "wqed/io.hpp"

using namespace wqed;

namespace {

const char* kMinimal = R"(
experiment = "transmit"
[line]
kind = "gaussian"
gamma_inh = 50e9
[[ensemble]]
n = 1e9
gamma_1d = 100
gamma_prime = 100
delta_z = 0.1
[grid]
min = -150e9
max = 150e9
count = 101
)";

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const RunConfig cfg = parse_config_text(kMinimal);
  CHECK(cfg.experiment == ExperimentKind::Transmit);
  CHECK(cfg.m_bins == 1000);
  CHECK(cfg.n_f == 200);
  CHECK(cfg.seed == 1);
  CHECK(cfg.line.gamma_inh == doctest::Approx(two_pi * 50e9));
  REQUIRE(cfg.ensembles.size() == 1);
  CHECK(cfg.ensembles[0].n_emitters == 1000000000ULL);
  CHECK(cfg.ensembles[0].gamma_1d == doctest::Approx(two_pi * 100.0));
  CHECK(!cfg.config_hash.empty());
}

TEST_CASE("unknown keys are rejected with their path") {
  const std::string bad = std::string(kMinimal) + "\n[numerics]\nbogus_key = 3\n";
  CHECK_THROWS_AS(parse_config_text(bad), SchemaError);
  try {
    parse_config_text(bad);
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_config_text("experiment = \"chi\"\nthis line is wrong\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("config:2") != std::string::npos);
  }
}

TEST_CASE("m must divide N, with a suggestion") {
  const std::string bad =
      std::string(kMinimal) + "\n[numerics]\nm = 300000007\n";  // prime > divisors
  try {
    parse_config_text(bad);
    CHECK(false);
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("nearest valid m") != std::string::npos);
  }
}

TEST_CASE("round trip: parse -> emit -> parse is idempotent") {
  const RunConfig a = parse_config_text(kMinimal);
  const RunConfig b = parse_config_text(a.canonical_text);
  CHECK(a.canonical_text == b.canonical_text);
  CHECK(a.config_hash == b.config_hash);
  CHECK(a.line.gamma_inh == b.line.gamma_inh);
  CHECK(a.ensembles[0].n_emitters == b.ensembles[0].n_emitters);
}

TEST_CASE("dimensionless units mode") {
  const char* text = R"(
units = "gamma1d"
experiment = "chi"
[line]
kind = "lorentzian"
gamma_inh = 10
[grid]
min = -5
max = 5
count = 11
)";
  const RunConfig cfg = parse_config_text(text);
  CHECK(cfg.line.gamma_inh == 10.0);  // no 2 pi conversion
  CHECK(cfg.grid.max == 5.0);
}

TEST_CASE("overrides go through --set style paths") {
  TomlDoc doc = toml_parse(kMinimal);
  doc = apply_overrides(doc, {"numerics.m=500", "seed=9", "ensemble.0.delta_z=0.2"});
  const RunConfig cfg = config_from_doc(doc);
  CHECK(cfg.m_bins == 500);
  CHECK(cfg.seed == 9);
  CHECK(cfg.ensembles[0].delta_z == 0.2);
}

TEST_CASE("hole burning via config produces a tabulated effective line") {
  const char* text = R"(
experiment = "chi"
[line]
kind = "gaussian"
gamma_inh = 1
hole_centers = [0]
hole_widths = [0.4]
hole_depths = [0.9]
hole_grid = 2001
[grid]
min = -2
max = 2
count = 5
)";
  const RunConfig cfg = parse_config_text(text);
  CHECK(cfg.base_line.kind == LineKind::Gaussian);
  CHECK(cfg.line.kind == LineKind::Tabulated);
  CHECK(density_eval(cfg.line, 0.0) < density_eval(cfg.base_line, 0.0));
}

TEST_CASE("cqed section") {
  const char* text = R"(
experiment = "report"
[line]
kind = "gaussian"
gamma_inh = 10e9
[cqed]
n_q = 2e8
n_c = 4e8
gamma_1d = 100
gamma_prime = 100
delta_z = 0.1
)";
  const RunConfig cfg = parse_config_text(text);
  REQUIRE(cfg.cqed.has_value());
  CHECK(cfg.cqed->n_q == 2e8);
  CHECK(cfg.cqed->compensate == Compensation::Difference);
}

TEST_CASE("experiment cross-field requirements") {
  CHECK_THROWS_AS(parse_config_text("experiment = \"rabi\"\n[line]\nkind = \"gaussian\"\n"),
                  SchemaError);
  CHECK_THROWS_AS(parse_config_text("experiment = \"transmit\"\n"), SchemaError);
}
