#ifndef WQED_CONFIG_HPP
#define WQED_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wqed/ensemble.hpp"
#include "wqed/steady_state.hpp"
#include "wqed/types.hpp"

namespace wqed {

// Minimal TOML-compatible document: [section] / [[section]] tables with
// string / number / boolean / number-array values and '#' comments.
struct TomlValue {
  std::variant<std::string, double, bool, std::vector<double>> v;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_number() const { return std::holds_alternative<double>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_list() const { return std::holds_alternative<std::vector<double>>(v); }
};

struct TomlTable {
  std::map<std::string, TomlValue> kv;
};

struct TomlDoc {
  // section name -> one table per [section], several per [[section]];
  // root-level keys live under "".
  std::map<std::string, std::vector<TomlTable>> sections;

  std::string emit() const;  // canonical text (sorted keys, %.17g numbers)
};

TomlDoc toml_parse(const std::string& text);  // throws ParseError with line:col

enum class ExperimentKind { Chi, Modes, Transmit, OracleCompare, CqedSpectrum, Rabi, Report };
enum class UnitsMode { Hz, Gamma1d };

struct CqedConfig {
  double n_q = 0.0, n_c = 0.0;
  int r = 0;
  Compensation compensate = Compensation::Difference;
  double gamma_1d = 0.0, gamma_prime = 0.0, delta_z = 0.0;  // rad/s, rad/s, lambda
};

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::Transmit;
  UnitsMode units = UnitsMode::Hz;
  std::uint64_t seed = 1;
  std::uint64_t seed_hi = 0;  // inclusive range end when > seed
  int threads = 0;            // 0: WQED_THREADS / hardware default

  SpectralLine line;               // effective line (holes burned in)
  SpectralLine base_line;          // as configured, before hole burning
  std::string table_csv;           // source path for tabulated base lines
  std::vector<HoleSpec> holes;
  std::vector<EnsembleSpec> ensembles;
  std::optional<CqedConfig> cqed;

  std::uint64_t m_bins = 1000;
  int n_f = 200;
  double rel_tol = 1e-8, abs_tol = 1e-12;
  int dense_limit = 10000;
  std::uint64_t exact_limit = 10000;
  SolveBackend solver = SolveBackend::Auto;
  ModeMethod modes_method = ModeMethod::Dense;
  int mode_count = 8;
  std::uint64_t oracle_m = 50;
  int hole_grid = 4001;

  GridSpec grid;                   // rad/s
  double t_max = 0.0;              // s
  int t_count = 0;

  std::string out_dir = ".";
  std::string prefix;
  bool gnuplot = false;

  std::string canonical_text;      // emitted config (defaults filled)
  std::string config_hash;
};

// Strict parse: unknown sections/keys are rejected; Hz -> rad/s conversion
// happens here exactly once. Throws ParseError / SchemaError.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Applies "--set section.key=value" style overrides before validation.
TomlDoc apply_overrides(TomlDoc doc, const std::vector<std::string>& overrides);
RunConfig config_from_doc(const TomlDoc& doc);

}  // namespace wqed

#endif
