#include "wqed/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "wqed/errors.hpp"
#include "wqed/io.hpp"

namespace wqed {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, int col, const std::string& msg) {
  throw ParseError("config:" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

double parse_number(const std::string& tok, int line, int col) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') fail(line, col, "expected a number, got '" + tok + "'");
  return v;
}

TomlValue parse_value(const std::string& raw, int line, int col) {
  TomlValue out;
  const std::string tok = trim(raw);
  if (tok.empty()) fail(line, col, "empty value");
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"') fail(line, col, "unterminated string");
    out.v = tok.substr(1, tok.size() - 2);
    return out;
  }
  if (tok == "true" || tok == "false") {
    out.v = (tok == "true");
    return out;
  }
  if (tok.front() == '[') {
    if (tok.back() != ']') fail(line, col, "unterminated array");
    std::vector<double> list;
    std::string inner = tok.substr(1, tok.size() - 2);
    std::size_t pos = 0;
    while (pos < inner.size()) {
      std::size_t comma = inner.find(',', pos);
      const std::string item = trim(inner.substr(pos, comma == std::string::npos
                                                          ? std::string::npos
                                                          : comma - pos));
      if (!item.empty()) list.push_back(parse_number(item, line, col));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    out.v = std::move(list);
    return out;
  }
  out.v = parse_number(tok, line, col);
  return out;
}

std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TomlDoc toml_parse(const std::string& text) {
  TomlDoc doc;
  std::string current = "";
  doc.sections[""].emplace_back();
  TomlTable* table = &doc.sections[""].back();

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool array = line.size() > 1 && line[1] == '[';
      const std::string closer = array ? "]]" : "]";
      if (line.substr(line.size() - closer.size()) != closer) {
        fail(lineno, 1, "bad section header: " + line);
      }
      const std::string name =
          trim(line.substr(array ? 2 : 1, line.size() - 2 * (array ? 2 : 1)));
      if (name.empty()) fail(lineno, 1, "empty section name");
      if (array) {
        doc.sections[name].emplace_back();
      } else {
        if (doc.sections.count(name) && !doc.sections[name].empty() && name != "") {
          fail(lineno, 1, "duplicate section [" + name + "]");
        }
        doc.sections[name].emplace_back();
      }
      current = name;
      table = &doc.sections[name].back();
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, 1, "expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(lineno, 1, "empty key");
    for (char c : key) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
        fail(lineno, 1, "bad key name '" + key + "'");
      }
    }
    if (table->kv.count(key)) fail(lineno, 1, "duplicate key '" + key + "'");
    table->kv[key] = parse_value(line.substr(eq + 1), lineno, static_cast<int>(eq) + 2);
  }
  return doc;
}

std::string TomlDoc::emit() const {
  std::string out;
  auto emit_table = [&out](const TomlTable& t) {
    for (const auto& [k, val] : t.kv) {
      out += k + " = ";
      if (val.is_string()) {
        out += '"' + std::get<std::string>(val.v) + '"';
      } else if (val.is_bool()) {
        out += std::get<bool>(val.v) ? "true" : "false";
      } else if (val.is_list()) {
        out += '[';
        const auto& list = std::get<std::vector<double>>(val.v);
        for (std::size_t i = 0; i < list.size(); ++i) {
          out += (i ? ", " : "") + format_number(list[i]);
        }
        out += ']';
      } else {
        out += format_number(std::get<double>(val.v));
      }
      out += '\n';
    }
  };
  if (sections.count("")) {
    for (const TomlTable& t : sections.at("")) emit_table(t);
  }
  for (const auto& [name, tables] : sections) {
    if (name.empty()) continue;
    const bool array = tables.size() > 1 || name == "ensemble";
    for (const TomlTable& t : tables) {
      out += array ? "[[" + name + "]]\n" : "[" + name + "]\n";
      emit_table(t);
    }
  }
  return out;
}

TomlDoc apply_overrides(TomlDoc doc, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos) throw SchemaError("--set expects key=value, got " + ov);
    std::string path = trim(ov.substr(0, eq));
    const TomlValue val = parse_value(ov.substr(eq + 1), 0, 0);
    std::string section = "", key = path;
    std::size_t idx = 0;
    const std::size_t dot = path.find('.');
    if (dot != std::string::npos) {
      section = path.substr(0, dot);
      key = path.substr(dot + 1);
      // ensemble.2.key addresses the third [[ensemble]]
      const std::size_t dot2 = key.find('.');
      if (dot2 != std::string::npos) {
        idx = std::strtoull(key.substr(0, dot2).c_str(), nullptr, 10);
        key = key.substr(dot2 + 1);
      }
    }
    auto& tables = doc.sections[section];
    while (tables.size() <= idx) tables.emplace_back();
    tables[idx].kv[key] = val;
  }
  return doc;
}

namespace {

class SchemaReader {
 public:
  SchemaReader(const TomlTable& t, std::string where) : t_(t), where_(std::move(where)) {}

  double num(const std::string& key, std::optional<double> def = {}) {
    seen_.insert(key);
    auto it = t_.kv.find(key);
    if (it == t_.kv.end()) {
      if (def) return *def;
      throw SchemaError(where_ + ": missing required key '" + key + "'");
    }
    if (!it->second.is_number()) {
      throw SchemaError(where_ + "." + key + ": expected a number");
    }
    return std::get<double>(it->second.v);
  }

  std::uint64_t count(const std::string& key, std::optional<double> def = {}) {
    const double v = num(key, def);
    const double r = std::round(v);
    if (!(v >= 0.0) || std::abs(v - r) > 1e-6 * std::max(1.0, std::abs(v))) {
      throw SchemaError(where_ + "." + key + ": expected a nonnegative integer");
    }
    return static_cast<std::uint64_t>(r);
  }

  std::string str(const std::string& key, std::optional<std::string> def = {}) {
    seen_.insert(key);
    auto it = t_.kv.find(key);
    if (it == t_.kv.end()) {
      if (def) return *def;
      throw SchemaError(where_ + ": missing required key '" + key + "'");
    }
    if (!it->second.is_string()) throw SchemaError(where_ + "." + key + ": expected a string");
    return std::get<std::string>(it->second.v);
  }

  bool flag(const std::string& key, bool def) {
    seen_.insert(key);
    auto it = t_.kv.find(key);
    if (it == t_.kv.end()) return def;
    if (!it->second.is_bool()) throw SchemaError(where_ + "." + key + ": expected a boolean");
    return std::get<bool>(it->second.v);
  }

  std::vector<double> list(const std::string& key) {
    seen_.insert(key);
    auto it = t_.kv.find(key);
    if (it == t_.kv.end()) return {};
    if (!it->second.is_list()) throw SchemaError(where_ + "." + key + ": expected an array");
    return std::get<std::vector<double>>(it->second.v);
  }

  bool has(const std::string& key) const { return t_.kv.count(key) > 0; }

  void reject_unknown() const {
    for (const auto& [k, v] : t_.kv) {
      if (!seen_.count(k)) {
        throw SchemaError(where_ + ": unknown key '" + k + "'");
      }
    }
  }

 private:
  const TomlTable& t_;
  std::string where_;
  std::set<std::string> seen_;
};

const TomlTable kEmptyTable{};

const TomlTable& single_section(const TomlDoc& doc, const std::string& name) {
  auto it = doc.sections.find(name);
  if (it == doc.sections.end() || it->second.empty()) return kEmptyTable;
  if (it->second.size() > 1) throw SchemaError("section [" + name + "] given more than once");
  return it->second.front();
}

ExperimentKind experiment_from_string(const std::string& s) {
  if (s == "chi") return ExperimentKind::Chi;
  if (s == "modes") return ExperimentKind::Modes;
  if (s == "transmit") return ExperimentKind::Transmit;
  if (s == "oracle-compare") return ExperimentKind::OracleCompare;
  if (s == "cqed-spectrum") return ExperimentKind::CqedSpectrum;
  if (s == "rabi") return ExperimentKind::Rabi;
  if (s == "report") return ExperimentKind::Report;
  throw SchemaError("unknown experiment kind '" + s + "'");
}

std::string experiment_to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Chi: return "chi";
    case ExperimentKind::Modes: return "modes";
    case ExperimentKind::Transmit: return "transmit";
    case ExperimentKind::OracleCompare: return "oracle-compare";
    case ExperimentKind::CqedSpectrum: return "cqed-spectrum";
    case ExperimentKind::Rabi: return "rabi";
    case ExperimentKind::Report: return "report";
  }
  return "?";
}

std::uint64_t nearest_valid_m(std::uint64_t n, std::uint64_t m) {
  if (m > n) return n;
  for (std::uint64_t d = 0;; ++d) {
    if (m > d && n % (m - d) == 0) return m - d;
    if (m + d <= n && n % (m + d) == 0) return m + d;
  }
}

}  // namespace

RunConfig config_from_doc(const TomlDoc& doc) {
  RunConfig cfg;

  SchemaReader root(single_section(doc, ""), "config");
  const std::string units = root.str("units", std::string("hz"));
  if (units == "hz") {
    cfg.units = UnitsMode::Hz;
  } else if (units == "gamma1d") {
    cfg.units = UnitsMode::Gamma1d;
  } else {
    throw SchemaError("units must be \"hz\" or \"gamma1d\"");
  }
  // frequency-like config values -> rad/s
  const double rate = (cfg.units == UnitsMode::Hz) ? two_pi : 1.0;

  cfg.experiment = experiment_from_string(root.str("experiment"));
  cfg.seed = root.count("seed", 1.0);
  cfg.seed_hi = root.count("seed_end", 0.0);
  cfg.threads = static_cast<int>(root.count("threads", 0.0));
  root.reject_unknown();

  // [line]
  {
    SchemaReader line(single_section(doc, "line"), "line");
    const std::string kind = line.str("kind", std::string("gaussian"));
    if (kind == "tabulated") {
      cfg.table_csv = line.str("table_csv");
      cfg.base_line = tabulated_from_csv(read_text_file(cfg.table_csv));
      line.num("gamma_inh", 0.0);
    } else {
      const double gamma_inh = line.num("gamma_inh", 1.0) * rate;
      if (kind == "gaussian") {
        cfg.base_line = SpectralLine::gaussian(gamma_inh);
      } else if (kind == "uniform") {
        cfg.base_line = SpectralLine::uniform(gamma_inh);
      } else if (kind == "lorentzian") {
        cfg.base_line = SpectralLine::lorentzian(gamma_inh);
      } else {
        throw SchemaError("line.kind must be gaussian|uniform|lorentzian|tabulated");
      }
      line.str("table_csv", std::string(""));
    }
    cfg.line = cfg.base_line;
    const auto centers = line.list("hole_centers");
    const auto widths = line.list("hole_widths");
    const auto depths = line.list("hole_depths");
    if (centers.size() != widths.size() || centers.size() != depths.size()) {
      throw SchemaError("line.hole_* arrays must have equal length");
    }
    cfg.hole_grid = static_cast<int>(line.count("hole_grid", 4001.0));
    for (std::size_t i = 0; i < centers.size(); ++i) {
      cfg.holes.push_back(HoleSpec{centers[i] * rate, widths[i] * rate, depths[i]});
    }
    if (!cfg.holes.empty()) {
      cfg.line = apply_hole_burn(cfg.line, cfg.holes, cfg.hole_grid);
    }
    line.reject_unknown();
  }

  // [numerics]
  {
    SchemaReader num(single_section(doc, "numerics"), "numerics");
    cfg.m_bins = num.count("m", 1000.0);
    cfg.n_f = static_cast<int>(num.count("n_f", 200.0));
    cfg.rel_tol = num.num("rel_tol", 1e-8);
    cfg.abs_tol = num.num("abs_tol", 1e-12);
    cfg.dense_limit = static_cast<int>(num.count("dense_limit", 10000.0));
    cfg.exact_limit = num.count("exact_limit", 10000.0);
    cfg.oracle_m = num.count("oracle_m", 50.0);
    cfg.mode_count = static_cast<int>(num.count("mode_count", 8.0));
    const std::string solver = num.str("solver", std::string("auto"));
    if (solver == "auto") {
      cfg.solver = SolveBackend::Auto;
    } else if (solver == "dense") {
      cfg.solver = SolveBackend::Dense;
    } else if (solver == "structured") {
      cfg.solver = SolveBackend::Structured;
    } else {
      throw SchemaError("numerics.solver must be auto|dense|structured");
    }
    const std::string mm = num.str("modes_method", std::string("dense"));
    if (mm == "dense") {
      cfg.modes_method = ModeMethod::Dense;
    } else if (mm == "continuum") {
      cfg.modes_method = ModeMethod::Continuum;
    } else if (mm == "perturbative") {
      cfg.modes_method = ModeMethod::Perturbative;
    } else {
      throw SchemaError("numerics.modes_method must be dense|continuum|perturbative");
    }
    num.reject_unknown();
  }

  // [[ensemble]]
  if (doc.sections.count("ensemble")) {
    int idx = 0;
    for (const TomlTable& t : doc.sections.at("ensemble")) {
      SchemaReader ens(t, "ensemble." + std::to_string(idx));
      EnsembleSpec spec;
      spec.n_emitters = ens.count("n");
      spec.gamma_1d = ens.num("gamma_1d") * rate;
      spec.gamma_prime = ens.num("gamma_prime", 0.0) * rate;
      spec.delta_z = ens.num("delta_z", 0.0);
      spec.center = ens.num("center", 0.0);
      spec.detuning_offset = ens.num("detuning_offset", 0.0) * rate;
      spec.line = cfg.line;
      const std::string placement = ens.str("placement", std::string("random"));
      if (placement == "random") {
        spec.placement = Placement::RandomUniform;
      } else if (placement == "equally_spaced") {
        spec.placement = Placement::EquallySpaced;
      } else if (placement == "explicit") {
        spec.placement = Placement::Explicit;
        const std::string path = ens.str("positions_csv");
        const std::string text = read_text_file(path);
        std::size_t p = 0;
        while (p < text.size()) {
          std::size_t nl = text.find('\n', p);
          const std::string row =
              trim(text.substr(p, nl == std::string::npos ? std::string::npos : nl - p));
          p = (nl == std::string::npos) ? text.size() : nl + 1;
          if (row.empty()) continue;
          spec.explicit_positions.push_back(std::strtod(row.c_str(), nullptr));
        }
      } else {
        throw SchemaError("ensemble.placement must be random|equally_spaced|explicit");
      }
      ens.str("positions_csv", std::string(""));
      ens.reject_unknown();
      cfg.ensembles.push_back(std::move(spec));
      ++idx;
    }
  }

  // [cqed]
  if (doc.sections.count("cqed")) {
    SchemaReader cq(single_section(doc, "cqed"), "cqed");
    CqedConfig c;
    c.n_q = static_cast<double>(cq.count("n_q"));
    c.n_c = static_cast<double>(cq.count("n_c"));
    c.r = static_cast<int>(cq.count("r", 0.0));
    c.gamma_1d = cq.num("gamma_1d") * rate;
    c.gamma_prime = cq.num("gamma_prime", 0.0) * rate;
    c.delta_z = cq.num("delta_z", 0.0);
    const std::string comp = cq.str("compensate", std::string("difference"));
    if (comp == "difference") {
      c.compensate = Compensation::Difference;
    } else if (comp == "qubit_only") {
      c.compensate = Compensation::QubitOnly;
    } else if (comp == "off") {
      c.compensate = Compensation::Off;
    } else {
      throw SchemaError("cqed.compensate must be difference|qubit_only|off");
    }
    cq.reject_unknown();
    cfg.cqed = c;
  }

  // [grid]
  {
    SchemaReader grid(single_section(doc, "grid"), "grid");
    if (grid.has("points")) {
      for (double v : grid.list("points")) cfg.grid.points.push_back(v * rate);
    } else {
      cfg.grid.min = grid.num("min", 0.0) * rate;
      cfg.grid.max = grid.num("max", 0.0) * rate;
      cfg.grid.count = static_cast<int>(grid.count("count", 0.0));
    }
    grid.reject_unknown();
  }

  // [time]
  {
    SchemaReader tm(single_section(doc, "time"), "time");
    cfg.t_max = tm.num("t_max", 0.0);
    cfg.t_count = static_cast<int>(tm.count("count", 0.0));
    tm.reject_unknown();
    if (cfg.units == UnitsMode::Gamma1d && cfg.t_max > 0.0) {
      // t_max is in units of 1/Gamma_1D; Gamma_1D = 1 in this mode
    }
  }

  // [output]
  {
    SchemaReader outp(single_section(doc, "output"), "output");
    cfg.out_dir = outp.str("dir", std::string("."));
    cfg.prefix = outp.str("prefix", experiment_to_string(cfg.experiment));
    cfg.gnuplot = outp.flag("gnuplot", false);
    outp.reject_unknown();
  }

  // cross-field validation
  auto need_ensemble = [&](const char* why) {
    if (cfg.ensembles.empty()) {
      throw SchemaError(std::string("experiment needs an [[ensemble]] section: ") + why);
    }
  };
  switch (cfg.experiment) {
    case ExperimentKind::Chi:
      break;
    case ExperimentKind::Modes:
      if (cfg.modes_method == ModeMethod::Dense) need_ensemble("dense modes");
      if (cfg.modes_method != ModeMethod::Dense) need_ensemble("mode scaling N, Gamma_1D");
      break;
    case ExperimentKind::Transmit:
      need_ensemble("transmission scan");
      break;
    case ExperimentKind::OracleCompare:
      need_ensemble("oracle comparison");
      break;
    case ExperimentKind::CqedSpectrum:
    case ExperimentKind::Rabi:
    case ExperimentKind::Report:
      if (!cfg.cqed) throw SchemaError("experiment needs a [cqed] section");
      break;
  }
  for (const EnsembleSpec& e : cfg.ensembles) {
    const std::uint64_t m = std::min<std::uint64_t>(cfg.m_bins, e.n_emitters);
    if (e.n_emitters % m != 0) {
      throw SchemaError("numerics.m = " + std::to_string(cfg.m_bins) +
                        " does not divide ensemble n = " + std::to_string(e.n_emitters) +
                        "; nearest valid m is " +
                        std::to_string(nearest_valid_m(e.n_emitters, m)));
    }
  }

  return cfg;
}

namespace {

TomlDoc doc_from_config(const RunConfig& cfg) {
  const double rate = (cfg.units == UnitsMode::Hz) ? two_pi : 1.0;
  TomlDoc doc;
  TomlTable root;
  root.kv["units"] = TomlValue{cfg.units == UnitsMode::Hz ? std::string("hz")
                                                          : std::string("gamma1d")};
  root.kv["experiment"] = TomlValue{std::string(experiment_to_string(cfg.experiment))};
  root.kv["seed"] = TomlValue{static_cast<double>(cfg.seed)};
  root.kv["seed_end"] = TomlValue{static_cast<double>(cfg.seed_hi)};
  root.kv["threads"] = TomlValue{static_cast<double>(cfg.threads)};
  doc.sections[""].push_back(std::move(root));

  TomlTable line;
  switch (cfg.base_line.kind) {
    case LineKind::Gaussian: line.kv["kind"] = TomlValue{std::string("gaussian")}; break;
    case LineKind::Uniform: line.kv["kind"] = TomlValue{std::string("uniform")}; break;
    case LineKind::Lorentzian: line.kv["kind"] = TomlValue{std::string("lorentzian")}; break;
    case LineKind::Tabulated: line.kv["kind"] = TomlValue{std::string("tabulated")}; break;
  }
  if (cfg.base_line.kind == LineKind::Tabulated) {
    line.kv["table_csv"] = TomlValue{cfg.table_csv};
  } else {
    line.kv["gamma_inh"] = TomlValue{cfg.base_line.gamma_inh / rate};
  }
  if (!cfg.holes.empty()) {
    std::vector<double> c, w, d;
    for (const HoleSpec& h : cfg.holes) {
      c.push_back(h.center / rate);
      w.push_back(h.width / rate);
      d.push_back(h.depth);
    }
    line.kv["hole_centers"] = TomlValue{c};
    line.kv["hole_widths"] = TomlValue{w};
    line.kv["hole_depths"] = TomlValue{d};
    line.kv["hole_grid"] = TomlValue{static_cast<double>(cfg.hole_grid)};
  }
  doc.sections["line"].push_back(std::move(line));

  for (const EnsembleSpec& e : cfg.ensembles) {
    TomlTable t;
    t.kv["n"] = TomlValue{static_cast<double>(e.n_emitters)};
    t.kv["gamma_1d"] = TomlValue{e.gamma_1d / rate};
    t.kv["gamma_prime"] = TomlValue{e.gamma_prime / rate};
    t.kv["delta_z"] = TomlValue{e.delta_z};
    t.kv["center"] = TomlValue{e.center};
    t.kv["detuning_offset"] = TomlValue{e.detuning_offset / rate};
    t.kv["placement"] =
        TomlValue{e.placement == Placement::RandomUniform
                      ? std::string("random")
                      : (e.placement == Placement::EquallySpaced ? std::string("equally_spaced")
                                                                 : std::string("explicit"))};
    doc.sections["ensemble"].push_back(std::move(t));
  }

  if (cfg.cqed) {
    TomlTable t;
    t.kv["n_q"] = TomlValue{cfg.cqed->n_q};
    t.kv["n_c"] = TomlValue{cfg.cqed->n_c};
    t.kv["r"] = TomlValue{static_cast<double>(cfg.cqed->r)};
    t.kv["gamma_1d"] = TomlValue{cfg.cqed->gamma_1d / rate};
    t.kv["gamma_prime"] = TomlValue{cfg.cqed->gamma_prime / rate};
    t.kv["delta_z"] = TomlValue{cfg.cqed->delta_z};
    t.kv["compensate"] = TomlValue{cfg.cqed->compensate == Compensation::Difference
                                       ? std::string("difference")
                                       : (cfg.cqed->compensate == Compensation::QubitOnly
                                              ? std::string("qubit_only")
                                              : std::string("off"))};
    doc.sections["cqed"].push_back(std::move(t));
  }

  TomlTable num;
  num.kv["m"] = TomlValue{static_cast<double>(cfg.m_bins)};
  num.kv["n_f"] = TomlValue{static_cast<double>(cfg.n_f)};
  num.kv["rel_tol"] = TomlValue{cfg.rel_tol};
  num.kv["abs_tol"] = TomlValue{cfg.abs_tol};
  num.kv["dense_limit"] = TomlValue{static_cast<double>(cfg.dense_limit)};
  num.kv["exact_limit"] = TomlValue{static_cast<double>(cfg.exact_limit)};
  num.kv["oracle_m"] = TomlValue{static_cast<double>(cfg.oracle_m)};
  num.kv["mode_count"] = TomlValue{static_cast<double>(cfg.mode_count)};
  num.kv["solver"] = TomlValue{cfg.solver == SolveBackend::Auto
                                   ? std::string("auto")
                                   : (cfg.solver == SolveBackend::Dense ? std::string("dense")
                                                                        : std::string("structured"))};
  num.kv["modes_method"] =
      TomlValue{cfg.modes_method == ModeMethod::Dense
                    ? std::string("dense")
                    : (cfg.modes_method == ModeMethod::Continuum ? std::string("continuum")
                                                                 : std::string("perturbative"))};
  doc.sections["numerics"].push_back(std::move(num));

  TomlTable grid;
  if (!cfg.grid.points.empty()) {
    std::vector<double> pts;
    for (double v : cfg.grid.points) pts.push_back(v / rate);
    grid.kv["points"] = TomlValue{pts};
  } else {
    grid.kv["min"] = TomlValue{cfg.grid.min / rate};
    grid.kv["max"] = TomlValue{cfg.grid.max / rate};
    grid.kv["count"] = TomlValue{static_cast<double>(cfg.grid.count)};
  }
  doc.sections["grid"].push_back(std::move(grid));

  TomlTable tm;
  tm.kv["t_max"] = TomlValue{cfg.t_max};
  tm.kv["count"] = TomlValue{static_cast<double>(cfg.t_count)};
  doc.sections["time"].push_back(std::move(tm));

  TomlTable outp;
  outp.kv["dir"] = TomlValue{cfg.out_dir};
  outp.kv["prefix"] = TomlValue{cfg.prefix};
  outp.kv["gnuplot"] = TomlValue{cfg.gnuplot};
  doc.sections["output"].push_back(std::move(outp));
  return doc;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  const TomlDoc doc = toml_parse(text);
  RunConfig cfg = config_from_doc(doc);
  cfg.canonical_text = doc_from_config(cfg).emit();
  cfg.config_hash = fnv1a_hex(cfg.canonical_text);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  return parse_config_text(read_text_file(path));
}

}  // namespace wqed
