#include "wqed/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>

#include "json.hpp"
#include "wqed/cqed.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/errors.hpp"
#include "wqed/io.hpp"
#include "wqed/parallel.hpp"

namespace wqed {

namespace {

using nlohmann::json;

std::uint64_t effective_m(std::uint64_t m_bins, std::uint64_t n) {
  return std::min<std::uint64_t>(m_bins, n);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string artifact_base(const RunConfig& cfg, std::uint64_t seed, bool multi_seed) {
  std::string name = cfg.prefix;
  if (multi_seed) name += "_seed" + std::to_string(seed);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

json sidecar_common(const RunConfig& cfg, std::uint64_t seed, const std::string& method,
                    double wall_s) {
  json j;
  j["config_hash"] = cfg.config_hash;
  j["seed"] = seed;
  j["method"] = method;
  j["wall_time_s"] = wall_s;
  j["config"] = cfg.canonical_text;
  return j;
}

void write_gnuplot(const RunConfig& cfg, const std::string& base, const std::string& csv,
                   const std::string& ycol, std::vector<std::string>* artifacts) {
  if (!cfg.gnuplot) return;
  std::string gp = "set datafile separator ','\nset key autotitle columnhead\n";
  gp += "set xlabel 'delta (Hz)'\nplot '" + csv + "' using 1:" + ycol + " with lines\npause -1\n";
  write_text_file(base + ".gp", gp);
  artifacts->push_back(base + ".gp");
}

void run_one_seed(const RunConfig& cfg, std::uint64_t seed, bool multi_seed,
                  std::vector<std::string>* artifacts, std::mutex* mtx) {
  Timer timer;
  const std::string base = artifact_base(cfg, seed, multi_seed);
  std::vector<std::string> files;
  json meta;

  const int threads = multi_seed ? 1 : (cfg.threads > 0 ? cfg.threads : default_threads());

  switch (cfg.experiment) {
    case ExperimentKind::Chi: {
      const std::vector<double> grid = cfg.grid.materialize();
      const double gp = cfg.ensembles.empty() ? 0.0 : cfg.ensembles.front().gamma_prime;
      std::string csv = "delta_hz,re_chi,im_chi\n";
      char buf[120];
      for (double d : grid) {
        const ResponseValue rv = chi_eval(cfg.line, d, gp);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", rad_to_hz(d), rv.chi.real(),
                      rv.chi.imag());
        csv += buf;
      }
      write_text_file(base + ".csv", csv);
      files.push_back(base + ".csv");
      meta = sidecar_common(cfg, seed, "chi", timer.seconds());
      write_gnuplot(cfg, base, base + ".csv", "3", &files);
      break;
    }
    case ExperimentKind::Modes: {
      ModeSet modes;
      if (cfg.modes_method == ModeMethod::Dense) {
        const EnsembleSpec& ens = cfg.ensembles.front();
        const BinnedLayout layout =
            build_bins(ens, effective_m(cfg.m_bins, ens.n_emitters), seed);
        modes = collective_modes(coupling_matrix(layout), cfg.dense_limit);
      } else {
        const EnsembleSpec& ens = cfg.ensembles.front();
        const double nu = two_pi * ens.delta_z;
        modes = cfg.modes_method == ModeMethod::Continuum
                    ? continuum_modes(static_cast<double>(ens.n_emitters), ens.gamma_1d, nu,
                                      cfg.mode_count)
                    : perturbative_modes(static_cast<double>(ens.n_emitters), ens.gamma_1d,
                                         nu, cfg.mode_count - 1);
      }
      write_text_file(base + ".csv", modeset_to_csv(modes));
      files.push_back(base + ".csv");
      meta = sidecar_common(cfg, seed, "modes", timer.seconds());
      break;
    }
    case ExperimentKind::Transmit: {
      const BinnedLayout layout = combine_layouts(cfg.ensembles, cfg.m_bins, seed);
      DriveSpec drive;
      SpectrumTrace trace = spectrum_scan(layout, drive, cfg.grid, threads);
      trace.seed = seed;
      trace.config_hash = cfg.config_hash;
      write_text_file(base + ".csv", trace_to_csv(trace));
      files.push_back(base + ".csv");
      meta = sidecar_common(cfg, seed, trace.method, timer.seconds());
      double min_t2 = 1.0;
      for (const Complex& t : trace.t) min_t2 = std::min(min_t2, std::norm(t));
      meta["min_abs_t2"] = min_t2;
      write_gnuplot(cfg, base, base + ".csv", "4", &files);
      break;
    }
    case ExperimentKind::OracleCompare: {
      const EnsembleSpec& ens = cfg.ensembles.front();
      const SpectrumTrace exact =
          exact_steady_transmission(ens, seed, cfg.grid, cfg.exact_limit);
      const BinnedLayout layout =
          build_bins(ens, effective_m(cfg.oracle_m, ens.n_emitters), seed);
      DriveSpec drive;
      const SpectrumTrace binned = spectrum_scan(layout, drive, cfg.grid, threads);
      const OracleComparison cmp = compare_traces(exact, binned);
      std::string csv = "delta_hz,abs_t_exact,abs_t_binned\n";
      char buf[120];
      for (std::size_t i = 0; i < exact.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", rad_to_hz(exact.grid[i]),
                      std::abs(exact.t[i]), std::abs(binned.t[i]));
        csv += buf;
      }
      write_text_file(base + ".csv", csv);
      files.push_back(base + ".csv");
      meta = sidecar_common(cfg, seed, "oracle-compare", timer.seconds());
      meta["rms_all"] = cmp.rms_all;
      meta["rms_excluding_narrow"] = cmp.rms_excluded;
      meta["excluded_points"] = cmp.excluded_points;
      break;
    }
    case ExperimentKind::CqedSpectrum: {
      const CqedLayout cq = cqed_layout_from_config(cfg, seed, cfg.m_bins);
      SpectrumTrace trace = side_illumination_spectrum(cq, cfg.grid, threads);
      trace.seed = seed;
      trace.config_hash = cfg.config_hash;
      write_text_file(base + ".csv", trace_to_csv(trace));
      files.push_back(base + ".csv");
      meta = sidecar_common(cfg, seed, trace.method, timer.seconds());
      const SplittingInfo split = measure_splitting(trace.grid, trace.s);
      meta["two_peaks_resolved"] = split.resolved;
      meta["splitting_hz"] = rad_to_hz(split.separation);
      meta["peak_to_valley"] = split.peak_to_valley;
      write_gnuplot(cfg, base, base + ".csv", "2", &files);
      break;
    }
    case ExperimentKind::Rabi: {
      if (!(cfg.t_max > 0.0) || cfg.t_count < 2) {
        throw SchemaError("rabi needs [time] t_max > 0 and count >= 2");
      }
      const CqedLayout cq = cqed_layout_from_config(cfg, seed, cfg.m_bins);
      std::vector<double> t_grid(cfg.t_count);
      for (int i = 0; i < cfg.t_count; ++i) {
        t_grid[i] = cfg.t_max * static_cast<double>(i) / (cfg.t_count - 1);
      }
      const TimeTrace trace = rabi_trace(cq, cfg.n_f, t_grid, cfg.rel_tol, cfg.abs_tol);
      write_text_file(base + ".csv", time_trace_to_csv(trace));
      files.push_back(base + ".csv");
      meta = sidecar_common(cfg, seed, "rabi", timer.seconds());
      meta["rel_tol"] = cfg.rel_tol;
      meta["abs_tol"] = cfg.abs_tol;
      meta["steps"] = trace.stats.steps;
      meta["rejected_steps"] = trace.stats.rejected;
      meta["rhs_evaluations"] = trace.stats.rhs_evaluations;
      meta["oscillation_hz"] = measure_oscillation_frequency(trace.times, trace.p);
      break;
    }
    case ExperimentKind::Report: {
      const CqedConfig& c = *cfg.cqed;
      const StrongCouplingReport rep = strong_coupling_report(
          c.n_q, c.n_c, c.gamma_1d, cfg.line.gamma_inh, c.delta_z);
      write_text_file(base + ".json", report_to_json(rep));
      files.push_back(base + ".json");
      std::lock_guard<std::mutex> lock(*mtx);
      artifacts->insert(artifacts->end(), files.begin(), files.end());
      return;  // the report is its own artifact; no sidecar
    }
  }

  write_text_file(base + ".meta.json", meta.dump(2) + "\n");
  files.push_back(base + ".meta.json");
  std::lock_guard<std::mutex> lock(*mtx);
  artifacts->insert(artifacts->end(), files.begin(), files.end());
}

}  // namespace

BinnedLayout combine_layouts(const std::vector<EnsembleSpec>& specs, std::uint64_t m_bins,
                             std::uint64_t seed, const WarningSink& warn) {
  if (specs.empty()) throw SchemaError("no ensembles configured");
  BinnedLayout all;
  all.ensembles.clear();
  for (std::size_t e = 0; e < specs.size(); ++e) {
    const std::uint64_t m = effective_m(m_bins, specs[e].n_emitters);
    const BinnedLayout part = build_bins(specs[e], m, seed, static_cast<int>(e), warn);
    all.ensembles.push_back(specs[e]);
    all.positions.insert(all.positions.end(), part.positions.begin(), part.positions.end());
    all.bin_weight.insert(all.bin_weight.end(), part.bin_weight.begin(), part.bin_weight.end());
    all.detuning_offset.insert(all.detuning_offset.end(), part.detuning_offset.begin(),
                               part.detuning_offset.end());
    for (std::size_t p = 0; p < part.size(); ++p) {
      all.ensemble_id.push_back(static_cast<int>(e));
    }
  }
  return all;
}

CqedLayout cqed_layout_from_config(const RunConfig& cfg, std::uint64_t seed,
                                   std::uint64_t m_per_ensemble) {
  if (!cfg.cqed) throw SchemaError("missing [cqed] section");
  const CqedConfig& c = *cfg.cqed;
  EnsembleSpec mirror;
  mirror.n_emitters = static_cast<std::uint64_t>(c.n_c);
  mirror.gamma_1d = c.gamma_1d;
  mirror.gamma_prime = c.gamma_prime;
  mirror.delta_z = c.delta_z;
  mirror.line = cfg.line;
  EnsembleSpec qubit = mirror;
  qubit.n_emitters = static_cast<std::uint64_t>(c.n_q);
  const std::uint64_t m = std::min({m_per_ensemble, mirror.n_emitters, qubit.n_emitters});
  return build_cqed_layout(mirror, qubit, c.r, m, seed, c.compensate);
}

RunOutput run(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::uint64_t seed_lo = cfg.seed;
  const std::uint64_t seed_hi = std::max(cfg.seed_hi, cfg.seed);
  const std::uint64_t n_seeds = seed_hi - seed_lo + 1;

  RunOutput out;
  std::mutex mtx;
  const int threads = cfg.threads > 0 ? cfg.threads : default_threads();
  parallel_for(n_seeds, n_seeds > 1 ? threads : 1, [&](std::size_t i) {
    run_one_seed(cfg, seed_lo + i, n_seeds > 1, &out.artifacts, &mtx);
  });
  std::sort(out.artifacts.begin(), out.artifacts.end());
  return out;
}

namespace {

std::vector<double> axis_values(const std::string& spec, std::string* key) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos) throw SchemaError("axis spec must be key=values");
  *key = spec.substr(0, eq);
  const std::string rhs = spec.substr(eq + 1);
  std::vector<double> vals;
  if (rhs.find(':') != std::string::npos) {
    // min:max:count[:log]
    double lo = 0, hi = 0;
    long count = 0;
    char mode[8] = "lin";
    const int got = std::sscanf(rhs.c_str(), "%lf:%lf:%ld:%7s", &lo, &hi, &count, mode);
    if (got < 3 || count < 1) throw SchemaError("bad axis range: " + rhs);
    const bool log = std::string(mode) == "log" && got == 4;
    if (log && !(lo > 0.0 && hi > 0.0)) throw SchemaError("log axis needs positive bounds");
    for (long i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      vals.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
    }
  } else {
    std::size_t pos = 0;
    while (pos < rhs.size()) {
      std::size_t comma = rhs.find(',', pos);
      const std::string tok =
          rhs.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!tok.empty()) vals.push_back(std::strtod(tok.c_str(), nullptr));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (vals.empty()) throw SchemaError("axis has no values");
  return vals;
}

}  // namespace

RunOutput sweep(const TomlDoc& base_doc, const std::string& axis,
                const std::vector<std::string>& overrides) {
  TomlDoc doc = apply_overrides(base_doc, overrides);
  RunOutput out;
  std::string summary = "axis_value,seed,min_abs_t2,splitting_hz,peak_to_valley,oscillation_hz\n";

  std::vector<double> values{0.0};
  std::string key;
  const bool degenerate = axis.empty();
  if (!degenerate) values = axis_values(axis, &key);

  for (std::size_t i = 0; i < values.size(); ++i) {
    TomlDoc point_doc = doc;
    if (!degenerate) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", values[i]);
      point_doc = apply_overrides(point_doc, {key + "=" + std::string(buf)});
    }
    RunConfig cfg = config_from_doc(point_doc);
    cfg.canonical_text = point_doc.emit();
    cfg.config_hash = fnv1a_hex(cfg.canonical_text);
    if (!degenerate) cfg.prefix += "_pt" + std::to_string(i);
    const RunOutput point = run(cfg);
    out.artifacts.insert(out.artifacts.end(), point.artifacts.begin(), point.artifacts.end());

    // harvest scalar observables from the sidecars
    for (const std::string& path : point.artifacts) {
      if (path.size() < 10 || path.substr(path.size() - 10) != ".meta.json") continue;
      const json meta = json::parse(read_text_file(path));
      auto get = [&meta](const char* k) {
        return meta.contains(k) ? meta[k].get<double>() : std::nan("");
      };
      char buf[200];
      std::snprintf(buf, sizeof buf, "%.17g,%llu,%.17g,%.17g,%.17g,%.17g\n", values[i],
                    static_cast<unsigned long long>(meta["seed"].get<std::uint64_t>()),
                    get("min_abs_t2"), get("splitting_hz"), get("peak_to_valley"),
                    get("oscillation_hz"));
      summary += buf;
    }
  }

  const RunConfig cfg0 = config_from_doc(doc);
  const std::string summary_path =
      (std::filesystem::path(cfg0.out_dir) / (cfg0.prefix + "_sweep_summary.csv")).string();
  std::filesystem::create_directories(cfg0.out_dir);
  write_text_file(summary_path, summary);
  out.artifacts.push_back(summary_path);
  return out;
}

}  // namespace wqed
