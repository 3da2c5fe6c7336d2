#include "wqed/steady_state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "wqed/errors.hpp"
#include "wqed/parallel.hpp"
#include "wqed/rng.hpp"
#include "wqed/scatter_solver.hpp"

namespace wqed {

std::vector<double> GridSpec::materialize() const {
  if (!points.empty()) {
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      if (!(points[i] < points[i + 1])) {
        throw InvalidGrid("explicit grid must be strictly increasing");
      }
    }
    return points;
  }
  if (count < 1) throw InvalidGrid("grid count must be >= 1");
  if (count == 1) {
    if (min != max) throw InvalidGrid("count=1 grid needs min == max");
    return {min};
  }
  if (!(min < max)) throw InvalidGrid("grid min must be < max");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) {
    g[i] = min + (max - min) * static_cast<double>(i) / (count - 1);
  }
  return g;
}

namespace {

// Per-ensemble response W = chi / gamma_inh at this drive detuning.
std::vector<Complex> ensemble_responses(const BinnedLayout& layout, double delta_c,
                                        const SpectralLine* line_override,
                                        double gamma_prime_override) {
  std::vector<Complex> w(layout.ensembles.size());
  for (std::size_t e = 0; e < layout.ensembles.size(); ++e) {
    const EnsembleSpec& ens = layout.ensembles[e];
    const SpectralLine& line = line_override ? *line_override : ens.line;
    const double gp = line_override ? gamma_prime_override : ens.gamma_prime;
    const ResponseValue rv = chi_eval(line, delta_c - ens.detuning_offset, gp);
    w[e] = rv.chi / line.gamma_inh;
  }
  return w;
}

std::vector<Scatterer> make_scatterers(const BinnedLayout& layout,
                                       const std::vector<Complex>& w_per_ensemble,
                                       const DriveSpec& drive) {
  if (drive.amplitude == 0.0) throw SchemaError("drive amplitude must be nonzero");
  const std::size_t m = layout.size();
  std::vector<Scatterer> sc(m);
  for (std::size_t p = 0; p < m; ++p) {
    const int e = layout.ensemble_id[p];
    const EnsembleSpec& ens = layout.ensembles[e];
    const double n_p = layout.bin_weight[p];
    const Complex w = w_per_ensemble[e];
    Complex omega_p(0.0, 0.0);
    if (drive.kind == DriveKind::WaveguideForward) {
      omega_p = drive.amplitude * std::exp(iunit * layout.beta * layout.positions[p]);
    } else {
      const bool hit = drive.targets.empty()
                           ? false
                           : std::find(drive.targets.begin(), drive.targets.end(), e) !=
                                 drive.targets.end();
      omega_p = hit ? Complex(drive.amplitude, 0.0) : Complex(0.0, 0.0);
    }
    sc[p].z = layout.positions[p];
    sc[p].phi = 0.5 * n_p * ens.gamma_1d * w;
    sc[p].drive = n_p * std::sqrt(0.5 * ens.gamma_1d) * w * omega_p;
  }
  return sc;
}

std::vector<Complex> coherences_from_field(const BinnedLayout& layout,
                                           const std::vector<Scatterer>& sc,
                                           const std::vector<Complex>& field) {
  // B_p = (-i phi_p F_p - drive_p) / c_p with c_p = sqrt(n_p Gamma_p / 2)
  std::vector<Complex> b(sc.size());
  for (std::size_t p = 0; p < sc.size(); ++p) {
    const EnsembleSpec& ens = layout.ensembles[layout.ensemble_id[p]];
    const double c_p = std::sqrt(0.5 * layout.bin_weight[p] * ens.gamma_1d);
    b[p] = (-iunit * sc[p].phi * field[p] - sc[p].drive) / c_p;
  }
  return b;
}

std::vector<Complex> solve_steady_impl(const BinnedLayout& layout, double delta_c,
                                       const DriveSpec& drive, SolveBackend backend,
                                       const SpectralLine* line_override,
                                       double gamma_prime_override) {
  const std::vector<Complex> w =
      ensemble_responses(layout, delta_c, line_override, gamma_prime_override);
  const std::vector<Scatterer> sc = make_scatterers(layout, w, drive);
  const bool dense = backend == SolveBackend::Dense;
  const std::vector<Complex> field = solve_scatter_field(sc, layout.beta, dense);
  return coherences_from_field(layout, sc, field);
}

Complex emitted_right_port(const std::vector<Complex>& b, const BinnedLayout& layout,
                           double amplitude) {
  // t - 1 = (i/(2 Omega)) sum_p sqrt(n_p) Gamma_p e^{-i beta z_p} B_p
  Complex acc(0.0, 0.0);
  for (std::size_t p = 0; p < b.size(); ++p) {
    const EnsembleSpec& ens = layout.ensembles[layout.ensemble_id[p]];
    acc += std::sqrt(layout.bin_weight[p]) * ens.gamma_1d *
           std::exp(-iunit * layout.beta * layout.positions[p]) * b[p];
  }
  return iunit / (2.0 * amplitude) * acc;
}

}  // namespace

std::vector<Complex> solve_collective_steady(const BinnedLayout& layout, double delta_c,
                                             const DriveSpec& drive, SolveBackend backend) {
  return solve_steady_impl(layout, delta_c, drive, backend, nullptr, 0.0);
}

std::vector<Complex> solve_collective_steady(const BinnedLayout& layout,
                                             const SpectralLine& line, double gamma_prime,
                                             double delta_c, const DriveSpec& drive,
                                             SolveBackend backend) {
  return solve_steady_impl(layout, delta_c, drive, backend, &line, gamma_prime);
}

Complex transmission_input_output(const std::vector<Complex>& b,
                                  const BinnedLayout& layout, const DriveSpec& drive) {
  if (drive.kind != DriveKind::WaveguideForward) {
    throw SchemaError("input-output transmission requires a waveguide drive");
  }
  return 1.0 + emitted_right_port(b, layout, drive.amplitude);
}

SpectrumTrace transmission_product(const ModeSet& modes, const SpectralLine& line,
                                   double gamma_prime, const GridSpec& grid) {
  SpectrumTrace out;
  out.grid = grid.materialize();
  out.method = "product";
  out.t.resize(out.grid.size());
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    const ResponseValue rv = chi_eval(line, out.grid[i], gamma_prime);
    const Complex inv_resp = line.gamma_inh / rv.chi;
    Complex t(1.0, 0.0);
    for (const Complex& lam : modes.lambda) {
      t *= inv_resp / (inv_resp + lam);
    }
    out.t[i] = t;
  }
  return out;
}

SpectrumTrace transmission_product_for_layout(const BinnedLayout& layout,
                                              const GridSpec& grid, int dense_limit) {
  for (std::size_t p = 0; p + 1 < layout.size(); ++p) {
    if (layout.detuning_offset[p] != layout.detuning_offset[p + 1]) {
      throw IncompatibleOffsets(
          "product formula requires a shared response; bins carry distinct "
          "detuning offsets (use the input-output route)");
    }
  }
  for (std::size_t e = 0; e + 1 < layout.ensembles.size(); ++e) {
    if (layout.ensembles[e].line.kind != layout.ensembles[e + 1].line.kind ||
        layout.ensembles[e].line.gamma_inh != layout.ensembles[e + 1].line.gamma_inh ||
        layout.ensembles[e].gamma_prime != layout.ensembles[e + 1].gamma_prime) {
      throw IncompatibleOffsets("product formula requires identical ensemble responses");
    }
  }
  const ModeSet modes = collective_modes(coupling_matrix(layout), dense_limit);
  const EnsembleSpec& ens = layout.ensembles.front();
  SpectrumTrace out = transmission_product(modes, ens.line, ens.gamma_prime, grid);
  if (ens.detuning_offset != 0.0) {
    // shift the response by the common offset
    out = SpectrumTrace{};
    out.grid = grid.materialize();
    out.method = "product";
    out.t.resize(out.grid.size());
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
      const ResponseValue rv =
          chi_eval(ens.line, out.grid[i] - ens.detuning_offset, ens.gamma_prime);
      const Complex inv_resp = ens.line.gamma_inh / rv.chi;
      Complex t(1.0, 0.0);
      for (const Complex& lam : modes.lambda) t *= inv_resp / (inv_resp + lam);
      out.t[i] = t;
    }
  }
  return out;
}

SpectrumTrace exact_steady_transmission(const EnsembleSpec& spec, std::uint64_t seed,
                                        const GridSpec& grid, std::uint64_t size_limit) {
  if (spec.n_emitters > size_limit) {
    throw SizeLimit("exact solve limited to N <= " + std::to_string(size_limit));
  }
  const std::uint64_t n = spec.n_emitters;
  std::vector<double> z(n), det(n);
  const double lo = spec.center - 0.5 * spec.delta_z;
  for (std::uint64_t j = 0; j < n; ++j) {
    z[j] = lo + spec.delta_z * rng::uniform01(seed, rng::kExactPositions, j);
    det[j] = quantile_eval(spec.line, rng::uniform01(seed, rng::kExactDetunings, j));
  }

  SpectrumTrace out;
  out.grid = grid.materialize();
  out.method = "exact";
  out.seed = seed;
  out.t.resize(out.grid.size());
  const double c = std::sqrt(0.5 * spec.gamma_1d);
  std::vector<Scatterer> sc(n);
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    const double delta_c = out.grid[i];
    for (std::uint64_t j = 0; j < n; ++j) {
      const Complex w = 1.0 / Complex(delta_c - det[j], 0.5 * spec.gamma_prime);
      sc[j].z = z[j];
      sc[j].phi = 0.5 * spec.gamma_1d * w;
      sc[j].drive = c * w * std::exp(iunit * two_pi * z[j]);
    }
    const std::vector<Complex> field = solve_scatter_field(sc, two_pi);
    // t = 1 + i/(2 Omega) sum_j Gamma_1D e^{-i beta z_j} sigma_j, Omega = 1
    Complex acc(0.0, 0.0);
    for (std::uint64_t j = 0; j < n; ++j) {
      const Complex b = (-iunit * sc[j].phi * field[j] - sc[j].drive) / c;
      acc += spec.gamma_1d * std::exp(-iunit * two_pi * z[j]) * b;
    }
    out.t[i] = 1.0 + iunit / 2.0 * acc;
  }
  return out;
}

SpectrumTrace spectrum_scan(const BinnedLayout& layout, const DriveSpec& drive,
                            const GridSpec& grid, int threads) {
  SpectrumTrace out;
  out.grid = grid.materialize();
  out.method = "input-output";
  out.t.resize(out.grid.size());
  parallel_for(out.grid.size(), threads, [&](std::size_t i) {
    try {
      const std::vector<Complex> b = solve_collective_steady(layout, out.grid[i], drive);
      out.t[i] = transmission_input_output(b, layout, drive);
    } catch (const Error& e) {
      throw Error(e.kind(), e.name(),
                  std::string(e.what()) + " at delta_c = " + std::to_string(out.grid[i]));
    }
  });
  return out;
}

SpectrumTrace side_illumination_spectrum(const CqedLayout& cqed, const GridSpec& grid,
                                         int threads) {
  if (cqed.qubit_ensemble_id < 0 ||
      cqed.qubit_ensemble_id >= static_cast<int>(cqed.layout.ensembles.size())) {
    throw NoQubit("layout has no qubit ensemble tag");
  }
  DriveSpec drive;
  drive.kind = DriveKind::SideIllumination;
  drive.targets = {cqed.qubit_ensemble_id};
  SpectrumTrace out;
  out.grid = grid.materialize();
  out.method = "side-illumination";
  out.s.resize(out.grid.size());
  parallel_for(out.grid.size(), threads, [&](std::size_t i) {
    const std::vector<Complex> b = solve_collective_steady(cqed.layout, out.grid[i], drive);
    const Complex e = emitted_right_port(b, cqed.layout, drive.amplitude);
    out.s[i] = std::norm(e);
  });
  const double smax = *std::max_element(out.s.begin(), out.s.end());
  if (smax > 0.0) {
    for (double& v : out.s) v /= smax;
  }
  return out;
}

std::vector<PeakInfo> find_peaks(const std::vector<double>& grid,
                                 const std::vector<double>& values,
                                 std::size_t max_peaks) {
  std::vector<PeakInfo> peaks;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] >= values[i + 1]) {
      // quadratic refinement around the grid maximum
      const double y0 = values[i - 1], y1 = values[i], y2 = values[i + 1];
      const double denom = y0 - 2.0 * y1 + y2;
      double dx = 0.0, peak = y1;
      if (denom != 0.0) {
        dx = 0.5 * (y0 - y2) / denom;
        dx = std::clamp(dx, -0.5, 0.5);
        peak = y1 - 0.25 * (y0 - y2) * dx;
      }
      PeakInfo p;
      p.position = grid[i] + dx * (grid[i + 1] - grid[i]);
      p.height = peak;
      peaks.push_back(p);
    }
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const PeakInfo& a, const PeakInfo& b) { return a.height > b.height; });
  if (peaks.size() > max_peaks) peaks.resize(max_peaks);
  return peaks;
}

SplittingInfo measure_splitting(const std::vector<double>& grid,
                                const std::vector<double>& values) {
  SplittingInfo info;
  const std::vector<PeakInfo> peaks = find_peaks(grid, values, 2);
  if (peaks.size() < 2) return info;
  const double lo = std::min(peaks[0].position, peaks[1].position);
  const double hi = std::max(peaks[0].position, peaks[1].position);
  double valley = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] > lo && grid[i] < hi) valley = std::min(valley, values[i]);
  }
  if (!std::isfinite(valley)) return info;
  info.separation = hi - lo;
  info.peak_to_valley =
      valley > 0.0 ? std::min(peaks[0].height, peaks[1].height) / valley
                   : std::numeric_limits<double>::infinity();
  info.resolved = info.peak_to_valley > 1.0;
  return info;
}

OracleComparison compare_traces(const SpectrumTrace& exact, const SpectrumTrace& binned,
                                double feature_tol) {
  if (exact.grid.size() != binned.grid.size()) {
    throw InvalidGrid("oracle comparison needs a shared grid");
  }
  const std::size_t n = exact.grid.size();
  std::vector<double> ye(n), yb(n);
  for (std::size_t i = 0; i < n; ++i) {
    ye[i] = std::abs(exact.t[i]);
    yb[i] = std::abs(binned.t[i]);
  }
  double sum_all = 0.0, sum_ex = 0.0;
  int kept = 0, excluded = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = ye[i] - yb[i];
    sum_all += d * d;
    // a 5-point median filter flattens features narrower than 2 grid
    // steps; points the filter moves by more than feature_tol are excluded
    bool narrow = false;
    if (i >= 2 && i + 2 < n) {
      std::array<double, 5> w{ye[i - 2], ye[i - 1], ye[i], ye[i + 1], ye[i + 2]};
      std::sort(w.begin(), w.end());
      narrow = std::abs(ye[i] - w[2]) > feature_tol;
    }
    if (narrow) {
      ++excluded;
    } else {
      sum_ex += d * d;
      ++kept;
    }
  }
  OracleComparison out;
  out.rms_all = std::sqrt(sum_all / static_cast<double>(n));
  out.rms_excluded = kept > 0 ? std::sqrt(sum_ex / static_cast<double>(kept)) : 0.0;
  out.excluded_points = excluded;
  return out;
}

std::string trace_to_csv(const SpectrumTrace& trace) {
  std::string out;
  char buf[160];
  if (!trace.s.empty()) {
    out = "delta_hz,s_norm\n";
    for (std::size_t i = 0; i < trace.grid.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", rad_to_hz(trace.grid[i]), trace.s[i]);
      out += buf;
    }
  } else {
    out = "delta_hz,re_t,im_t,abs_t2\n";
    for (std::size_t i = 0; i < trace.grid.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", rad_to_hz(trace.grid[i]),
                    trace.t[i].real(), trace.t[i].imag(), std::norm(trace.t[i]));
      out += buf;
    }
  }
  return out;
}

}  // namespace wqed
