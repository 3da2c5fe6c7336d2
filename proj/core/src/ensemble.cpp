#include "wqed/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wqed/errors.hpp"
#include "wqed/rng.hpp"

namespace wqed {

namespace {

void validate_spec(const EnsembleSpec& spec) {
  if (spec.n_emitters < 1) throw SchemaError("ensemble needs N >= 1");
  if (!(spec.gamma_1d > 0.0)) throw SchemaError("Gamma_1D must be > 0");
  if (!(spec.gamma_prime >= 0.0)) throw SchemaError("Gamma' must be >= 0");
  if (!(spec.delta_z >= 0.0)) throw SchemaError("delta_z must be >= 0");
  spec.line.validate();
  if (spec.placement == Placement::Explicit) {
    const double lo = spec.center - 0.5 * spec.delta_z;
    const double hi = spec.center + 0.5 * spec.delta_z;
    for (double z : spec.explicit_positions) {
      if (z < lo || z > hi) {
        throw SchemaError("explicit position " + std::to_string(z) +
                          " outside [center - dz/2, center + dz/2]");
      }
    }
  }
}

std::uint64_t nearest_divisor(std::uint64_t n, std::uint64_t m) {
  for (std::uint64_t d = 0;; ++d) {
    if (m > d && (m - d) >= 1 && n % (m - d) == 0) return m - d;
    if (m + d <= n && n % (m + d) == 0) return m + d;
  }
}

}  // namespace

BinnedLayout build_bins(const EnsembleSpec& spec, std::uint64_t m,
                        std::uint64_t seed, int ensemble_id,
                        const WarningSink& warn) {
  validate_spec(spec);
  const std::uint64_t n_total = spec.n_emitters;
  if (m < 1 || m > n_total) {
    throw BadBinCount("bin count m = " + std::to_string(m) +
                      " must satisfy 1 <= m <= N = " + std::to_string(n_total));
  }
  if (n_total % m != 0) {
    throw BadBinCount("m = " + std::to_string(m) + " does not divide N = " +
                      std::to_string(n_total) + "; nearest valid m is " +
                      std::to_string(nearest_divisor(n_total, m)));
  }
  if (warn && spec.delta_z > 0.0 && m < 100) {
    warn("m = " + std::to_string(m) + " < 100 positional bins with delta_z > 0");
  }

  BinnedLayout out;
  out.positions.resize(m);
  const double lo = spec.center - 0.5 * spec.delta_z;
  switch (spec.placement) {
    case Placement::RandomUniform:
      for (std::uint64_t p = 0; p < m; ++p) {
        const double u = rng::uniform01(seed, rng::kBinPositions +
                                                  (static_cast<std::uint64_t>(ensemble_id) << 8),
                                        p);
        out.positions[p] = lo + u * spec.delta_z;
      }
      break;
    case Placement::EquallySpaced:
      // z_p = center - dz/2 + p dz/m, p = 1..m (equal spacing dz/m)
      for (std::uint64_t p = 0; p < m; ++p) {
        out.positions[p] = lo + (p + 1.0) * spec.delta_z / static_cast<double>(m);
      }
      break;
    case Placement::Explicit:
      if (spec.explicit_positions.size() != m) {
        throw BadBinCount("explicit placement provides " +
                          std::to_string(spec.explicit_positions.size()) +
                          " positions but m = " + std::to_string(m));
      }
      out.positions = spec.explicit_positions;
      break;
  }
  if (spec.delta_z == 0.0 && spec.placement != Placement::Explicit) {
    std::fill(out.positions.begin(), out.positions.end(), spec.center);
  }

  const double n_per_bin = static_cast<double>(n_total / m);
  out.bin_weight.assign(m, n_per_bin);
  out.ensemble_id.assign(m, ensemble_id);
  out.detuning_offset.assign(m, spec.detuning_offset);
  out.ensembles.assign(1, spec);
  return out;
}

FrequencyGrid sample_frequencies(const SpectralLine& line, int n_f) {
  line.validate();
  if (n_f < 2) throw SchemaError("frequency grid needs n_f >= 2");
  FrequencyGrid grid;
  grid.nodes.resize(n_f);
  grid.weights.assign(n_f, 1.0 / n_f);
  // Lorentzian quantiles are truncated at the 0.1% tails; unbounded nodes
  // would dominate the ODE stiffness.
  double u_lo = 0.0, u_hi = 1.0;
  if (line.kind == LineKind::Lorentzian) {
    u_lo = 0.001;
    u_hi = 0.999;
  }
  for (int q = 0; q < n_f; ++q) {
    const double u = u_lo + (u_hi - u_lo) * (q + 0.5) / n_f;
    grid.nodes[q] = quantile_eval(line, u);
  }
  std::sort(grid.nodes.begin(), grid.nodes.end());
  return grid;
}

double compensation_detuning(const EnsembleSpec& spec) {
  const double nu = two_pi * spec.delta_z;
  return -(static_cast<double>(spec.n_emitters) * spec.gamma_1d / 2.0) * (nu / 3.0);
}

CqedLayout build_cqed_layout(const EnsembleSpec& mirror, const EnsembleSpec& qubit,
                             int r, std::uint64_t m_per_ensemble, std::uint64_t seed,
                             Compensation compensate, const WarningSink& warn) {
  if (r < 0) throw SchemaError("mirror spacing index r must be >= 0");
  if (m_per_ensemble < 1) throw SchemaError("m_per_ensemble must be >= 1");

  const double spacing = 0.5 + static_cast<double>(r);
  EnsembleSpec m1 = mirror;
  m1.center = 0.0;
  EnsembleSpec q = qubit;
  q.center = 0.5 * spacing;
  EnsembleSpec m2 = mirror;
  m2.center = spacing;

  if (compensate != Compensation::Off) {
    const double shift = (compensate == Compensation::Difference)
                             ? compensation_detuning(mirror) - compensation_detuning(qubit)
                             : -compensation_detuning(qubit);
    q.detuning_offset += shift;
  }

  const EnsembleSpec* parts[3] = {&m1, &q, &m2};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double lo_i = parts[i]->center - 0.5 * parts[i]->delta_z;
      const double hi_i = parts[i]->center + 0.5 * parts[i]->delta_z;
      const double lo_j = parts[j]->center - 0.5 * parts[j]->delta_z;
      const double hi_j = parts[j]->center + 0.5 * parts[j]->delta_z;
      if (hi_i > lo_j && hi_j > lo_i) {
        throw OverlapError("ensemble spatial supports overlap (delta_z too large "
                           "for the mirror spacing)");
      }
    }
  }

  CqedLayout out;
  out.mirror = mirror;
  out.qubit = q;
  out.r = r;
  out.qubit_ensemble_id = 1;

  BinnedLayout l1 = build_bins(m1, m_per_ensemble, seed, 0, warn);
  BinnedLayout lq = build_bins(q, m_per_ensemble, seed, 1, warn);
  BinnedLayout l2 = build_bins(m2, m_per_ensemble, seed, 2, warn);
  BinnedLayout& all = out.layout;
  all.ensembles = {m1, q, m2};
  for (const BinnedLayout* part : {&l1, &lq, &l2}) {
    all.positions.insert(all.positions.end(), part->positions.begin(), part->positions.end());
    all.bin_weight.insert(all.bin_weight.end(), part->bin_weight.begin(), part->bin_weight.end());
    all.ensemble_id.insert(all.ensemble_id.end(), part->ensemble_id.begin(), part->ensemble_id.end());
    all.detuning_offset.insert(all.detuning_offset.end(), part->detuning_offset.begin(),
                               part->detuning_offset.end());
  }
  return out;
}

}  // namespace wqed
