#ifndef WQED_ENSEMBLE_HPP
#define WQED_ENSEMBLE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "wqed/spectral.hpp"
#include "wqed/types.hpp"

namespace wqed {

enum class Placement { RandomUniform, EquallySpaced, Explicit };

// One localized ensemble. Positions/extents are in units of the guided
// wavelength; Gamma_1D is the transverse-plane-averaged waveguide decay.
struct EnsembleSpec {
  std::uint64_t n_emitters = 0;
  double gamma_1d = 0.0;       // rad/s
  double gamma_prime = 0.0;    // rad/s
  SpectralLine line;
  double delta_z = 0.0;        // units of lambda
  double center = 0.0;         // units of lambda
  double detuning_offset = 0.0;  // rad/s, applied uniformly to the ensemble
  Placement placement = Placement::RandomUniform;
  std::vector<double> explicit_positions;  // Placement::Explicit
};

// m positional bins, possibly spanning several ensembles. `bin_weight[p]`
// is the exact emitter count per bin of the owning ensemble (n = N/m).
struct BinnedLayout {
  std::vector<double> positions;        // units of lambda
  std::vector<double> bin_weight;       // emitters per bin
  std::vector<int> ensemble_id;         // per bin
  std::vector<double> detuning_offset;  // rad/s per bin
  double beta = two_pi;                 // 2*pi/lambda in lambda units
  std::vector<EnsembleSpec> ensembles;

  std::size_t size() const { return positions.size(); }
};

struct FrequencyGrid {
  std::vector<double> nodes;    // rad/s, sorted
  std::vector<double> weights;  // sum to 1
};

struct CqedLayout {
  EnsembleSpec mirror;  // both mirrors share this spec
  EnsembleSpec qubit;
  int r = 0;            // extra integer-wavelength mirror spacing
  BinnedLayout layout;
  int qubit_ensemble_id = 1;  // ensembles are {mirror1, qubit, mirror2}
};

enum class Compensation { Off, QubitOnly, Difference };

using WarningSink = std::function<void(const std::string&)>;

// Deterministic positional binning: identical (spec, m, seed, ensemble_id)
// give bit-identical layouts. Throws BadBinCount unless m divides N.
BinnedLayout build_bins(const EnsembleSpec& spec, std::uint64_t m,
                        std::uint64_t seed, int ensemble_id = 0,
                        const WarningSink& warn = {});

// Equal-weight quantile nodes Delta_q = F^{-1}((q - 1/2)/n_f); the
// Lorentzian line is truncated at the 0.1% tails.
FrequencyGrid sample_frequencies(const SpectralLine& line, int n_f);

// Mirror-qubit-mirror geometry: mirrors centered at 0 and 1/2 + r (lambda),
// qubit at the midpoint. With compensation, the qubit's detuning offset
// counters the difference in collective line shifts (Re Lambda_0).
CqedLayout build_cqed_layout(const EnsembleSpec& mirror, const EnsembleSpec& qubit,
                             int r, std::uint64_t m_per_ensemble, std::uint64_t seed,
                             Compensation compensate = Compensation::Difference,
                             const WarningSink& warn = {});

// Re Lambda_0 = -(N Gamma_1D / 2)(beta delta_z / 3): the perturbative
// collective-line shift of this ensemble (valid for delta_z << lambda).
double compensation_detuning(const EnsembleSpec& spec);

}  // namespace wqed

#endif
