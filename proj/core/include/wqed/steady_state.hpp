#ifndef WQED_STEADY_STATE_HPP
#define WQED_STEADY_STATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wqed/ensemble.hpp"
#include "wqed/modes.hpp"
#include "wqed/types.hpp"

namespace wqed {

enum class DriveKind { WaveguideForward, SideIllumination };

struct DriveSpec {
  DriveKind kind = DriveKind::WaveguideForward;
  double amplitude = 1.0;       // rad/s; arbitrary in the linear regime
  std::vector<int> targets;     // ensemble ids, SideIllumination only
};

struct GridSpec {
  double min = 0.0, max = 0.0;  // rad/s
  int count = 0;
  std::vector<double> points;   // explicit grid overrides (min,max,count)

  std::vector<double> materialize() const;  // throws InvalidGrid
};

struct SpectrumTrace {
  std::vector<double> grid;   // rad/s, strictly increasing
  std::vector<Complex> t;     // transmission amplitude (t-traces)
  std::vector<double> s;      // normalized side-illumination power (S-traces)
  std::string method;
  std::uint64_t seed = 0;
  std::string config_hash;
};

enum class SolveBackend { Auto, Structured, Dense };

// Collective-spin coherences B_p from the self-consistent linear response
// at drive detuning delta_c. Per-bin responses come from the owning
// ensemble's line, Gamma' and detuning offset.
std::vector<Complex> solve_collective_steady(const BinnedLayout& layout,
                                             double delta_c, const DriveSpec& drive,
                                             SolveBackend backend = SolveBackend::Auto);

// Spec-signature overload: one line/Gamma' applied to every bin.
std::vector<Complex> solve_collective_steady(const BinnedLayout& layout,
                                             const SpectralLine& line,
                                             double gamma_prime, double delta_c,
                                             const DriveSpec& drive,
                                             SolveBackend backend = SolveBackend::Auto);

// t = 1 + (i/(2 Omega)) sum_p sqrt(n_p Gamma_p) e^{-i beta z_p} B_p.
Complex transmission_input_output(const std::vector<Complex>& b,
                                  const BinnedLayout& layout, const DriveSpec& drive);

// Product formula over collective modes: t = prod_mu chi^{-1}gamma /
// (chi^{-1}gamma + Lambda_mu). Valid for identical-response ensembles.
SpectrumTrace transmission_product(const ModeSet& modes, const SpectralLine& line,
                                   double gamma_prime, const GridSpec& grid);

// Layout-aware wrapper; throws IncompatibleOffsets when bins carry distinct
// detuning offsets (the shared-chi factorization breaks).
SpectrumTrace transmission_product_for_layout(const BinnedLayout& layout,
                                              const GridSpec& grid,
                                              int dense_limit = 10000);

// Exact N-emitter steady state: every emitter sampled individually
// (z_j uniform over the support, Delta_j from the line), Lorentzian
// single-emitter responses, input-output summation with n = 1.
SpectrumTrace exact_steady_transmission(const EnsembleSpec& spec, std::uint64_t seed,
                                        const GridSpec& grid, std::uint64_t size_limit = 10000);

// Drives only the qubit ensemble's bins and records the right-port emitted
// power, normalized to its grid maximum.
SpectrumTrace side_illumination_spectrum(const CqedLayout& cqed, const GridSpec& grid,
                                         int threads = 1);

// Batch driver: linear solve + input-output per grid point (optionally in
// parallel); grid order is preserved.
SpectrumTrace spectrum_scan(const BinnedLayout& layout, const DriveSpec& drive,
                            const GridSpec& grid, int threads = 1);

struct PeakInfo {
  double position = 0.0;  // rad/s, quadratic-refined
  double height = 0.0;
};

// Local maxima of a sampled trace, highest first, quadratically refined.
std::vector<PeakInfo> find_peaks(const std::vector<double>& grid,
                                 const std::vector<double>& values,
                                 std::size_t max_peaks = 8);

struct SplittingInfo {
  bool resolved = false;     // two peaks with an interior valley
  double separation = 0.0;   // rad/s between the two highest peaks
  double peak_to_valley = 0.0;
};
SplittingInfo measure_splitting(const std::vector<double>& grid,
                                const std::vector<double>& values);

// RMS |t| difference between an exact and a binned trace on a shared grid.
// Points where the exact trace has sub-grid-width features (sharper than a
// 2-step linear baseline by more than `feature_tol`) are excluded from
// rms_excluded: the binned response cannot contain structure of width ~ Gamma'.
struct OracleComparison {
  double rms_all = 0.0;
  double rms_excluded = 0.0;
  int excluded_points = 0;
};
OracleComparison compare_traces(const SpectrumTrace& exact, const SpectrumTrace& binned,
                                double feature_tol = 0.05);

// CSV exports, schema per trace kind.
std::string trace_to_csv(const SpectrumTrace& trace);

}  // namespace wqed

#endif
