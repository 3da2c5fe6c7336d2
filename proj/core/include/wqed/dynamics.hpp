#ifndef WQED_DYNAMICS_HPP
#define WQED_DYNAMICS_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "wqed/ensemble.hpp"
#include "wqed/steady_state.hpp"
#include "wqed/types.hpp"

namespace wqed {

// Linear generator sigma' = A sigma + b over (positional bin) x (frequency
// node) states, stored in factored form: diagonal detuning/decay terms plus
// the rank-structured waveguide kernel applied by prefix sweeps along the
// sorted positions (O(D) per application).
class LinearGenerator {
 public:
  LinearGenerator(const BinnedLayout& layout,
                  const std::vector<FrequencyGrid>& grids_per_ensemble,
                  const DriveSpec* drive, double delta_c, std::size_t size_limit = 1000000);

  std::size_t dimension() const { return diag_.size(); }
  std::size_t n_bins() const { return layout_.size(); }
  int n_freq() const { return n_f_; }
  const BinnedLayout& layout() const { return layout_; }
  const std::vector<FrequencyGrid>& grids() const { return grids_; }

  // out = A y + b
  void apply(const Eigen::VectorXcd& y, Eigen::VectorXcd& out) const;

  const Eigen::VectorXcd& drive_vector() const { return b_; }
  std::size_t state_index(std::size_t bin, int q) const { return bin * n_f_ + q; }
  // weighted per-bin coherence: B_p = sqrt(n_p) sum_q w_q sigma_{p,q}
  Complex bin_coherence(const Eigen::VectorXcd& y, std::size_t bin) const;
  // magnitude bound of the diagonal, for initial step-size control
  double diag_scale() const { return diag_scale_; }
  // steady state -A^{-1} b via a dense solve (small systems / tests)
  Eigen::VectorXcd steady_state_dense() const;
  Eigen::MatrixXcd dense_matrix() const;  // small systems only

 private:
  BinnedLayout layout_;
  std::vector<FrequencyGrid> grids_;
  int n_f_ = 0;
  Eigen::VectorXcd diag_;
  Eigen::VectorXcd b_;
  // kernel data on sorted positions
  std::vector<std::size_t> order_;       // bins sorted by position
  std::vector<Complex> phase_fwd_;       // e^{+i beta z} per sorted bin
  std::vector<Complex> phase_bwd_;       // e^{-i beta z} per sorted bin
  std::vector<double> coupl_in_;         // sqrt(G_p) n_p w_q folding per bin
  std::vector<double> coupl_out_;        // sqrt(G_p)/2 per bin
  double diag_scale_ = 0.0;
  mutable Eigen::VectorXcd ybar_;        // scratch: per-bin weighted sums
  mutable Eigen::VectorXcd field_;
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  double last_error_estimate = 0.0;
};

struct TimeTrace {
  std::vector<double> times;   // seconds
  std::vector<double> p;       // population / |amplitude|^2
  std::string initial_condition;
  IntegratorStats stats;
  double gamma_1d_ref = 0.0;   // for the t_gamma1d export column
};

using StepObserver = std::function<void(double t, const Eigen::VectorXcd& y)>;

// Adaptive Dormand-Prince 5(4); steps land exactly on the requested output
// times. `on_output` runs at every output time, `on_step` (optional) after
// every accepted step. Throws StepFailure if the step size underflows.
IntegratorStats evolve(const LinearGenerator& gen, const Eigen::VectorXcd& initial,
                       const std::vector<double>& t_out, double rel_tol, double abs_tol,
                       const StepObserver& on_output, const StepObserver& on_step = {});

// Undriven qubit-excited evolution of a CQED layout; returns the normalized
// qubit population P(t) = |B_Q(t)|^2 / P(0).
TimeTrace rabi_trace(const CqedLayout& cqed, int n_f, const std::vector<double>& t_out,
                     double rel_tol = 1e-8, double abs_tol = 1e-12);

// Collective amplitudes of a CQED state: qubit, cavity (B_C1 - B_C2)/sqrt(2)
// and the orthogonal mirror combination (diagnostics).
struct CollectiveAmps {
  Complex qubit;
  Complex cavity;
  Complex cavity_orth;
};
CollectiveAmps project_collective(const LinearGenerator& gen, const CqedLayout& cqed,
                                  const Eigen::VectorXcd& y);

// Dominant oscillation frequency (Hz) of a sampled P(t): mean spacing of
// quadratically refined interior maxima; 0 when fewer than two are found.
double measure_oscillation_frequency(const std::vector<double>& times,
                                     const std::vector<double>& p);

// CSV export: t_s, t_gamma1d, p_norm.
std::string time_trace_to_csv(const TimeTrace& trace);

}  // namespace wqed

#endif
