#include "wqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "wqed/errors.hpp"

namespace wqed {

LinearGenerator::LinearGenerator(const BinnedLayout& layout,
                                 const std::vector<FrequencyGrid>& grids_per_ensemble,
                                 const DriveSpec* drive, double delta_c,
                                 std::size_t size_limit)
    : layout_(layout), grids_(grids_per_ensemble) {
  if (grids_.size() != layout_.ensembles.size()) {
    throw SchemaError("need one frequency grid per ensemble");
  }
  n_f_ = static_cast<int>(grids_.front().nodes.size());
  for (const FrequencyGrid& g : grids_) {
    if (static_cast<int>(g.nodes.size()) != n_f_) {
      throw SchemaError("all ensembles must share one n_f");
    }
  }
  const std::size_t m = layout_.size();
  const std::size_t dim = m * static_cast<std::size_t>(n_f_);
  if (dim > size_limit) {
    throw SizeLimit("generator dimension " + std::to_string(dim) + " exceeds limit " +
                    std::to_string(size_limit));
  }

  diag_.resize(dim);
  b_ = Eigen::VectorXcd::Zero(dim);
  coupl_in_.resize(m);
  coupl_out_.resize(m);
  double max_diag = 0.0;
  double kernel_norm = 0.0;
  for (std::size_t p = 0; p < m; ++p) {
    const int e = layout_.ensemble_id[p];
    const EnsembleSpec& ens = layout_.ensembles[e];
    const FrequencyGrid& grid = grids_[e];
    Complex omega_p(0.0, 0.0);
    if (drive) {
      if (drive->kind == DriveKind::WaveguideForward) {
        omega_p = drive->amplitude * std::exp(iunit * layout_.beta * layout_.positions[p]);
      } else if (std::find(drive->targets.begin(), drive->targets.end(), e) !=
                 drive->targets.end()) {
        omega_p = drive->amplitude;
      }
    }
    for (int q = 0; q < n_f_; ++q) {
      const double det = delta_c - grid.nodes[q] - layout_.detuning_offset[p];
      diag_[state_index(p, q)] = Complex(-0.5 * ens.gamma_prime, det);
      b_[state_index(p, q)] = iunit * omega_p;
      max_diag = std::max(max_diag, std::abs(diag_[state_index(p, q)]));
    }
    coupl_in_[p] = std::sqrt(ens.gamma_1d) * layout_.bin_weight[p];
    coupl_out_[p] = 0.5 * std::sqrt(ens.gamma_1d);
    kernel_norm += 0.5 * layout_.bin_weight[p] * ens.gamma_1d;
  }
  diag_scale_ = max_diag + kernel_norm;

  order_.resize(m);
  std::iota(order_.begin(), order_.end(), 0);
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    return layout_.positions[a] < layout_.positions[b];
  });
  phase_fwd_.resize(m);
  phase_bwd_.resize(m);
  for (std::size_t s = 0; s < m; ++s) {
    const double z = layout_.positions[order_[s]];
    phase_fwd_[s] = std::exp(iunit * layout_.beta * z);
    phase_bwd_[s] = std::exp(-iunit * layout_.beta * z);
  }
  ybar_.resize(m);
  field_.resize(m);
}

void LinearGenerator::apply(const Eigen::VectorXcd& y, Eigen::VectorXcd& out) const {
  const std::size_t m = layout_.size();
  // per-bin weighted sums, folded with sqrt(Gamma_p) n_p
  for (std::size_t p = 0; p < m; ++p) {
    const FrequencyGrid& grid = grids_[layout_.ensemble_id[p]];
    Complex acc(0.0, 0.0);
    const std::size_t base = p * n_f_;
    for (int q = 0; q < n_f_; ++q) acc += grid.weights[q] * y[base + q];
    ybar_[p] = coupl_in_[p] * acc;
  }
  // field f_p = sum_p' e^{i beta |z_p - z_p'|} ybar_p' via prefix sweeps
  Complex acc_fwd(0.0, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    acc_fwd += phase_bwd_[s] * ybar_[order_[s]];
    field_[order_[s]] = phase_fwd_[s] * acc_fwd;
  }
  Complex acc_bwd(0.0, 0.0);
  for (std::size_t s = m; s-- > 0;) {
    field_[order_[s]] += phase_bwd_[s] * acc_bwd;
    acc_bwd += phase_fwd_[s] * ybar_[order_[s]];
  }
  // assemble
  out.resize(diag_.size());
  for (std::size_t p = 0; p < m; ++p) {
    const std::size_t base = p * n_f_;
    const Complex coupling = coupl_out_[p] * field_[p];
    for (int q = 0; q < n_f_; ++q) {
      out[base + q] = diag_[base + q] * y[base + q] - coupling + b_[base + q];
    }
  }
}

Complex LinearGenerator::bin_coherence(const Eigen::VectorXcd& y, std::size_t bin) const {
  const FrequencyGrid& grid = grids_[layout_.ensemble_id[bin]];
  Complex acc(0.0, 0.0);
  const std::size_t base = bin * n_f_;
  for (int q = 0; q < n_f_; ++q) acc += grid.weights[q] * y[base + q];
  return std::sqrt(layout_.bin_weight[bin]) * acc;
}

Eigen::MatrixXcd LinearGenerator::dense_matrix() const {
  const std::size_t dim = dimension();
  if (dim > 5000) throw SizeLimit("dense generator matrix limited to D <= 5000");
  const std::size_t m = layout_.size();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) a(i, i) = diag_[i];
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t pp = 0; pp < m; ++pp) {
      const Complex g =
          std::exp(iunit * layout_.beta * std::abs(layout_.positions[p] - layout_.positions[pp]));
      const FrequencyGrid& grid = grids_[layout_.ensemble_id[pp]];
      for (int q = 0; q < n_f_; ++q) {
        for (int qq = 0; qq < n_f_; ++qq) {
          a(state_index(p, q), state_index(pp, qq)) -=
              coupl_out_[p] * g * coupl_in_[pp] * grid.weights[qq];
        }
      }
    }
  }
  return a;
}

Eigen::VectorXcd LinearGenerator::steady_state_dense() const {
  const Eigen::MatrixXcd a = dense_matrix();
  return a.partialPivLu().solve(Eigen::VectorXcd(-b_));
}

namespace {

// Dormand-Prince 5(4) tableau (the c_i are not needed: the RHS is autonomous).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat (error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

IntegratorStats evolve(const LinearGenerator& gen, const Eigen::VectorXcd& initial,
                       const std::vector<double>& t_out, double rel_tol, double abs_tol,
                       const StepObserver& on_output, const StepObserver& on_step) {
  if (t_out.empty()) throw SchemaError("evolve needs at least one output time");
  for (std::size_t i = 0; i + 1 < t_out.size(); ++i) {
    if (!(t_out[i] < t_out[i + 1])) throw SchemaError("output times must be increasing");
  }
  if (!(rel_tol >= 1e-12 && rel_tol <= 1e-3) || !(abs_tol >= 0.0)) {
    throw SchemaError("tolerances out of range ([1e-12, 1e-3] relative)");
  }

  IntegratorStats stats;
  const std::size_t dim = gen.dimension();
  Eigen::VectorXcd y = initial;
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  Eigen::VectorXcd ytmp(dim), ynew(dim), yerr(dim);

  double t = t_out.front();
  on_output(t, y);
  std::size_t next_out = 1;
  if (next_out >= t_out.size()) return stats;
  const double t_end = t_out.back();

  gen.apply(y, k1);
  ++stats.rhs_evaluations;
  double h = std::min((t_end - t) / 16.0, 0.05 / std::max(gen.diag_scale(), 1e-300));

  while (next_out < t_out.size()) {
    const double t_next = t_out[next_out];
    bool hit_output = false;
    if (t + h >= t_next) {
      h = t_next - t;
      hit_output = true;
    }
    if (h < 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), std::abs(t_end))) {
      throw StepFailure("step size underflow at t = " + std::to_string(t) + " s");
    }

    ytmp = y + h * (a21 * k1);
    gen.apply(ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    gen.apply(ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    gen.apply(ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    gen.apply(ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    gen.apply(ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    gen.apply(ynew, k7);
    stats.rhs_evaluations += 6;

    yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err_sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = std::abs(yerr[i]) / sc;
      err_sq += e * e;
    }
    const double err = std::sqrt(err_sq / static_cast<double>(dim));
    stats.last_error_estimate = err;

    if (err <= 1.0) {
      t = hit_output ? t_next : t + h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      ++stats.steps;
      if (on_step) on_step(t, y);
      if (hit_output) {
        on_output(t, y);
        ++next_out;
      }
      const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      ++stats.rejected;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }
  return stats;
}

TimeTrace rabi_trace(const CqedLayout& cqed, int n_f, const std::vector<double>& t_out,
                     double rel_tol, double abs_tol) {
  const BinnedLayout& layout = cqed.layout;
  std::vector<FrequencyGrid> grids;
  grids.reserve(layout.ensembles.size());
  for (const EnsembleSpec& ens : layout.ensembles) {
    grids.push_back(sample_frequencies(ens.line, n_f));
  }
  const LinearGenerator gen(layout, grids, nullptr, 0.0);

  const int qe = cqed.qubit_ensemble_id;
  std::vector<std::size_t> qubit_bins;
  for (std::size_t p = 0; p < layout.size(); ++p) {
    if (layout.ensemble_id[p] == qe) qubit_bins.push_back(p);
  }
  if (qubit_bins.empty()) throw NoQubit("no bins belong to the qubit ensemble");

  const FrequencyGrid& qgrid = grids[qe];
  double sum_sqrt_w = 0.0;
  for (double w : qgrid.weights) sum_sqrt_w += std::sqrt(w);
  const double m_q = static_cast<double>(qubit_bins.size());
  const double init_amp = 1.0 / (std::sqrt(m_q) * sum_sqrt_w);

  Eigen::VectorXcd y0 = Eigen::VectorXcd::Zero(gen.dimension());
  for (std::size_t p : qubit_bins) {
    for (int q = 0; q < n_f; ++q) y0[gen.state_index(p, q)] = init_amp;
  }

  // weighted symmetric projection: (1/sqrt(m_Q)) sum_p sum_q sqrt(w_q) sigma
  auto project = [&](const Eigen::VectorXcd& y) {
    Complex acc(0.0, 0.0);
    for (std::size_t p : qubit_bins) {
      const std::size_t base = gen.state_index(p, 0);
      for (int q = 0; q < n_f; ++q) acc += std::sqrt(qgrid.weights[q]) * y[base + q];
    }
    return acc / std::sqrt(m_q);
  };

  TimeTrace trace;
  trace.initial_condition = "equal-amplitude qubit coherence, P(0)=1";
  trace.gamma_1d_ref = cqed.qubit.gamma_1d;
  trace.times.reserve(t_out.size());
  trace.p.reserve(t_out.size());
  trace.stats = evolve(gen, y0, t_out, rel_tol, abs_tol, [&](double t, const Eigen::VectorXcd& y) {
    trace.times.push_back(t);
    trace.p.push_back(std::norm(project(y)));
  });
  const double p0 = trace.p.front();
  if (p0 > 0.0) {
    for (double& v : trace.p) v /= p0;
  }
  return trace;
}

CollectiveAmps project_collective(const LinearGenerator& gen, const CqedLayout& cqed,
                                  const Eigen::VectorXcd& y) {
  const BinnedLayout& layout = cqed.layout;
  Complex b_sum[3] = {{0, 0}, {0, 0}, {0, 0}};
  double m_count[3] = {0, 0, 0};
  for (std::size_t p = 0; p < layout.size(); ++p) {
    const int e = layout.ensemble_id[p];
    b_sum[e] += gen.bin_coherence(y, p);
    m_count[e] += 1.0;
  }
  for (int e = 0; e < 3; ++e) {
    if (m_count[e] > 0) b_sum[e] /= std::sqrt(m_count[e]);
  }
  CollectiveAmps amps;
  amps.qubit = b_sum[1];
  amps.cavity = (b_sum[0] - b_sum[2]) / std::sqrt(2.0);
  amps.cavity_orth = (b_sum[0] + b_sum[2]) / std::sqrt(2.0);
  return amps;
}

double measure_oscillation_frequency(const std::vector<double>& times,
                                     const std::vector<double>& p) {
  std::vector<double> maxima;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p[i] > p[i - 1] && p[i] >= p[i + 1]) {
      const double denom = p[i - 1] - 2.0 * p[i] + p[i + 1];
      double dx = 0.0;
      if (denom != 0.0) dx = std::clamp(0.5 * (p[i - 1] - p[i + 1]) / denom, -0.5, 0.5);
      maxima.push_back(times[i] + dx * (times[i + 1] - times[i]));
    }
  }
  if (maxima.size() < 2) return 0.0;
  double spacing = 0.0;
  for (std::size_t i = 0; i + 1 < maxima.size(); ++i) spacing += maxima[i + 1] - maxima[i];
  spacing /= static_cast<double>(maxima.size() - 1);
  return spacing > 0.0 ? 1.0 / spacing : 0.0;
}

std::string time_trace_to_csv(const TimeTrace& trace) {
  std::string out = "t_s,t_gamma1d,p_norm\n";
  char buf[120];
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", trace.times[i],
                  trace.times[i] * trace.gamma_1d_ref, trace.p[i]);
    out += buf;
  }
  return out;
}

}  // namespace wqed
