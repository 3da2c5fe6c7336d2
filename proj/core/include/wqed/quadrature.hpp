#ifndef WQED_QUADRATURE_HPP
#define WQED_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "wqed/types.hpp"

namespace wqed {

struct QuadResult {
  Complex value{0.0, 0.0};
  double error = 0.0;   // accumulated error estimate
  long evaluations = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod 7-15 over [a, b] with worst-interval-first
// refinement. `breakpoints` (sorted, inside (a,b)) force initial
// subdivision, e.g. around an integrand peak.
QuadResult integrate_adaptive(const std::function<Complex(double)>& f,
                              double a, double b, double abs_tol,
                              const std::vector<double>& breakpoints = {},
                              int max_intervals = 20000);

}  // namespace wqed

#endif
