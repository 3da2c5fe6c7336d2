#ifndef WQED_SCATTER_SOLVER_HPP
#define WQED_SCATTER_SOLVER_HPP

#include <vector>

#include "wqed/types.hpp"

namespace wqed {

// One pointlike linear scatterer coupled to the waveguide mode.
// phi = (n Gamma/2) W is the response strength, drive = n sqrt(Gamma/2) W Omega
// the source it injects (both zero-cost conventions of the bin equations).
struct Scatterer {
  double z = 0.0;   // position, lambda units
  Complex phi{0.0, 0.0};
  Complex drive{0.0, 0.0};
};

// Solves the self-consistent field F(z_g) = sum_g' G(z_g, z_g')
// (-i Phi_g' F_g' - psi_g') with G = e^{i beta |z - z'|}, i.e. the linear
// system (I + i G D_Phi) F = -G psi, and returns F at every scatterer.
//
// Scatterers at exactly equal positions are grouped into one effective
// scatterer; on distinct positions G has a tridiagonal inverse, so the
// solve is O(m) (LAPACK zgtsv). A dense solve of the grouped system is
// kept as a fallback for the measure-zero spacings where the tridiagonal
// construction is singular (gaps at exact half-wavelength multiples), and
// as a reference for tests.
std::vector<Complex> solve_scatter_field(const std::vector<Scatterer>& sc,
                                         double beta, bool force_dense = false);

}  // namespace wqed

#endif
