#ifndef WQED_TYPES_HPP
#define WQED_TYPES_HPP

#include <complex>
#include <cstdint>
#include <numbers>

namespace wqed {

// All rates and detunings are angular frequencies (rad/s) internally.
// Positions and spatial extents are in units of the guided wavelength,
// so the wavenumber beta = 2*pi exactly.
using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr Complex iunit{0.0, 1.0};

inline double hz_to_rad(double f_hz) { return two_pi * f_hz; }
inline double rad_to_hz(double w_rad) { return w_rad / two_pi; }

}  // namespace wqed

#endif
