#ifndef WQED_FADDEEVA_HPP
#define WQED_FADDEEVA_HPP

#include "wqed/types.hpp"

namespace wqed {

// Faddeeva function w(z) = e^{-z^2} erfc(-iz) for Im z >= 0 (values for
// Im z < 0 follow from w(z) = 2 e^{-z^2} - w(-z) and grow like e^{|z|^2}).
Complex faddeeva_w(Complex z);

// Scaled complementary error function e^{z^2} erfc(z) for complex z.
// Relative accuracy ~1e-13 for Re z >= 0; the left half-plane goes through
// the reflection erfcx(z) = 2 e^{z^2} - erfcx(-z) and inherits the
// conditioning of e^{z^2}.
Complex erfcx(Complex z);

// Inverse of erf on (-1, 1), accurate to ~1e-15 (Newton-polished).
double erf_inv(double y);

}  // namespace wqed

#endif
