#include "wqed/faddeeva.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace wqed {

namespace {

constexpr double kInvSqrtPi = 0.5641895835477562869;  // 1/sqrt(pi)

// Weideman's rational approximation of w(z) on the upper half-plane
// (SIAM J. Numer. Anal. 31, 1497 (1994)). With kWeidemanN = 64 terms the
// approximation is accurate to ~1e-14 uniformly over Im z >= 0.
constexpr int kWeidemanN = 64;

struct WeidemanTable {
  double big_l;
  std::array<double, kWeidemanN> a;
};

WeidemanTable build_weideman() {
  WeidemanTable tab{};
  const int n = kWeidemanN;
  const int m = 2 * n;
  const int m2 = 2 * m;
  const long double pi_l = 3.14159265358979323846264338327950288L;
  const long double big_l = std::sqrt(static_cast<long double>(n) / std::sqrt(2.0L));
  tab.big_l = static_cast<double>(big_l);

  // Sample f(theta) = exp(-t^2) (L^2 + t^2) at theta_k = k pi / m,
  // t = L tan(theta/2), k = -m..m-1 (f(-m) = 0 in the limit).
  std::vector<long double> f(m2, 0.0L);
  for (int k = -m + 1; k <= m - 1; ++k) {
    const long double theta = static_cast<long double>(k) * pi_l / m;
    const long double t = big_l * std::tan(theta / 2.0L);
    f[k + m] = std::exp(-t * t) * (big_l * big_l + t * t);
  }

  // Cosine-series coefficients a_j = (1/m2) sum_k f(theta_k) cos(j theta_k).
  for (int j = 1; j <= n; ++j) {
    long double acc = 0.0L;
    for (int idx = 0; idx < m2; ++idx) {
      const long double theta = (static_cast<long double>(idx) - m) * pi_l / m;
      acc += f[idx] * std::cos(j * theta);
    }
    tab.a[j - 1] = static_cast<double>(acc / m2);
  }
  return tab;
}

const WeidemanTable& weideman() {
  static const WeidemanTable tab = build_weideman();
  return tab;
}

Complex w_weideman(Complex z) {
  const WeidemanTable& tab = weideman();
  const Complex il_minus_iz = Complex(tab.big_l, 0.0) - iunit * z;
  const Complex big_z = (Complex(tab.big_l, 0.0) + iunit * z) / il_minus_iz;
  Complex p(0.0, 0.0);
  for (int j = kWeidemanN - 1; j >= 0; --j) {
    p = p * big_z + tab.a[j];
  }
  return 2.0 * p / (il_minus_iz * il_minus_iz) + kInvSqrtPi / il_minus_iz;
}

// Laplace continued fraction, accurate to full precision for |z| >~ 8.
Complex w_continued_fraction(Complex z, int depth) {
  Complex r(0.0, 0.0);
  for (int k = depth; k >= 1; --k) {
    r = (0.5 * k) / (z - r);
  }
  return iunit * kInvSqrtPi / (z - r);
}

Complex w_upper(Complex z) {
  const double az = std::abs(z);
  if (az >= 12.0) return w_continued_fraction(z, 20);
  return w_weideman(z);
}

}  // namespace

Complex faddeeva_w(Complex z) {
  if (z.imag() >= 0.0) return w_upper(z);
  // w(z) = 2 exp(-z^2) - w(-z); exponentially large in the lower half-plane.
  return 2.0 * std::exp(-z * z) - w_upper(-z);
}

Complex erfcx(Complex z) {
  if (z.real() >= 0.0) return w_upper(iunit * z);
  return 2.0 * std::exp(z * z) - erfcx(-z);
}

double erf_inv(double y) {
  if (!(y > -1.0 && y < 1.0)) {
    if (y == 1.0) return HUGE_VAL;
    if (y == -1.0) return -HUGE_VAL;
    return std::nan("");
  }
  if (y == 0.0) return 0.0;

  // Initial guess (Winitzki), then Newton on erf(x) - y.
  const double a = 0.147;
  const double ln1my2 = std::log1p(-y * y);
  const double t1 = 2.0 / (pi * a) + ln1my2 / 2.0;
  double x = std::copysign(std::sqrt(std::sqrt(t1 * t1 - ln1my2 / a) - t1), y);
  for (int it = 0; it < 4; ++it) {
    const double err = std::erf(x) - y;
    const double deriv = 2.0 * kInvSqrtPi * std::exp(-x * x);
    if (deriv == 0.0) break;
    x -= err / deriv;
  }
  return x;
}

}  // namespace wqed
