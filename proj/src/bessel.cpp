// Order-one Bessel functions.
//
//   x ≤ 8        ascending power series, summed in long double
//   8 < x < 25   Steed's method: continued fractions for J₁'/J₁ and for
//                (H₁'/H₁), combined through the Wronskian 2/(πx)
//   x ≥ 25       Hankel asymptotic expansion; the smallest term is ~e^{-2x}
#include "vnag/bessel.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace vnag {

namespace {

constexpr double kSeriesLimit = 8.0;
constexpr double kAsymptoticLimit = 25.0;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

BesselPair series(double xd, bool with_y) {
  using Real = long double;
  const Real x = xd;
  const Real half = x / 2;
  const Real q = -half * half;
  Real term = half;  // (x/2)^{2m+1} (-1)^m / (m! (m+1)!) at m = 0
  Real j = 0, psi_sum = 0;
  // ψ(m+1) + ψ(m+2) = -2γ + H_m + H_{m+1}
  constexpr Real euler_gamma = 0.577215664901532860606512090082402431L;
  Real harmonic = 0;  // H_m
  for (int m = 0; m < 200; ++m) {
    const Real harmonic_next = harmonic + Real(1) / (m + 1);
    j += term;
    psi_sum += term * (-2 * euler_gamma + harmonic + harmonic_next);
    if (std::abs(term) <= std::numeric_limits<Real>::epsilon() * std::abs(j) * Real(1e-3) && m > 2) break;
    term *= q / ((m + 1) * static_cast<Real>(m + 2));
    harmonic = harmonic_next;
  }
  if (!with_y) return {static_cast<double>(j), 0.0};
  constexpr Real pi = 3.141592653589793238462643383279502884L;
  const Real y = (2 / pi) * j * std::log(half) - 2 / (pi * x) - psi_sum / pi;
  return {static_cast<double>(j), static_cast<double>(y)};
}

BesselPair steed(double x) {
  constexpr double nu = 1.0;
  constexpr double eps = 1e-16;
  const double xi = 1.0 / x;

  // CF1: f = J₁'/J₁ by modified Lentz; `sign` tracks the sign of J₁.
  double f = nu * xi;
  if (std::abs(f) < kTiny) f = kTiny;
  double b = 2.0 * nu * xi, d = 0.0, c = f;
  int sign = 1;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    b += 2.0 * xi;
    d = b - d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (d < 0.0) sign = -sign;
    if (std::abs(delta - 1.0) < eps) break;
  }
  if (it == kMaxIterations) throw std::runtime_error("bessel: CF1 did not converge");

  // CF2: p + iq = H₁'/H₁ = -1/(2x) + i + (i/x) a₁/(b₁ + a₂/(b₂ + ...)),
  // a_k = ((2k-1)/2)² - ν², b_k = 2(x + ik).
  using C = std::complex<double>;
  C frac = kTiny, lc = frac, ld = 0.0;
  for (it = 1; it < kMaxIterations; ++it) {
    const double a = (it - 0.5) * (it - 0.5) - nu * nu;
    const C bk(2.0 * x, 2.0 * it);
    ld = bk + a * ld;
    if (std::abs(ld) < kTiny) ld = kTiny;
    lc = bk + a / lc;
    if (std::abs(lc) < kTiny) lc = kTiny;
    ld = 1.0 / ld;
    const C delta = lc * ld;
    frac *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  if (it == kMaxIterations) throw std::runtime_error("bessel: CF2 did not converge");
  const C pq = C(-0.5 * xi, 1.0) + C(0.0, xi) * frac;
  const double p = pq.real(), q = pq.imag();

  const double wronskian = 2.0 / (std::numbers::pi * x);
  const double gamma = (p - f) / q;
  double j = std::sqrt(wronskian / ((p - f) * gamma + q));
  if (sign < 0) j = -j;
  return {j, gamma * j};
}

BesselPair hankel(double x) {
  // P ~ Σ (-1)^k a_{2k}/x^{2k}, Q ~ Σ (-1)^k a_{2k+1}/x^{2k+1},
  // a_k = Π_{i≤k} (4 - (2i-1)²) / (k! 8^k).
  constexpr double mu = 4.0;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
    if (std::abs(term) >= last) break;
    last = std::abs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (std::abs(term) < 1e-18) break;
  }
  const double s = std::sin(x), c = std::cos(x);
  const double cos_chi = (s - c) * std::numbers::sqrt2 / 2.0;   // cos(x - 3π/4)
  const double sin_chi = -(s + c) * std::numbers::sqrt2 / 2.0;  // sin(x - 3π/4)
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  return {amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)};
}

}  // namespace

BesselPair bessel_j1y1(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_y1: argument must be positive and finite");
  if (x <= kSeriesLimit) return series(x, true);
  if (x < kAsymptoticLimit) return steed(x);
  return hankel(x);
}

double bessel_j1(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_j1: argument must be nonnegative and finite");
  if (x == 0.0) return 0.0;
  if (x <= kSeriesLimit) return series(x, false).j1;
  return bessel_j1y1(x).j1;
}

double bessel_y1(double x) { return bessel_j1y1(x).y1; }

}  // namespace vnag
