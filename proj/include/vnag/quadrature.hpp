#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace vnag {

/// Composite Simpson on [a, b] with `n` (even) subintervals.
template <class Scalar, class F>
Scalar simpson(F&& f, Scalar a, Scalar b, std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("simpson: subinterval count must be even and >= 2");
  const Scalar h = (b - a) / static_cast<Scalar>(n);
  Scalar odd = 0, even = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const Scalar t = a + h * static_cast<Scalar>(i);
    (i % 2 == 1 ? odd : even) += f(t);
  }
  return h / 3 * (f(a) + 4 * odd + 2 * even + f(b));
}

/// Composite Simpson over equally spaced samples; an odd sample count is required.
template <class Scalar>
Scalar simpson_samples(std::span<const Scalar> samples, Scalar step) {
  const std::size_t m = samples.size();
  if (m < 3 || m % 2 == 0) throw std::invalid_argument("simpson: sample count must be odd and >= 3");
  Scalar odd = 0, even = 0;
  for (std::size_t i = 1; i + 1 < m; ++i) (i % 2 == 1 ? odd : even) += samples[i];
  return step / 3 * (samples.front() + 4 * odd + 2 * even + samples.back());
}

/// Number of Simpson subintervals for a piece of length `len`: even, at least
/// `min_n`, and with spacing no larger than `max_step`.
inline std::size_t simpson_count(double len, double max_step, std::size_t min_n) {
  auto n = static_cast<std::size_t>(std::ceil(len / max_step - 1e-9));
  n = std::max(n, min_n);
  return n + (n % 2);
}

/// Piecewise composite Simpson across sorted `breaks`.  Each piece is
/// integrated on its own uniform grid so that kinks at the break points do
/// not pollute the fourth-order error.
template <class F>
double simpson_piecewise(F&& f, std::span<const double> breaks, double max_step, std::size_t min_n = 128) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (b <= a) continue;
    total += simpson(f, a, b, simpson_count(b - a, max_step, min_n));
  }
  return total;
}

/// Sorted union of [t1, t2] endpoints and the interior knots.
inline std::vector<double> merge_breaks(double t1, double t2, std::span<const double> knots) {
  std::vector<double> out{t1};
  for (double k : knots) {
    if (k > t1 && k < t2) out.push_back(k);
  }
  out.push_back(t2);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace vnag
