#pragma once

#include "vnag/dynamics.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace vnag {

/// Unit triangle on (c − ε, c + ε) with its three corners replaced by C¹
/// blends of half-width δ.
struct TriangleBump {
  double c;
  double eps;
  double delta;
};

/// sin(kπ(t − t1)/(t2 − t1)).
struct SinusoidMode {
  int k;
};

/// Σ a_k sin(kπ(t − t1)/(t2 − t1)) with seeded coefficients.
struct FourierSine {
  std::uint64_t seed;
  int n_modes;
  double decay;
  Vector coefficients;
};

/// An admissible displacement h with h(t1) = h(t2) = 0, given as a scalar
/// profile times a fixed direction in ℝ^d (the first axis in 1-D).
class Perturbation {
 public:
  using Kind = std::variant<TriangleBump, SinusoidMode, FourierSine>;

  Perturbation(Kind kind, double t1, double t2, double sigma = 1.0, Vector direction = Vector::Ones(1));

  const Kind& kind() const { return kind_; }
  double t1() const { return t1_; }
  double t2() const { return t2_; }
  double sigma() const { return sigma_; }
  const Vector& direction() const { return direction_; }
  int dim() const { return static_cast<int>(direction_.size()); }

  /// Scalar profile σ·s(t) and its time derivative; zero outside [t1, t2].
  double profile(double t) const;
  double profile_rate(double t) const;

  Vector value(double t) const { return profile(t) * direction_; }
  Vector rate(double t) const { return profile_rate(t) * direction_; }

  /// Interior times where h is only piecewise smooth.  Empty when σ = 0.
  std::vector<double> knots() const;

  /// max|h| + max|ḣ| over a uniform sample of `samples` points.
  double sup_norm(std::size_t samples = 10001) const;

 private:
  Kind kind_;
  double t1_;
  double t2_;
  double sigma_;
  Vector direction_;
};

/// Blended unit triangle.  Requires t1 ≤ c − ε − δ and c + ε + δ ≤ t2 and
/// 0 < δ ≤ ε/100.
Perturbation triangle(double c, double eps, double delta, double t1, double t2);
/// Same with the default blend half-width δ = ε/1000.
Perturbation triangle(double c, double eps, double t1, double t2);

Perturbation sinusoid(int k, double t1, double t2);

/// Coefficients a_k = u_k k^{−decay}.  u_k ∈ [−1, 1) is built from the top
/// 53 bits of successive std::mt19937_64 outputs seeded with `seed`, so the
/// coefficients are identical on every conforming platform.
Perturbation fourier_sine(std::uint64_t seed, int n_modes, double decay, double t1, double t2);

/// σ·h (σ multiplies any existing scale).
Perturbation scale(const Perturbation& h, double sigma);

/// h with its displacement pointed along `direction`.
Perturbation along(const Perturbation& h, Vector direction);

/// Y + h sampled on a piecewise-uniform grid whose pieces end at h's knots.
/// With no knots the base grid is reused unchanged; otherwise the base is
/// resampled by cubic Hermite interpolation at a spacing no coarser than the
/// base step.
Trajectory perturb_curve(const Trajectory& base, const Perturbation& h);

/// The base curve resampled so that every knot is a piece boundary; returns
/// the base unchanged when there are no interior knots.
Trajectory refine_at_knots(const Trajectory& base, const std::vector<double>& knots);

/// Grid used by perturb_curve and the variation integrals: break points at
/// the interval ends and all knots, spacing ≤ `max_step`, even counts and at
/// least `min_n` subintervals per piece.
struct PiecewiseGrid {
  std::vector<double> times;
  std::vector<std::size_t> breaks;
};
PiecewiseGrid piecewise_grid(double t1, double t2, const std::vector<double>& knots, double max_step,
                             std::size_t min_n = 128);

}  // namespace vnag
