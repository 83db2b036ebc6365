#include "vnag/perturbations.hpp"

#include "vnag/format.hpp"
#include "vnag/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace vnag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// sin(πu) and cos(πu) with exact zeros at integer u.
double sin_pi(double u) {
  const double n = std::nearbyint(u);
  const double s = std::sin(std::numbers::pi * (u - n));
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

double cos_pi(double u) {
  const double n = std::nearbyint(u);
  const double c = std::cos(std::numbers::pi * (u - n));
  return std::fmod(n, 2.0) == 0.0 ? c : -c;
}

// Corner blend over a window of half-width δ: the slope moves from sl to sr
// as m + (J/2) p(u), u ∈ [−1, 1], with p odd, p(±1) = ±1 and ∫p² = 2.  The
// last condition keeps ∫ḣ² over the window equal to that of the sharp corner,
// so quadratic functionals of the blended bump differ from the piecewise
// linear one only at O(δ²).
constexpr double kBlendLinear = 2.68693177121688;  // (√756 − 6) / 8
constexpr double kBlendCubic = 1.0 - kBlendLinear;

double blend_shape(double u) { return kBlendLinear * u + kBlendCubic * u * u * u; }

double blend_shape_integral(double u) {
  return 0.5 * kBlendLinear * u * u + 0.25 * kBlendCubic * u * u * u * u;
}

struct Corner {
  double at;
  double slope_left;
  double slope_right;
};

struct TriangleGeometry {
  Corner corners[3];
  double c, eps, delta;

  explicit TriangleGeometry(const TriangleBump& tri)
      : corners{{tri.c - tri.eps, 0.0, 1.0 / tri.eps},
                {tri.c, 1.0 / tri.eps, -1.0 / tri.eps},
                {tri.c + tri.eps, -1.0 / tri.eps, 0.0}},
        c(tri.c),
        eps(tri.eps),
        delta(tri.delta) {}

  double sharp(double t) const { return std::max(0.0, 1.0 - std::abs(t - c) / eps); }

  double sharp_rate(double t) const {
    if (t <= c - eps || t >= c + eps) return 0.0;
    return t < c ? 1.0 / eps : -1.0 / eps;
  }

  double value(double t) const {
    for (const Corner& k : corners) {
      const double u = (t - k.at) / delta;
      if (std::abs(u) < 1.0) {
        const double mean = 0.5 * (k.slope_left + k.slope_right);
        const double half_jump = 0.5 * (k.slope_right - k.slope_left);
        return sharp(k.at - delta) +
               delta * (mean * (u + 1.0) + half_jump * (blend_shape_integral(u) - blend_shape_integral(1.0)));
      }
    }
    return sharp(t);
  }

  double rate(double t) const {
    for (const Corner& k : corners) {
      const double u = (t - k.at) / delta;
      if (std::abs(u) < 1.0) {
        return 0.5 * (k.slope_left + k.slope_right) + 0.5 * (k.slope_right - k.slope_left) * blend_shape(u);
      }
    }
    return sharp_rate(t);
  }
};

}  // namespace

Perturbation::Perturbation(Kind kind, double t1, double t2, double sigma, Vector direction)
    : kind_(std::move(kind)), t1_(t1), t2_(t2), sigma_(sigma), direction_(std::move(direction)) {
  if (!(t1_ < t2_)) throw std::invalid_argument("perturbation: t1 must be < t2");
  if (!(sigma_ >= 0.0) || !std::isfinite(sigma_)) throw std::invalid_argument("perturbation: sigma must be >= 0");
  if (direction_.size() == 0 || !direction_.allFinite()) {
    throw std::invalid_argument("perturbation: direction must be a finite nonempty vector");
  }
}

double Perturbation::profile(double t) const {
  if (t <= t1_ || t >= t2_ || sigma_ == 0.0) return 0.0;
  const double len = t2_ - t1_;
  const double shape = std::visit(overloaded{
                                      [&](const TriangleBump& tri) { return TriangleGeometry(tri).value(t); },
                                      [&](const SinusoidMode& s) { return sin_pi(s.k * (t - t1_) / len); },
                                      [&](const FourierSine& f) {
                                        const double u = (t - t1_) / len;
                                        double sum = 0.0;
                                        for (int k = 1; k <= f.n_modes; ++k) {
                                          sum += f.coefficients[k - 1] * sin_pi(k * u);
                                        }
                                        return sum;
                                      },
                                  },
                                  kind_);
  return sigma_ * shape;
}

double Perturbation::profile_rate(double t) const {
  if (t < t1_ || t > t2_ || sigma_ == 0.0) return 0.0;
  const double len = t2_ - t1_;
  const double shape = std::visit(overloaded{
                                      [&](const TriangleBump& tri) { return TriangleGeometry(tri).rate(t); },
                                      [&](const SinusoidMode& s) {
                                        return s.k * std::numbers::pi / len * cos_pi(s.k * (t - t1_) / len);
                                      },
                                      [&](const FourierSine& f) {
                                        const double u = (t - t1_) / len;
                                        double sum = 0.0;
                                        for (int k = 1; k <= f.n_modes; ++k) {
                                          sum += f.coefficients[k - 1] * k * cos_pi(k * u);
                                        }
                                        return sum * std::numbers::pi / len;
                                      },
                                  },
                                  kind_);
  return sigma_ * shape;
}

std::vector<double> Perturbation::knots() const {
  if (sigma_ == 0.0) return {};
  if (const auto* tri = std::get_if<TriangleBump>(&kind_)) {
    std::vector<double> out;
    for (double at : {tri->c - tri->eps, tri->c, tri->c + tri->eps}) {
      out.push_back(at - tri->delta);
      out.push_back(at + tri->delta);
    }
    return out;
  }
  return {};
}

double Perturbation::sup_norm(std::size_t samples) const {
  if (samples < 2) throw std::invalid_argument("sup_norm: need at least 2 samples");
  double max_h = 0.0, max_rate = 0.0;
  const double len = t2_ - t1_;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t1_ + len * static_cast<double>(i) / static_cast<double>(samples - 1);
    max_h = std::max(max_h, std::abs(profile(t)));
    max_rate = std::max(max_rate, std::abs(profile_rate(t)));
  }
  return direction_.norm() * (max_h + max_rate);
}

// ---------------------------------------------------------------------------

Perturbation triangle(double c, double eps, double delta, double t1, double t2) {
  if (!(eps > 0.0)) throw std::invalid_argument("triangle: eps must be positive");
  if (!(delta > 0.0) || delta > eps / 100.0) throw std::invalid_argument("triangle: delta must be in (0, eps/100]");
  if (!(c - eps - delta >= t1) || !(c + eps + delta <= t2)) {
    throw std::invalid_argument("triangle: support (c - eps, c + eps) plus blend exceeds [t1, t2]");
  }
  return Perturbation(TriangleBump{c, eps, delta}, t1, t2);
}

Perturbation triangle(double c, double eps, double t1, double t2) { return triangle(c, eps, eps / 1000.0, t1, t2); }

Perturbation sinusoid(int k, double t1, double t2) {
  if (k < 1) throw std::invalid_argument("sinusoid: k must be >= 1");
  return Perturbation(SinusoidMode{k}, t1, t2);
}

Perturbation fourier_sine(std::uint64_t seed, int n_modes, double decay, double t1, double t2) {
  if (n_modes < 1) throw std::invalid_argument("fourier_sine: n_modes must be >= 1");
  if (!(decay > 0.0)) throw std::invalid_argument("fourier_sine: decay must be positive");
  std::mt19937_64 gen(seed);
  Vector coeffs(n_modes);
  for (int k = 1; k <= n_modes; ++k) {
    const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
    coeffs[k - 1] = (2.0 * unit - 1.0) * std::pow(static_cast<double>(k), -decay);
  }
  return Perturbation(FourierSine{seed, n_modes, decay, std::move(coeffs)}, t1, t2);
}

Perturbation scale(const Perturbation& h, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("scale: sigma must be >= 0");
  return Perturbation(h.kind(), h.t1(), h.t2(), h.sigma() * sigma, h.direction());
}

Perturbation along(const Perturbation& h, Vector direction) {
  return Perturbation(h.kind(), h.t1(), h.t2(), h.sigma(), std::move(direction));
}

PiecewiseGrid piecewise_grid(double t1, double t2, const std::vector<double>& knots, double max_step,
                             std::size_t min_n) {
  const std::vector<double> edges = merge_breaks(t1, t2, knots);
  PiecewiseGrid grid;
  grid.times.push_back(t1);
  grid.breaks.push_back(0);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    const std::size_t n = simpson_count(b - a, max_step, min_n);
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t i = 1; i < n; ++i) grid.times.push_back(a + h * static_cast<double>(i));
    grid.times.push_back(b);
    grid.breaks.push_back(grid.times.size() - 1);
  }
  return grid;
}

Trajectory refine_at_knots(const Trajectory& base, const std::vector<double>& knots) {
  const bool interior = std::any_of(knots.begin(), knots.end(),
                                    [&](double k) { return k > base.t_begin() && k < base.t_end(); });
  if (!interior) return base;
  double base_step = base.t_end() - base.t_begin();
  for (std::size_t i = 0; i < base.intervals(); ++i) base_step = std::min(base_step, base.time(i + 1) - base.time(i));
  PiecewiseGrid grid = piecewise_grid(base.t_begin(), base.t_end(), knots, base_step);
  const auto n = static_cast<Eigen::Index>(grid.times.size());
  Matrix values(base.dim(), n);
  Matrix derivs(base.dim(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const PhasePoint p = base.at(grid.times[static_cast<std::size_t>(i)]);
    values.col(i) = p.x;
    derivs.col(i) = p.v;
  }
  return Trajectory(std::move(grid.times), std::move(values), std::move(derivs), std::move(grid.breaks));
}

Trajectory perturb_curve(const Trajectory& base, const Perturbation& h) {
  if (std::abs(base.t_begin() - h.t1()) > 1e-12 * std::max(1.0, std::abs(h.t1())) ||
      std::abs(base.t_end() - h.t2()) > 1e-12 * std::max(1.0, std::abs(h.t2()))) {
    throw std::invalid_argument("perturb_curve: perturbation interval differs from the curve interval");
  }
  if (base.dim() != h.dim()) throw std::invalid_argument("perturb_curve: dimension mismatch");
  const Trajectory grid = refine_at_knots(base, h.knots());
  Matrix values = grid.values();
  Matrix derivs = grid.derivs();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    values.col(col) += h.value(grid.time(i));
    derivs.col(col) += h.rate(grid.time(i));
  }
  return Trajectory(std::vector<double>(grid.times().begin(), grid.times().end()), std::move(values),
                    std::move(derivs), std::vector<std::size_t>(grid.breaks().begin(), grid.breaks().end()));
}

}  // namespace vnag
