#include "vnag/action.hpp"

#include "vnag/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vnag {

namespace {

// Spacing used when the variation integrands are sampled independently of
// any curve grid.
constexpr double kVariationStepFraction = 1.0 / 4000.0;

void require_dims(const LagrangianSpec& spec, Eigen::Index d) {
  if (d != spec.potential.dim()) throw std::invalid_argument("lagrangian: dimension mismatch with the potential");
}

void require_interval(const LagrangianSpec& spec, double t1, double t2) {
  spec.damping.require_time(t1);
  spec.damping.require_time(t2);
}

/// h must vanish at its own ends and live inside the integration window [a, b].
void require_admissible(const Perturbation& h, double a, double b) {
  constexpr double tol = 1e-12;
  if (h.value(h.t1()).norm() > tol || h.value(h.t2()).norm() > tol) {
    throw std::invalid_argument("perturbation does not vanish at the interval ends");
  }
  const double slack = tol * std::max({1.0, std::abs(a), std::abs(b)});
  if (h.t1() < a - slack || h.t2() > b + slack) {
    throw std::invalid_argument("perturbation interval extends beyond the integration interval");
  }
}

/// Simpson over each piece of a piecewise-uniform grid.
template <class F>
double integrate_on_grid(std::span<const double> times, std::span<const std::size_t> breaks, F&& integrand) {
  double total = 0.0;
  std::vector<double> samples;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const std::size_t lo = breaks[p], hi = breaks[p + 1];
    if ((hi - lo) % 2 != 0) {
      throw std::invalid_argument("action: Simpson quadrature needs an even number of intervals per piece");
    }
    samples.clear();
    for (std::size_t i = lo; i <= hi; ++i) samples.push_back(integrand(i));
    const double step = (times[hi] - times[lo]) / static_cast<double>(hi - lo);
    total += simpson_samples<double>(samples, step);
  }
  return total;
}

Trajectory align_to(const Trajectory& curve, const Perturbation& h) { return refine_at_knots(curve, h.knots()); }

}  // namespace

double lagrangian(const LagrangianSpec& spec, const VectorRef& y, const VectorRef& ydot, double t) {
  spec.damping.require_time(t);
  require_dims(spec, y.size());
  require_dims(spec, ydot.size());
  return spec.damping.weight(t) * (0.5 * ydot.squaredNorm() - eval(spec.potential, y));
}

LagrangianPartials partials(const LagrangianSpec& spec, const VectorRef& y, const VectorRef& ydot, double t) {
  spec.damping.require_time(t);
  require_dims(spec, y.size());
  const double w = spec.damping.weight(t);
  return {
      -w * grad(spec.potential, y),
      w * ydot,
      -w * hessian_diagonal(spec.potential, y),
      Vector::Zero(y.size()),
      w,
  };
}

double action(const LagrangianSpec& spec, const Trajectory& curve) {
  require_dims(spec, curve.dim());
  require_interval(spec, curve.t_begin(), curve.t_end());
  return integrate_on_grid(curve.times(), curve.breaks(), [&](std::size_t i) {
    return lagrangian(spec, curve.value(i), curve.deriv(i), curve.time(i));
  });
}

double first_variation(const LagrangianSpec& spec, const Trajectory& curve, const Perturbation& h) {
  require_dims(spec, curve.dim());
  require_admissible(h, curve.t_begin(), curve.t_end());
  if (h.dim() != curve.dim()) throw std::invalid_argument("first_variation: perturbation dimension mismatch");
  require_interval(spec, curve.t_begin(), curve.t_end());
  if (h.sigma() == 0.0) return 0.0;
  const Trajectory grid = align_to(curve, h);
  return integrate_on_grid(grid.times(), grid.breaks(), [&](std::size_t i) {
    const double t = grid.time(i);
    const LagrangianPartials d = partials(spec, grid.value(i), grid.deriv(i), t);
    return d.l_y.dot(h.value(t)) + d.l_ydot.dot(h.rate(t));
  });
}

double second_variation(const LagrangianSpec& spec, double t1, double t2, const Perturbation& h) {
  if (!spec.potential.has_constant_hessian()) {
    throw std::invalid_argument("second_variation: non-quadratic potential needs a base trajectory");
  }
  if (!(t1 < t2)) throw std::invalid_argument("second_variation: t1 must be < t2");
  require_interval(spec, t1, t2);
  require_admissible(h, t1, t2);
  if (h.dim() != spec.potential.dim()) throw std::invalid_argument("second_variation: perturbation dimension mismatch");
  if (h.sigma() == 0.0) return 0.0;
  const std::vector<double> breaks = merge_breaks(t1, t2, h.knots());
  const double step = (t2 - t1) * kVariationStepFraction;
  return 0.5 * simpson_piecewise(
                   [&](double t) {
                     const PQCoefficients pq = pq_coefficients(spec, t);
                     const double rate = h.profile_rate(t);
                     const double value = h.profile(t);
                     const Vector& dir = h.direction();
                     return pq.p * rate * rate * dir.squaredNorm() +
                            (pq.q.array() * dir.array().square()).sum() * value * value;
                   },
                   breaks, step);
}

double second_variation(const LagrangianSpec& spec, const Trajectory& base, const Perturbation& h) {
  require_dims(spec, base.dim());
  require_admissible(h, base.t_begin(), base.t_end());
  if (h.dim() != base.dim()) throw std::invalid_argument("second_variation: perturbation dimension mismatch");
  require_interval(spec, base.t_begin(), base.t_end());
  if (h.sigma() == 0.0) return 0.0;
  const Trajectory grid = align_to(base, h);
  return 0.5 * integrate_on_grid(grid.times(), grid.breaks(), [&](std::size_t i) {
           const double t = grid.time(i);
           const LagrangianPartials d = partials(spec, grid.value(i), grid.deriv(i), t);
           const Vector hv = h.value(t), hr = h.rate(t);
           return (d.l_yy.array() * hv.array().square()).sum() +
                  2.0 * (d.l_yydot.array() * hv.array() * hr.array()).sum() + d.l_ydotydot * hr.squaredNorm();
         });
}

PQCoefficients pq_coefficients(const LagrangianSpec& spec, double t) {
  spec.damping.require_time(t);
  if (!spec.potential.has_constant_hessian()) {
    throw std::invalid_argument("pq_coefficients: Q depends on the base curve for non-quadratic potentials");
  }
  const double w = spec.damping.weight(t);
  const Vector curvature = hessian_diagonal(spec.potential, spec.potential.minimizer());
  // L_YẎ ≡ 0, so Q = L_YY.
  return {w, -w * curvature};
}

}  // namespace vnag
