#include "vnag/jacobi.hpp"

#include "vnag/bessel.hpp"
#include "vnag/errors.hpp"
#include "vnag/format.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace vnag {

namespace {

using State = Eigen::Vector2d;

/// ḧ + friction(t)ḣ + curvature(t)h = 0.
struct JacobiSystem {
  std::function<double(double)> friction;
  std::function<double(double)> curvature;

  State operator()(double t, const State& y) const { return {y[1], -friction(t) * y[1] - curvature(t) * y[0]}; }
};

JacobiSystem quadratic_system(const DampingSchedule& damping, double lambda) {
  return {[damping](double t) { return damping.coefficient(t); }, [lambda](double) { return lambda; }};
}

struct ShotGrid {
  std::vector<double> times;
  std::vector<State> states;
};

ShotGrid shoot(const JacobiSystem& sys, double t1, double t2, std::size_t n, double slope) {
  ShotGrid g;
  g.times.resize(n + 1);
  g.states.resize(n + 1);
  const double h = (t2 - t1) / static_cast<double>(n);
  State y(0.0, slope);
  g.times[0] = t1;
  g.states[0] = y;
  for (std::size_t i = 0; i < n; ++i) {
    y = rk4_step(sys, g.times[i], y, h);
    if (!y.allFinite()) throw NumericalError("jacobi shooting: nonfinite state at step " + std::to_string(i + 1));
    g.times[i + 1] = i + 1 == n ? t2 : t1 + h * static_cast<double>(i + 1);
    g.states[i + 1] = y;
  }
  return g;
}

/// Bisection for a sign change of f on [a, b]; stops once the bracket is
/// below `tol` or can no longer be split.
template <class F>
double bisect(F&& f, double a, double b, double fa, double tol) {
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> zeros_of_shot(const JacobiSystem& sys, const ShotGrid& g) {
  const std::size_t n = g.times.size() - 1;
  double peak = 0.0;
  for (const State& s : g.states) peak = std::max(peak, std::abs(s[0]));

  // A sign-preserving dip to (numerically) zero would be a tangential root,
  // which linear second-order equations cannot have.
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double hm = g.states[i - 1][0], h0 = g.states[i][0], hp = g.states[i + 1][0];
    if (hm * h0 > 0.0 && h0 * hp > 0.0 && std::abs(h0) <= std::abs(hm) && std::abs(h0) <= std::abs(hp) &&
        std::abs(h0) < 1e-11 * peak) {
      throw NumericalError("jacobi shooting: tangential near-zero at t = " + format_double(g.times[i]));
    }
  }

  std::vector<double> roots;
  std::size_t last = 0;  // last node with nonzero h (node 0 is the pinned zero)
  for (std::size_t i = 1; i <= n; ++i) {
    const double hi = g.states[i][0];
    if (hi == 0.0) continue;
    if (last > 0 && (g.states[last][0] < 0.0) != (hi < 0.0)) {
      const std::size_t base = last;
      const auto eval = [&](double t) { return rk4_step(sys, g.times[base], g.states[base], t - g.times[base])[0]; };
      const double root = bisect(eval, g.times[last], g.times[i], g.states[last][0], 1e-13);
      if (root < g.times.back()) roots.push_back(root);
    }
    last = i;
  }
  return roots;
}

/// Roots of the Bessel cross product in (t1, t_end), scanning at a fraction
/// of the minimal zero spacing π/√β.
std::vector<double> cross_product_roots(double beta, double t1, double t_end, bool first_only) {
  const double step = std::numbers::pi / (20.0 * std::sqrt(beta));
  const double x1 = std::sqrt(beta) * t1;
  const BesselPair at1 = bessel_j1y1(x1);
  const auto g = [&](double t) {
    const BesselPair p = bessel_j1y1(std::sqrt(beta) * t);
    return p.y1 * at1.j1 - p.j1 * at1.y1;
  };
  std::vector<double> roots;
  // g'(t1) = √β · 2/(π x1) > 0, so g is positive just after t1.
  double prev_t = t1, prev_g = 1.0;
  for (std::size_t i = 1;; ++i) {
    const double t = std::min(t1 + step * static_cast<double>(i), t_end);
    const double gt = g(t);
    if (gt == 0.0 && t < t_end) {
      roots.push_back(t);
    } else if ((gt < 0.0) != (prev_g < 0.0)) {
      const double root = bisect(g, prev_t, t, prev_g, 4.0 * std::numeric_limits<double>::epsilon() * t);
      if (root < t_end) roots.push_back(root);
    }
    if (first_only && !roots.empty()) break;
    if (t >= t_end) break;
    prev_t = t;
    if (gt != 0.0) prev_g = gt;
  }
  return roots;
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("jacobi: eigenvalue must be positive");
}

}  // namespace

double bessel_cross_product(double beta, double t1, double t) {
  require_lambda(beta);
  const BesselPair a = bessel_j1y1(std::sqrt(beta) * t1);
  const BesselPair b = bessel_j1y1(std::sqrt(beta) * t);
  return b.y1 * a.j1 - b.j1 * a.y1;
}

double jacobi_closed_vanishing(double beta, double t1, double t) {
  require_lambda(beta);
  if (!(t1 > 0.0) || !(t > 0.0)) throw std::invalid_argument("jacobi_closed_vanishing: times must be positive");
  const BesselPair a = bessel_j1y1(std::sqrt(beta) * t1);
  if (std::abs(a.j1) <= 1e-12) {
    throw std::domain_error("jacobi_closed_vanishing: J1(sqrt(beta) t1) vanishes; use shooting");
  }
  if (t == t1) return 0.0;
  const BesselPair b = bessel_j1y1(std::sqrt(beta) * t);
  return b.y1 / t - a.y1 * b.j1 / (a.j1 * t);
}

double jacobi_closed_constant(double alpha, double beta, double t1, double t) {
  require_lambda(beta);
  if (!(alpha >= 0.0)) throw std::invalid_argument("jacobi_closed_constant: alpha must be nonnegative");
  switch (regime(alpha, beta)) {
    case DampingRegime::Critical:
      return std::exp(-std::sqrt(beta) * t) * (t - t1);
    case DampingRegime::Overdamped: {
      const double s = 0.5 * std::sqrt(alpha * alpha - 4.0 * beta);
      return std::exp(-0.5 * alpha * t) * (std::exp(s * t) - std::exp(s * (2.0 * t1 - t)));
    }
    case DampingRegime::Underdamped: {
      const double w = 0.5 * std::sqrt(4.0 * beta - alpha * alpha);
      return std::exp(-0.5 * alpha * t) * std::sin(w * (t - t1));
    }
  }
  return 0.0;
}

Trajectory jacobi_solution(const DampingSchedule& damping, double eigen_lambda, double t1, double t2,
                           std::size_t n_steps, double slope) {
  require_lambda(eigen_lambda);
  damping.require_time(t1);
  if (!(t1 < t2) || n_steps < 2) throw std::invalid_argument("jacobi_solution: bad interval or step count");
  const ShotGrid g = shoot(quadratic_system(damping, eigen_lambda), t1, t2, n_steps, slope);
  Matrix values(1, static_cast<Eigen::Index>(n_steps + 1));
  Matrix derivs(1, static_cast<Eigen::Index>(n_steps + 1));
  for (std::size_t i = 0; i <= n_steps; ++i) {
    values(0, static_cast<Eigen::Index>(i)) = g.states[i][0];
    derivs(0, static_cast<Eigen::Index>(i)) = g.states[i][1];
  }
  return Trajectory(g.times, std::move(values), std::move(derivs));
}

ConjugateReport conjugate_points_shooting(const LagrangianSpec& spec, double eigen_lambda, double t1, double t2,
                                          std::size_t n_steps) {
  require_lambda(eigen_lambda);
  spec.damping.require_time(t1);
  if (!(t1 < t2)) throw std::invalid_argument("conjugate_points_shooting: t1 must be < t2");
  if (n_steps < 1000) throw std::invalid_argument("conjugate_points_shooting: n_steps must be >= 1000");
  const JacobiSystem sys = quadratic_system(spec.damping, eigen_lambda);
  const ShotGrid g = shoot(sys, t1, t2, n_steps, 1.0);
  return {eigen_lambda, t1, t2, zeros_of_shot(sys, g), ConjugateMethod::Shooting};
}

ConjugateReport conjugate_points_shooting(const LagrangianSpec& spec, const Trajectory& base, double t1, double t2,
                                          std::size_t n_steps) {
  if (base.dim() != 1) throw std::invalid_argument("conjugate_points_shooting: base trajectory must be 1-D");
  if (t1 < base.t_begin() || t2 > base.t_end() || !(t1 < t2)) {
    throw std::invalid_argument("conjugate_points_shooting: [t1, t2] must lie inside the base interval");
  }
  spec.damping.require_time(t1);
  if (n_steps < 1000) throw std::invalid_argument("conjugate_points_shooting: n_steps must be >= 1000");
  const DampingSchedule damping = spec.damping;
  const Potential pot = spec.potential;
  const JacobiSystem sys{[damping](double t) { return damping.coefficient(t); },
                         [&base, pot](double t) { return hessian_diagonal(pot, base.at(t).x)[0]; }};
  const ShotGrid g = shoot(sys, t1, t2, n_steps, 1.0);
  return {std::nan(""), t1, t2, zeros_of_shot(sys, g), ConjugateMethod::Shooting};
}

ConjugateReport conjugate_points_closed(const LagrangianSpec& spec, double eigen_lambda, double t1, double t2) {
  require_lambda(eigen_lambda);
  spec.damping.require_time(t1);
  if (!(t1 < t2)) throw std::invalid_argument("conjugate_points_closed: t1 must be < t2");
  ConjugateReport report{eigen_lambda, t1, t2, {}, ConjugateMethod::ClosedForm};
  if (spec.damping.is_vanishing()) {
    if (spec.damping.c() != 3.0) {
      throw std::invalid_argument("conjugate_points_closed: closed form exists only for damping 3/t");
    }
    report.conjugate_times = cross_product_roots(eigen_lambda, t1, t2, false);
    return report;
  }
  const double alpha = spec.damping.alpha();
  if (regime(alpha, eigen_lambda) != DampingRegime::Underdamped) return report;
  const double period = 2.0 * std::numbers::pi / std::sqrt(4.0 * eigen_lambda - alpha * alpha);
  for (int k = 1;; ++k) {
    const double t = t1 + k * period;
    if (!(t < t2)) break;
    report.conjugate_times.push_back(t);
  }
  return report;
}

std::optional<double> first_conjugate_time(const DampingSchedule& damping, double eigen_lambda, double t1) {
  require_lambda(eigen_lambda);
  damping.require_time(t1);
  if (!damping.is_vanishing()) {
    const double alpha = damping.alpha();
    if (regime(alpha, eigen_lambda) != DampingRegime::Underdamped) return std::nullopt;
    return t1 + 2.0 * std::numbers::pi / std::sqrt(4.0 * eigen_lambda - alpha * alpha);
  }
  const double cap = t1 + 50.0 / std::sqrt(eigen_lambda);
  if (damping.c() == 3.0) {
    const std::vector<double> roots = cross_product_roots(eigen_lambda, t1, cap, true);
    if (roots.empty()) return std::nullopt;
    return roots.front();
  }
  const JacobiSystem sys = quadratic_system(damping, eigen_lambda);
  const auto n = static_cast<std::size_t>(std::ceil(2000.0 * (cap - t1) * std::sqrt(eigen_lambda)));
  const std::vector<double> roots = zeros_of_shot(sys, shoot(sys, t1, cap, std::max<std::size_t>(n, 1000), 1.0));
  if (roots.empty()) return std::nullopt;
  return roots.front();
}

std::optional<double> first_conjugate_time(const LagrangianSpec& spec, double eigen_lambda, double t1) {
  return first_conjugate_time(spec.damping, eigen_lambda, t1);
}

Classification classify(const Potential& pot, const DampingSchedule& damping, double t1, double t2) {
  const auto* quad = std::get_if<QuadraticDiagonal>(&pot.kind());
  if (quad == nullptr) throw std::invalid_argument("classify: only quadratic potentials are supported");
  if (!(t1 < t2)) throw std::invalid_argument("classify: t1 must be < t2");
  damping.require_time(t1);

  Classification out{Verdict::Minimizer, t1, t2, true, {}, std::nullopt, std::nullopt};
  for (double lambda : quad->eigenvalues) {
    const std::optional<double> first = first_conjugate_time(damping, lambda, t1);
    out.directions.push_back({lambda, first});
    if (first && (!out.earliest_conjugate_time || *first < *out.earliest_conjugate_time)) {
      out.earliest_conjugate_time = first;
      out.binding_eigenvalue = lambda;
    }
  }
  if (out.earliest_conjugate_time) {
    const double tc = *out.earliest_conjugate_time;
    if (std::abs(tc - t2) <= 1e-9) {
      out.verdict = Verdict::AtBoundary;
    } else if (tc < t2) {
      out.verdict = Verdict::Saddle;
    }
  }
  return out;
}

double epsilon_star(double u, double beta) {
  if (!(u >= 0.0)) throw std::invalid_argument("epsilon_star: u must be >= 0");
  if (!(beta > 0.0)) throw std::invalid_argument("epsilon_star: beta must be positive");
  const double root = std::sqrt(25.0 * u * u - 60.0 * u + 225.0);
  // For u > 3 the numerator 15 − 5u + root cancels; use the conjugate form.
  const double eps2 = u <= 3.0 ? (15.0 - 5.0 * u + root) / (3.0 * beta) : 30.0 * u / (beta * (root + 5.0 * u - 15.0));
  return std::sqrt(eps2);
}

double triangle_d2j_closed(double beta, double c, double eps, double sigma) {
  if (!(beta > 0.0) || !(c > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("triangle_d2j_closed: beta, c and eps must be positive");
  }
  const double e2 = eps * eps;
  return -sigma * sigma * ((0.3 * beta * e2 * e2 + (beta * c * c - 3.0) * e2 - 3.0 * c * c) * c) / (3.0 * eps);
}

double sinusoid_d2j_closed(double t1, double t2, int k, double sigma) {
  if (!(t1 < t2)) throw std::invalid_argument("sinusoid_d2j_closed: t1 must be < t2");
  if (k < 1) throw std::invalid_argument("sinusoid_d2j_closed: k must be >= 1");
  const double len = t2 - t1;
  const double kp2 = k * k * std::numbers::pi * std::numbers::pi;
  return 0.5 * sigma * sigma * std::exp(t1) * kp2 * std::expm1(len) * (2.0 * kp2 - len * len) /
         (len * len * (4.0 * kp2 + len * len));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Minimizer: return "Minimizer";
    case Verdict::Saddle: return "Saddle";
    case Verdict::AtBoundary: return "AtBoundary";
  }
  return "?";
}

const char* to_string(ConjugateMethod m) { return m == ConjugateMethod::ClosedForm ? "ClosedForm" : "Shooting"; }

}  // namespace vnag
