#include "vnag/dynamics.hpp"

#include "vnag/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace vnag {

namespace {

void require_grid(double t1, double t2, std::size_t n_steps) {
  if (!(t1 < t2)) throw std::invalid_argument("integrate: t1 must be < t2");
  if (n_steps < 2) throw std::invalid_argument("integrate: n_steps must be >= 2");
}

void require_start(const Potential& pot, const VectorRef& x0, const VectorRef& v0) {
  if (x0.size() != pot.dim() || v0.size() != pot.dim()) {
    throw std::invalid_argument("integrate: initial state dimension does not match the potential");
  }
}

std::vector<double> uniform_times(double t1, double t2, std::size_t n) {
  std::vector<double> times(n + 1);
  const double h = (t2 - t1) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) times[i] = t1 + h * static_cast<double>(i);
  times[n] = t2;
  return times;
}

/// Drives RK4 over a uniform grid for a second-order system stored as [x; v].
template <class Rhs>
Trajectory integrate_phase(const Rhs& rhs, const VectorRef& x0, const VectorRef& v0, double t1, double t2,
                           std::size_t n) {
  const auto d = x0.size();
  std::vector<double> times = uniform_times(t1, t2, n);
  Matrix values(d, static_cast<Eigen::Index>(n + 1));
  Matrix derivs(d, static_cast<Eigen::Index>(n + 1));
  Vector y(2 * d);
  y << x0, v0;
  values.col(0) = x0;
  derivs.col(0) = v0;
  const double h = (t2 - t1) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    y = rk4_step(rhs, times[i], y, h);
    if (!y.allFinite()) {
      throw NumericalError("integrate: nonfinite state at t = " + format_double(times[i + 1]));
    }
    values.col(static_cast<Eigen::Index>(i + 1)) = y.head(d);
    derivs.col(static_cast<Eigen::Index>(i + 1)) = y.tail(d);
  }
  return Trajectory(std::move(times), std::move(values), std::move(derivs));
}

}  // namespace

// ---------------------------------------------------------------------------

DampingSchedule DampingSchedule::vanishing(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("vanishing damping: c must be positive");
  return DampingSchedule(VanishingDamping{c});
}

DampingSchedule DampingSchedule::constant(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("constant damping: alpha must be nonnegative");
  }
  return DampingSchedule(ConstantDamping{alpha});
}

double DampingSchedule::c() const {
  if (const auto* v = std::get_if<VanishingDamping>(&kind_)) return v->c;
  throw std::logic_error("damping: c() on constant damping");
}

double DampingSchedule::alpha() const {
  if (const auto* k = std::get_if<ConstantDamping>(&kind_)) return k->alpha;
  throw std::logic_error("damping: alpha() on vanishing damping");
}

void DampingSchedule::require_time(double t) const {
  if (is_vanishing() && !(t > 0.0)) {
    throw std::invalid_argument("vanishing damping is singular at t <= 0 (got t = " + format_double(t) + ")");
  }
}

double DampingSchedule::coefficient(double t) const {
  if (const auto* v = std::get_if<VanishingDamping>(&kind_)) return v->c / t;
  return std::get<ConstantDamping>(kind_).alpha;
}

double DampingSchedule::weight(double t) const {
  if (const auto* v = std::get_if<VanishingDamping>(&kind_)) return std::pow(t, v->c);
  return std::exp(std::get<ConstantDamping>(kind_).alpha * t);
}

DampingRegime regime(double alpha, double beta) {
  const double critical = 2.0 * std::sqrt(beta);
  if (std::abs(alpha - critical) <= 1e-12) return DampingRegime::Critical;
  return alpha < critical ? DampingRegime::Underdamped : DampingRegime::Overdamped;
}

// ---------------------------------------------------------------------------

Trajectory::Trajectory(std::vector<double> times, Matrix values, Matrix derivs, std::vector<std::size_t> breaks)
    : times_(std::move(times)), values_(std::move(values)), derivs_(std::move(derivs)), breaks_(std::move(breaks)) {
  if (times_.size() < 3) throw std::invalid_argument("trajectory: at least 3 samples (N >= 2) are required");
  const auto n = static_cast<Eigen::Index>(times_.size());
  if (values_.cols() != n || derivs_.cols() != n || values_.rows() != derivs_.rows()) {
    throw std::invalid_argument("trajectory: sample matrices do not match the grid");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("trajectory: grid must be strictly increasing");
  }
  if (breaks_.empty()) breaks_ = {0, times_.size() - 1};
  if (breaks_.front() != 0 || breaks_.back() != times_.size() - 1 ||
      !std::is_sorted(breaks_.begin(), breaks_.end())) {
    throw std::invalid_argument("trajectory: malformed piece breaks");
  }
}

bool Trajectory::uniform() const {
  if (breaks_.size() != 2) return false;
  const double t1 = t_begin(), t2 = t_end();
  const double h = (t2 - t1) / static_cast<double>(intervals());
  const double tol = 1e-12 * std::max({std::abs(t1), std::abs(t2), t2 - t1});
  for (std::size_t i = 1; i + 1 < times_.size(); ++i) {
    if (std::abs(times_[i] - (t1 + h * static_cast<double>(i))) > tol) return false;
  }
  return true;
}

double Trajectory::step() const {
  if (!uniform()) throw std::invalid_argument("trajectory: grid is not uniform");
  return (t_end() - t_begin()) / static_cast<double>(intervals());
}

PhasePoint Trajectory::at(double t) const {
  // rounding-level overshoot from t + h stage times is clamped
  const double slack = 1e-12 * std::max({1.0, std::abs(t_begin()), std::abs(t_end())});
  if (t < t_begin() - slack || t > t_end() + slack) {
    throw std::invalid_argument("trajectory: time outside the sampled interval");
  }
  t = std::clamp(t, t_begin(), t_end());
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t j = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  if (j >= intervals()) j = intervals() - 1;
  const auto i0 = static_cast<Eigen::Index>(j);
  const double h = times_[j + 1] - times_[j];
  const double s = (t - times_[j]) / h;
  if (s == 0.0) return {values_.col(i0), derivs_.col(i0)};
  if (s == 1.0) return {values_.col(i0 + 1), derivs_.col(i0 + 1)};
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1, d01 = (6 * s - 6 * s2) / h,
               d11 = 3 * s2 - 2 * s;
  const auto x0 = values_.col(i0), x1 = values_.col(i0 + 1);
  const auto v0 = derivs_.col(i0), v1 = derivs_.col(i0 + 1);
  return {h00 * x0 + (h10 * h) * v0 + h01 * x1 + (h11 * h) * v1, d00 * x0 + d10 * v0 + d01 * x1 + d11 * v1};
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  const int d = traj.dim();
  out << 't';
  for (int k = 0; k < d; ++k) out << ",x_" << k;
  for (int k = 0; k < d; ++k) out << ",v_" << k;
  out << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_double(traj.time(i));
    for (int k = 0; k < d; ++k) out << ',' << format_double(traj.value(i)[k]);
    for (int k = 0; k < d; ++k) out << ',' << format_double(traj.deriv(i)[k]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

Trajectory integrate_flow(const Potential& pot, const DampingSchedule& damping, const VectorRef& x0,
                          const VectorRef& v0, double t1, double t2, std::size_t n_steps) {
  require_grid(t1, t2, n_steps);
  require_start(pot, x0, v0);
  damping.require_time(t1);
  const auto d = x0.size();
  const auto rhs = [&](double t, const Vector& y) -> Vector {
    Vector dy(2 * d);
    dy.head(d) = y.tail(d);
    dy.tail(d) = -damping.coefficient(t) * y.tail(d) - grad(pot, y.head(d));
    return dy;
  };
  return integrate_phase(rhs, x0, v0, t1, t2, n_steps);
}

Trajectory integrate_gradient_flow(const Potential& pot, const VectorRef& x0, double t1, double t2,
                                   std::size_t n_steps) {
  require_grid(t1, t2, n_steps);
  if (x0.size() != pot.dim()) throw std::invalid_argument("integrate: x0 dimension does not match the potential");
  std::vector<double> times = uniform_times(t1, t2, n_steps);
  Matrix values(x0.size(), static_cast<Eigen::Index>(n_steps + 1));
  Matrix derivs(x0.size(), static_cast<Eigen::Index>(n_steps + 1));
  const auto rhs = [&](double, const Vector& x) -> Vector { return -grad(pot, x); };
  Vector x = x0;
  const double h = (t2 - t1) / static_cast<double>(n_steps);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    if (i > 0) x = rk4_step(rhs, times[i - 1], x, h);
    if (!x.allFinite()) throw NumericalError("integrate: nonfinite state at t = " + format_double(times[i]));
    values.col(static_cast<Eigen::Index>(i)) = x;
    derivs.col(static_cast<Eigen::Index>(i)) = -grad(pot, x);
  }
  return Trajectory(std::move(times), std::move(values), std::move(derivs));
}

PhasePoint damped_oscillator_exact(double alpha, double lambda, double x0, double v0, double t1, double t) {
  const double r = 0.5 * alpha;
  const double tau = t - t1;
  const double decay = std::exp(-r * tau);
  double x = 0.0, v = 0.0;
  switch (regime(alpha, lambda)) {
    case DampingRegime::Critical: {
      const double b = v0 + r * x0;
      x = decay * (x0 + b * tau);
      v = decay * (b - r * (x0 + b * tau));
      break;
    }
    case DampingRegime::Underdamped: {
      const double w = std::sqrt(lambda - r * r);
      const double b = (v0 + r * x0) / w;
      const double c = std::cos(w * tau), s = std::sin(w * tau);
      x = decay * (x0 * c + b * s);
      v = decay * (-r * (x0 * c + b * s) + w * (-x0 * s + b * c));
      break;
    }
    case DampingRegime::Overdamped: {
      const double s = std::sqrt(r * r - lambda);
      const double mp = -r + s, mm = -r - s;
      const double c1 = (v0 - mm * x0) / (2.0 * s);
      const double c2 = x0 - c1;
      x = c1 * std::exp(mp * tau) + c2 * std::exp(mm * tau);
      v = c1 * mp * std::exp(mp * tau) + c2 * mm * std::exp(mm * tau);
      break;
    }
  }
  return {Vector::Constant(1, x), Vector::Constant(1, v)};
}

double el_residual(const Trajectory& traj, const Potential& pot, const DampingSchedule& damping) {
  if (traj.intervals() < 4) throw std::invalid_argument("el_residual: at least 5 samples are required");
  if (traj.dim() != pot.dim()) throw std::invalid_argument("el_residual: dimension mismatch");
  if (!traj.uniform()) throw std::invalid_argument("el_residual: the grid must be uniform");
  const double h = traj.step();
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 <= traj.intervals(); ++i) {
    // fourth-order centered difference of the stored derivative
    const Vector accel =
        (traj.deriv(i - 2) - 8.0 * traj.deriv(i - 1) + 8.0 * traj.deriv(i + 1) - traj.deriv(i + 2)) / (12.0 * h);
    const double t = traj.time(i);
    damping.require_time(t);
    const Vector r = accel + damping.coefficient(t) * traj.deriv(i) + grad(pot, traj.value(i));
    worst = std::max(worst, r.norm());
  }
  return worst;
}

// ---------------------------------------------------------------------------

double ScheduleFunction::rate(double t) const {
  if (derivative) return derivative(t);
  constexpr double h = 1e-6;
  return (value(t + h) - value(t - h)) / (2.0 * h);
}

BregmanParams BregmanParams::polynomial(double p, double scale) {
  if (!(p > 0.0) || !(scale > 0.0)) throw std::invalid_argument("bregman schedule: p and scale must be positive");
  const double log_scale = std::log(scale);
  BregmanParams params;
  params.alpha = {[p](double t) { return std::log(p / t); }, [](double t) { return -1.0 / t; }};
  params.beta = {[p, log_scale](double t) { return p * std::log(t) + log_scale; }, [p](double t) { return p / t; }};
  params.gamma = {[p](double t) { return p * std::log(t); }, [p](double t) { return p / t; }};
  return params;
}

Trajectory integrate_bregman_flow(const BregmanParams& params, const Potential& pot, const VectorRef& x0,
                                  const VectorRef& v0, double t1, double t2, std::size_t n_steps) {
  if (params.psi != Geometry::Euclidean) {
    throw std::invalid_argument("integrate_bregman_flow: only the Euclidean geometry is supported");
  }
  require_grid(t1, t2, n_steps);
  require_start(pot, x0, v0);
  const auto d = x0.size();
  const auto rhs = [&](double t, const Vector& y) -> Vector {
    const double a = params.alpha(t);
    const double friction = std::exp(a) - params.alpha.rate(t);
    const double gain = std::exp(2.0 * a + params.beta(t));
    if (!std::isfinite(friction) || !std::isfinite(gain)) {
      throw NumericalError("integrate_bregman_flow: schedule not finite at t = " + format_double(t));
    }
    Vector dy(2 * d);
    dy.head(d) = y.tail(d);
    dy.tail(d) = -friction * y.tail(d) - gain * grad(pot, y.head(d));
    return dy;
  };
  return integrate_phase(rhs, x0, v0, t1, t2, n_steps);
}

IdealScalingReport check_ideal_scaling(const BregmanParams& params, std::span<const double> t_grid) {
  constexpr double tol = 1e-9;
  IdealScalingReport report{true, true, true, 0.0};
  for (double t : t_grid) {
    const double ea = std::exp(params.alpha(t));
    const double beta_rate = params.beta.rate(t);
    const double gamma_rate = params.gamma.rate(t);
    if (!std::isfinite(ea) || !std::isfinite(beta_rate) || !std::isfinite(gamma_rate)) {
      throw std::invalid_argument("check_ideal_scaling: schedule undefined at t = " + format_double(t));
    }
    const double beta_excess = std::max(beta_rate - ea, 0.0);
    const double gamma_gap = std::abs(gamma_rate - ea);
    report.max_violation = std::max({report.max_violation, beta_excess, gamma_gap});
    if (beta_excess > tol) report.beta_condition = false;
    if (gamma_gap > tol) report.gamma_condition = false;
  }
  report.holds = report.beta_condition && report.gamma_condition;
  return report;
}

}  // namespace vnag
