#pragma once

#include "vnag/errors.hpp"
#include "vnag/potentials.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace vnag {

using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Damping
// ---------------------------------------------------------------------------

/// Friction c/t; c = 3 is the continuous limit of Nesterov's method.
struct VanishingDamping {
  double c = 3.0;
};

/// Constant friction α ≥ 0; α = 0 gives the undamped flow with unit weight.
struct ConstantDamping {
  double alpha = 1.0;
};

enum class DampingRegime { Underdamped, Critical, Overdamped };

/// Selects both the friction term of the flow and the time weight of the
/// Lagrangian: t^c for vanishing damping, e^{αt} for constant damping.
class DampingSchedule {
 public:
  using Kind = std::variant<VanishingDamping, ConstantDamping>;

  static DampingSchedule vanishing(double c = 3.0);
  static DampingSchedule constant(double alpha);

  const Kind& kind() const { return kind_; }
  bool is_vanishing() const { return std::holds_alternative<VanishingDamping>(kind_); }
  double c() const;
  double alpha() const;

  /// d(t) in Ẍ + d(t)Ẋ + ∇f(X) = 0.
  double coefficient(double t) const;
  /// w(t) = t^c or e^{αt}; the Lagrangian is w(t)(½‖Ẏ‖² − f(Y)).
  double weight(double t) const;
  /// ẇ(t) / w(t), which equals d(t) for both families.
  double weight_log_rate(double t) const { return coefficient(t); }

  /// Throws std::invalid_argument if t is not in the schedule's domain.
  void require_time(double t) const;

 private:
  explicit DampingSchedule(Kind kind) : kind_(kind) {}
  Kind kind_;
};

/// Classifies constant damping α against curvature β; |α − 2√β| ≤ 1e-12 is critical.
DampingRegime regime(double alpha, double beta);

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

struct PhasePoint {
  Vector x;
  Vector v;
};

/// A sampled C¹ curve: values X(τᵢ) and derivatives Ẋ(τᵢ) stored column-wise.
///
/// The grid is piecewise uniform.  `breaks()` holds the sample indices that
/// delimit the pieces (always starting with 0 and ending with the last
/// index); flows produce a single uniform piece, perturbed curves get one
/// piece per smooth segment of the perturbation.
class Trajectory {
 public:
  Trajectory(std::vector<double> times, Matrix values, Matrix derivs, std::vector<std::size_t> breaks = {});

  std::size_t size() const { return times_.size(); }
  /// Number of grid intervals N.
  std::size_t intervals() const { return times_.size() - 1; }
  int dim() const { return static_cast<int>(values_.rows()); }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }

  std::span<const double> times() const { return times_; }
  double time(std::size_t i) const { return times_[i]; }
  const Matrix& values() const { return values_; }
  const Matrix& derivs() const { return derivs_; }
  auto value(std::size_t i) const { return values_.col(static_cast<Eigen::Index>(i)); }
  auto deriv(std::size_t i) const { return derivs_.col(static_cast<Eigen::Index>(i)); }
  std::span<const std::size_t> breaks() const { return breaks_; }

  /// True when the whole grid is one uniform piece (relative tolerance 1e-12).
  bool uniform() const;
  /// Spacing of a uniform grid; throws otherwise.
  double step() const;

  /// Cubic Hermite interpolation of (X, Ẋ) at t ∈ [t_begin, t_end], exact at
  /// grid nodes.  Times within 1e-12 relative of the ends are clamped.
  PhasePoint at(double t) const;

 private:
  std::vector<double> times_;
  Matrix values_;
  Matrix derivs_;
  std::vector<std::size_t> breaks_;
};

/// Writes `t,x_0..x_{d-1},v_0..v_{d-1}` with 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& out);

// ---------------------------------------------------------------------------
// Integrators
// ---------------------------------------------------------------------------

/// One classical fourth-order Runge-Kutta step of ẏ = rhs(t, y).
template <class State, class Rhs>
State rk4_step(const Rhs& rhs, double t, const State& y, double h) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = rhs(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Fixed-step RK4 on the phase-space system of Ẍ + d(t)Ẋ + ∇f(X) = 0.
Trajectory integrate_flow(const Potential& pot, const DampingSchedule& damping, const VectorRef& x0,
                          const VectorRef& v0, double t1, double t2, std::size_t n_steps);

/// Fixed-step RK4 on the gradient flow Ẋ = −∇f(X); derivs hold −∇f(X).
Trajectory integrate_gradient_flow(const Potential& pot, const VectorRef& x0, double t1, double t2,
                                   std::size_t n_steps);

/// Exact solution of ẍ + αẋ + λx = 0 with x(t1) = x0, ẋ(t1) = v0 (all regimes).
PhasePoint damped_oscillator_exact(double alpha, double lambda, double x0, double v0, double t1, double t);

/// max over interior nodes of ‖Ẍ + d(t)Ẋ + ∇f(X)‖ with Ẍ from fourth-order
/// centered differences of the stored derivatives.  Needs a uniform grid
/// with N ≥ 4.
double el_residual(const Trajectory& traj, const Potential& pot, const DampingSchedule& damping);

// ---------------------------------------------------------------------------
// Bregman dynamics
// ---------------------------------------------------------------------------

/// A scalar function of time with optional analytic derivative.  Without
/// one, the derivative is a centered difference with step 1e-6.
struct ScheduleFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  double operator()(double t) const { return value(t); }
  double rate(double t) const;
};

enum class Geometry { Euclidean, NonEuclidean };

/// Time schedules α(t), β(t), γ(t) of the Bregman Lagrangian.  Only the
/// Euclidean distance-generating function ψ = ½‖x‖² is integrable here.
struct BregmanParams {
  ScheduleFunction alpha;
  ScheduleFunction beta;
  ScheduleFunction gamma;
  Geometry psi = Geometry::Euclidean;

  /// α = log(p/t), β = p log t + log(scale), γ = p log t.
  /// p = 2, scale = 1/4 yields exactly Ẍ + (3/t)Ẋ + ∇f(X) = 0; p = 2,
  /// scale = 1 yields the same friction with the gradient scaled by 4.
  static BregmanParams polynomial(double p = 2.0, double scale = 0.25);
};

/// RK4 on Ẍ + (e^α − α̇)Ẋ + e^{2α+β}∇f(X) = 0.
Trajectory integrate_bregman_flow(const BregmanParams& params, const Potential& pot, const VectorRef& x0,
                                  const VectorRef& v0, double t1, double t2, std::size_t n_steps);

struct IdealScalingReport {
  bool holds;
  bool beta_condition;
  bool gamma_condition;
  /// Largest of max(β̇ − e^α, 0) and |γ̇ − e^α| over the grid.
  double max_violation;
};

/// Samples β̇ ≤ e^α and γ̇ = e^α on `t_grid` with tolerance 1e-9.
IdealScalingReport check_ideal_scaling(const BregmanParams& params, std::span<const double> t_grid);

}  // namespace vnag
