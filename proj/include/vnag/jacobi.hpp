#pragma once

#include "vnag/action.hpp"

#include <optional>
#include <vector>

namespace vnag {

// ---------------------------------------------------------------------------
// Jacobi's equation  d/dt(P ḣ) − Q h = 0.
//
// For L = w(t)(½‖Ẏ‖² − f(Y)) and curvature λ along one eigendirection this
// reads ḧ + d(t)ḣ + λh = 0, i.e. the flow's own linearisation.  A point
// t > t1 is conjugate to t1 when the solution with h(t1) = 0, ḣ(t1) ≠ 0
// vanishes again at t.
// ---------------------------------------------------------------------------

enum class ConjugateMethod { ClosedForm, Shooting };

struct ConjugateReport {
  double eigen_lambda;
  double t1;
  double t2;
  /// Ascending, strictly inside (t1, t2).
  std::vector<double> conjugate_times;
  ConjugateMethod method;
};

enum class Verdict { Minimizer, Saddle, AtBoundary };

struct DirectionConjugacy {
  double eigen_lambda;
  std::optional<double> first_conjugate_time;
};

struct Classification {
  Verdict verdict;
  double t1;
  double t2;
  /// P = w(t) > 0 on the whole interval for both Lagrangian families.
  bool legendre_holds;
  std::vector<DirectionConjugacy> directions;
  /// Eigenvalue with the earliest conjugate time, if any direction has one.
  std::optional<double> binding_eigenvalue;
  std::optional<double> earliest_conjugate_time;
};

/// Vanishing damping c = 3, curvature β:
/// h(t) = Y₁(√β t)/t − Y₁(√β t1) J₁(√β t) / (J₁(√β t1) t).
/// Throws std::domain_error when |J₁(√β t1)| ≤ 1e-12 (use shooting).
double jacobi_closed_vanishing(double beta, double t1, double t);

/// Constant damping α, curvature β, solution vanishing at t1:
///   critical     e^{−√β t}(t − t1)
///   overdamped   e^{−αt/2}(e^{s t} − e^{s(2t1 − t)}),  s = ½√(α² − 4β)
///   underdamped  e^{−αt/2} sin(ω(t − t1)),           ω = ½√(4β − α²)
/// The underdamped form is a nonzero multiple of the tan-based
/// representation and has the same zeros without its singularity.
double jacobi_closed_constant(double alpha, double beta, double t1, double t);

/// Y₁(√β t) J₁(√β t1) − J₁(√β t) Y₁(√β t1); its zeros for t > t1 are the
/// conjugate points of the vanishing-damping problem.
double bessel_cross_product(double beta, double t1, double t);

/// Samples of the Jacobi solution with h(t1) = 0, ḣ(t1) = `slope` on a
/// uniform RK4 grid (quadratic potentials, eigenvalue λ).
Trajectory jacobi_solution(const DampingSchedule& damping, double eigen_lambda, double t1, double t2,
                           std::size_t n_steps, double slope = 1.0);

/// RK4 shooting from h(t1) = 0, ḣ(t1) = 1; sign changes on the grid are
/// refined by bisection to 1e-12 in t.  Requires n_steps ≥ 1000.
ConjugateReport conjugate_points_shooting(const LagrangianSpec& spec, double eigen_lambda, double t1, double t2,
                                          std::size_t n_steps);

/// Shooting along a base trajectory for potentials whose Hessian varies:
/// ḧ + d(t)ḣ + f''(Y(t))h = 0 on [t1, t2] ⊆ the base interval (1-D only).
ConjugateReport conjugate_points_shooting(const LagrangianSpec& spec, const Trajectory& base, double t1, double t2,
                                          std::size_t n_steps);

/// Conjugate times from the closed forms: Bessel cross-product roots for
/// vanishing damping (c = 3), t1 + kπ/ω for underdamped constant damping.
ConjugateReport conjugate_points_closed(const LagrangianSpec& spec, double eigen_lambda, double t1, double t2);

/// First conjugate time after t1, or none.  Constant damping is analytic;
/// vanishing damping scans the Bessel condition (c = 3) or shoots (c ≠ 3)
/// up to t1 + 50/√λ.
std::optional<double> first_conjugate_time(const DampingSchedule& damping, double eigen_lambda, double t1);
std::optional<double> first_conjugate_time(const LagrangianSpec& spec, double eigen_lambda, double t1);

/// Minimizer / saddle verdict for the flow's path on [t1, t2]: the AND of
/// the per-eigendirection conjugacy conditions.  Quadratic potentials only.
Classification classify(const Potential& pot, const DampingSchedule& damping, double t1, double t2);

/// ε* = √((15 − 5u + √(25u² − 60u + 225)) / (3β)), u = βc²: the half-width
/// at which the triangle second variation changes sign.
double epsilon_star(double u, double beta);

/// −σ²(3βε⁴/10 + (βc² − 3)ε² − 3c²)c / (3ε): second variation of the unit
/// triangle bump under vanishing damping c = 3 with curvature β.
double triangle_d2j_closed(double beta, double c, double eps, double sigma = 1.0);

/// Second variation of σ sin(kπ(t − t1)/(t2 − t1)) for constant damping
/// α = 1 and curvature β = 1:
/// ½σ² e^{t1} k²π²(e^L − 1)(2k²π² − L²) / (L²(4k²π² + L²)), L = t2 − t1.
double sinusoid_d2j_closed(double t1, double t2, int k, double sigma = 1.0);

const char* to_string(Verdict v);
const char* to_string(ConjugateMethod m);

}  // namespace vnag
