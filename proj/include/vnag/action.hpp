#pragma once

#include "vnag/dynamics.hpp"
#include "vnag/perturbations.hpp"

namespace vnag {

/// L(Y, Ẏ, t) = w(t)(½‖Ẏ‖² − f(Y)) with w(t) = t^c (vanishing damping) or
/// e^{αt} (constant damping).  Its Euler-Lagrange equation is the flow
/// integrated by integrate_flow with the same schedule.
struct LagrangianSpec {
  DampingSchedule damping;
  Potential potential;
};

/// P = L_ẎẎ (a scalar multiple of the identity) and Qᵢ = L_YᵢYᵢ − d/dt L_YᵢẎᵢ,
/// one entry per eigendirection.
struct PQCoefficients {
  double p;
  Vector q;
};

/// First and second partial derivatives of L at a point.  All Hessian
/// blocks are diagonal for the supported potentials.
struct LagrangianPartials {
  Vector l_y;
  Vector l_ydot;
  Vector l_yy;
  Vector l_yydot;
  double l_ydotydot;
};

double lagrangian(const LagrangianSpec& spec, const VectorRef& y, const VectorRef& ydot, double t);

LagrangianPartials partials(const LagrangianSpec& spec, const VectorRef& y, const VectorRef& ydot, double t);

/// J[Y] by composite Simpson over each uniform piece of the curve.  Every
/// piece must have an even number of intervals.
double action(const LagrangianSpec& spec, const Trajectory& curve);

/// δJ[Y; h] = ∫(L_Y·h + L_Ẏ·ḣ) dt, integrated on the curve grid refined at
/// the knots of h.
double first_variation(const LagrangianSpec& spec, const Trajectory& curve, const Perturbation& h);

/// δ²J[h] = ½∫(Pḣ² + Σ Qᵢhᵢ²) dt for potentials with constant Hessian.  The
/// value does not depend on the base curve, hence the interval-only
/// signature.  Throws std::invalid_argument for the polynomial potential.
double second_variation(const LagrangianSpec& spec, double t1, double t2, const Perturbation& h);

/// δ²J[Y; h] = ½∫(L_YY h² + 2 L_YẎ hḣ + L_ẎẎ ḣ²) dt along a base curve.
/// Works for every potential; for quadratics it agrees with the
/// interval-only overload.
double second_variation(const LagrangianSpec& spec, const Trajectory& base, const Perturbation& h);

PQCoefficients pq_coefficients(const LagrangianSpec& spec, double t);

}  // namespace vnag
