#pragma once

#include <Eigen/Dense>

#include <variant>

namespace vnag {

using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// f(x) = ½ Σ λᵢ (xᵢ − x*ᵢ)².  Rotated quadratics are expected to be
/// diagonalized by the caller.
struct QuadraticDiagonal {
  Vector eigenvalues;
  Vector xstar;
};

/// f(x) = a |x − x*|^p on the real line.
struct Polynomial1D {
  int degree = 2;
  double coefficient = 1.0;
  double xstar = 0.0;
};

/// f ≡ 0 in dimension `dim` (the free-particle limit of a quadratic).
struct ZeroPotential {
  int dim = 1;
};

/// Convex objective on which flows and actions are evaluated.  Immutable
/// once built; all factories validate their arguments.
class Potential {
 public:
  using Kind = std::variant<QuadraticDiagonal, Polynomial1D, ZeroPotential>;

  static Potential quadratic(Vector eigenvalues, Vector xstar);
  static Potential quadratic(Vector eigenvalues);
  static Potential polynomial(double coefficient, int degree, double xstar = 0.0);
  static Potential zero(int dim = 1);

  int dim() const;
  Vector minimizer() const;
  const Kind& kind() const { return kind_; }

  bool is_quadratic() const { return std::holds_alternative<QuadraticDiagonal>(kind_); }
  bool is_zero() const { return std::holds_alternative<ZeroPotential>(kind_); }
  bool is_polynomial() const { return std::holds_alternative<Polynomial1D>(kind_); }
  /// Quadratic or zero: the Hessian does not depend on the point.
  bool has_constant_hessian() const { return !is_polynomial(); }

 private:
  explicit Potential(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

struct CurvatureBounds {
  double mu;
  double beta;
};

double eval(const Potential& pot, const VectorRef& x);
Vector grad(const Potential& pot, const VectorRef& x);

/// Every supported potential is separable, so the Hessian is diagonal.
Vector hessian_diagonal(const Potential& pot, const VectorRef& x);

/// (min λᵢ, max λᵢ) of a quadratic.  Throws std::invalid_argument for the
/// polynomial kind, whose curvature is unbounded on ℝ.
CurvatureBounds curvature_bounds(const Potential& pot);

/// Curvature range of f'' over [lo, hi].  Quadratics ignore the interval.
CurvatureBounds curvature_bounds(const Potential& pot, double lo, double hi);

}  // namespace vnag
