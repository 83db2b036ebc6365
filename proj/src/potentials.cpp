#include "vnag/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vnag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_dim(const Potential& pot, const VectorRef& x) {
  if (x.size() != pot.dim()) {
    throw std::invalid_argument("potential: dimension mismatch (expected " + std::to_string(pot.dim()) +
                                ", got " + std::to_string(x.size()) + ")");
  }
}

}  // namespace

Potential Potential::quadratic(Vector eigenvalues, Vector xstar) {
  if (eigenvalues.size() == 0) throw std::invalid_argument("quadratic potential: no eigenvalues");
  if (eigenvalues.size() != xstar.size()) {
    throw std::invalid_argument("quadratic potential: eigenvalues and xstar differ in size");
  }
  for (double l : eigenvalues) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("quadratic potential: eigenvalues must be positive and finite");
    }
  }
  if (!xstar.allFinite()) throw std::invalid_argument("quadratic potential: xstar must be finite");
  return Potential(QuadraticDiagonal{std::move(eigenvalues), std::move(xstar)});
}

Potential Potential::quadratic(Vector eigenvalues) {
  Vector xstar = Vector::Zero(eigenvalues.size());
  return quadratic(std::move(eigenvalues), std::move(xstar));
}

Potential Potential::polynomial(double coefficient, int degree, double xstar) {
  if (!(coefficient > 0.0) || !std::isfinite(coefficient)) {
    throw std::invalid_argument("polynomial potential: coefficient must be positive");
  }
  if (degree < 2) throw std::invalid_argument("polynomial potential: degree must be >= 2");
  if (!std::isfinite(xstar)) throw std::invalid_argument("polynomial potential: xstar must be finite");
  return Potential(Polynomial1D{degree, coefficient, xstar});
}

Potential Potential::zero(int dim) {
  if (dim < 1) throw std::invalid_argument("zero potential: dim must be >= 1");
  return Potential(ZeroPotential{dim});
}

int Potential::dim() const {
  return std::visit(overloaded{
                        [](const QuadraticDiagonal& q) { return static_cast<int>(q.eigenvalues.size()); },
                        [](const Polynomial1D&) { return 1; },
                        [](const ZeroPotential& z) { return z.dim; },
                    },
                    kind_);
}

Vector Potential::minimizer() const {
  return std::visit(overloaded{
                        [](const QuadraticDiagonal& q) -> Vector { return q.xstar; },
                        [](const Polynomial1D& p) -> Vector { return Vector::Constant(1, p.xstar); },
                        [](const ZeroPotential& z) -> Vector { return Vector::Zero(z.dim); },
                    },
                    kind_);
}

double eval(const Potential& pot, const VectorRef& x) {
  check_dim(pot, x);
  return std::visit(overloaded{
                        [&](const QuadraticDiagonal& q) {
                          return 0.5 * (q.eigenvalues.array() * (x - q.xstar).array().square()).sum();
                        },
                        [&](const Polynomial1D& p) {
                          return p.coefficient * std::pow(std::abs(x[0] - p.xstar), p.degree);
                        },
                        [](const ZeroPotential&) { return 0.0; },
                    },
                    pot.kind());
}

Vector grad(const Potential& pot, const VectorRef& x) {
  check_dim(pot, x);
  return std::visit(overloaded{
                        [&](const QuadraticDiagonal& q) -> Vector {
                          return q.eigenvalues.cwiseProduct(x - q.xstar);
                        },
                        [&](const Polynomial1D& p) -> Vector {
                          const double d = x[0] - p.xstar;
                          const double g = p.coefficient * p.degree * std::pow(std::abs(d), p.degree - 1);
                          return Vector::Constant(1, d < 0.0 ? -g : g);
                        },
                        [](const ZeroPotential& z) -> Vector { return Vector::Zero(z.dim); },
                    },
                    pot.kind());
}

Vector hessian_diagonal(const Potential& pot, const VectorRef& x) {
  check_dim(pot, x);
  return std::visit(overloaded{
                        [](const QuadraticDiagonal& q) -> Vector { return q.eigenvalues; },
                        [&](const Polynomial1D& p) -> Vector {
                          const double d = std::abs(x[0] - p.xstar);
                          return Vector::Constant(
                              1, p.coefficient * p.degree * (p.degree - 1) * std::pow(d, p.degree - 2));
                        },
                        [](const ZeroPotential& z) -> Vector { return Vector::Zero(z.dim); },
                    },
                    pot.kind());
}

CurvatureBounds curvature_bounds(const Potential& pot) {
  return std::visit(overloaded{
                        [](const QuadraticDiagonal& q) {
                          return CurvatureBounds{q.eigenvalues.minCoeff(), q.eigenvalues.maxCoeff()};
                        },
                        [](const Polynomial1D&) -> CurvatureBounds {
                          throw std::invalid_argument(
                              "curvature_bounds: polynomial potential needs an interval");
                        },
                        [](const ZeroPotential&) { return CurvatureBounds{0.0, 0.0}; },
                    },
                    pot.kind());
}

CurvatureBounds curvature_bounds(const Potential& pot, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("curvature_bounds: empty interval");
  const auto* p = std::get_if<Polynomial1D>(&pot.kind());
  if (p == nullptr) return curvature_bounds(pot);
  // f'' = a p (p-1) |x - x*|^(p-2) is monotone in |x - x*| on either side of x*.
  const auto second = [&](double x) {
    return hessian_diagonal(pot, Vector::Constant(1, x))[0];
  };
  const double at_lo = second(lo);
  const double at_hi = second(hi);
  const double mu = (lo <= p->xstar && p->xstar <= hi) ? second(p->xstar) : std::min(at_lo, at_hi);
  return {mu, std::max(at_lo, at_hi)};
}

}  // namespace vnag
