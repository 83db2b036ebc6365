#include "vnag/action.hpp"
#include "vnag/jacobi.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace vnag;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

/// Samples a 1-D curve y(t) with derivative dy(t) on a uniform grid.
template <class Y, class DY>
Trajectory sampled(Y y, DY dy, double t1, double t2, std::size_t n) {
  std::vector<double> times(n + 1);
  Matrix values(1, static_cast<Eigen::Index>(n + 1)), derivs(1, static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = i == n ? t2 : t1 + (t2 - t1) * static_cast<double>(i) / static_cast<double>(n);
    times[i] = t;
    values(0, static_cast<Eigen::Index>(i)) = y(t);
    derivs(0, static_cast<Eigen::Index>(i)) = dy(t);
  }
  return Trajectory(std::move(times), std::move(values), std::move(derivs));
}

Trajectory constant_curve(double c, double t1, double t2, std::size_t n) {
  return sampled([c](double) { return c; }, [](double) { return 0.0; }, t1, t2, n);
}

std::vector<double> breaks_of(const Perturbation& h) {
  std::vector<double> b{h.t1()};
  for (double k : h.knots()) b.push_back(k);
  b.push_back(h.t2());
  return b;
}

/// ½∫ w (ḣ² − λh²) by Gauss-Legendre in long double.
double d2j_oracle(const DampingSchedule& damping, double lambda, const Perturbation& h) {
  return 0.5 * oracle::integrate(
                   [&](double t) {
                     const double r = h.profile_rate(t), v = h.profile(t);
                     return damping.weight(t) * (r * r - lambda * v * v);
                   },
                   breaks_of(h));
}

}  // namespace

TEST_CASE("lagrangian examples") {
  const LagrangianSpec van{DampingSchedule::vanishing(3.0), Potential::quadratic(scalar(1.0))};
  CHECK(lagrangian(van, scalar(0.0), scalar(1.0), 2.0) == doctest::Approx(4.0).epsilon(1e-15));
  const LagrangianSpec con{DampingSchedule::constant(1.0), Potential::quadratic(scalar(1.0))};
  CHECK(lagrangian(con, scalar(1.0), scalar(0.0), 0.0) == doctest::Approx(-0.5).epsilon(1e-15));
  const LagrangianSpec shifted{DampingSchedule::constant(0.7), Potential::quadratic(scalar(2.0), scalar(1.5))};
  CHECK(lagrangian(shifted, scalar(1.5), scalar(0.0), 3.0) == 0.0);
  CHECK_THROWS_AS(lagrangian(van, scalar(0.0), scalar(1.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lagrangian(van, scalar(0.0), scalar(1.0), -1.0), std::invalid_argument);
}

TEST_CASE("action examples") {
  const LagrangianSpec shifted{DampingSchedule::vanishing(3.0), Potential::quadratic(scalar(2.0), scalar(0.4))};
  CHECK(action(shifted, constant_curve(0.4, 1.0, 5.0, 100)) == 0.0);

  const LagrangianSpec free{DampingSchedule::vanishing(3.0), Potential::zero(1)};
  const Trajectory line = sampled([](double t) { return t; }, [](double) { return 1.0; }, 1.0, 2.0, 200);
  CHECK(action(free, line) == doctest::Approx(1.875).epsilon(1e-12));

  const LagrangianSpec undamped{DampingSchedule::constant(0.0), Potential::quadratic(scalar(1.0))};
  const Trajectory wave = sampled([](double t) { return std::sin(t); }, [](double t) { return std::cos(t); }, 0.0,
                                  std::numbers::pi, 400);
  CHECK(std::abs(action(undamped, wave)) <= 1e-10);

  CHECK_THROWS_AS(action(free, sampled([](double t) { return t; }, [](double) { return 1.0; }, 1.0, 2.0, 201)),
                  std::invalid_argument);
  CHECK_THROWS_AS(action(free, sampled([](double t) { return t; }, [](double) { return 1.0; }, 0.0, 2.0, 200)),
                  std::invalid_argument);
}

TEST_CASE("action quadrature is fourth order") {
  const LagrangianSpec free{DampingSchedule::vanishing(3.0), Potential::zero(1)};
  // ∫₁² t³·½·(2t)² dt = 21
  std::vector<double> errors;
  for (std::size_t n : {8, 16, 32, 64}) {
    const Trajectory y = sampled([](double t) { return t * t; }, [](double t) { return 2.0 * t; }, 1.0, 2.0, n);
    errors.push_back(std::abs(action(free, y) - 21.0));
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
  }
}

TEST_CASE("first variation vanishes along the flow") {
  for (const DampingSchedule& damping : {DampingSchedule::vanishing(3.0), DampingSchedule::constant(1.0)}) {
    const Potential pot = Potential::quadratic(scalar(1.0));
    const LagrangianSpec spec{damping, pot};
    const Trajectory flow = integrate_flow(pot, damping, scalar(1.0), scalar(0.0), 1.0, 10.0, 4000);
    for (const Perturbation& h : {triangle(4.0, 2.0, 1.0, 10.0), sinusoid(3, 1.0, 10.0),
                                  scale(fourier_sine(17, 6, 1.0, 1.0, 10.0), 3.0)}) {
      CHECK(std::abs(first_variation(spec, flow, h)) <= 1e-5 * (1.0 + h.sup_norm()));
    }
    CHECK(first_variation(spec, flow, scale(sinusoid(1, 1.0, 10.0), 0.0)) == 0.0);
  }
}

TEST_CASE("first variation of a non-extremal curve matches brute-force quadrature") {
  const LagrangianSpec spec{DampingSchedule::vanishing(3.0), Potential::quadratic(scalar(1.0))};
  const Trajectory one = constant_curve(1.0, 1.0, 3.0, 2000);
  const Perturbation h = sinusoid(1, 1.0, 3.0);
  const double expected = -oracle::integrate([&](double t) { return t * t * t * h.profile(t); }, {1.0, 3.0});
  CHECK(first_variation(spec, one, h) == doctest::Approx(expected).epsilon(1e-10));
  CHECK_THROWS_AS(first_variation(spec, one, sinusoid(1, 1.0, 3.5)), std::invalid_argument);
}

TEST_CASE("second variation examples") {
  const LagrangianSpec van{DampingSchedule::vanishing(3.0), Potential::quadratic(scalar(1.0))};
  const double tri = second_variation(van, 0.5, 3.5, triangle(2.0, 1.0, 0.5, 3.5));
  CHECK(std::abs(tri - 7.1333333333) <= 1e-3);
  CHECK(second_variation(van, 0.5, 3.5, scale(triangle(2.0, 1.0, 0.5, 3.5), 0.0)) == 0.0);

  // α = β = 1, k = 1 on [0, 2π], against Gauss-Legendre on the defining integral.
  const LagrangianSpec con{DampingSchedule::constant(1.0), Potential::quadratic(scalar(1.0))};
  const Perturbation s = sinusoid(1, 0.0, 2.0 * std::numbers::pi);
  const double value = second_variation(con, 0.0, 2.0 * std::numbers::pi, s);
  CHECK(value == doctest::Approx(d2j_oracle(con.damping, 1.0, s)).epsilon(1e-10));
  CHECK(value == doctest::Approx(-16.702864235148898).epsilon(1e-9));
  CHECK(value < 0.0);
}

TEST_CASE("pq coefficients") {
  const double beta = 2.5;
  PQCoefficients pq = pq_coefficients({DampingSchedule::vanishing(3.0), Potential::quadratic(scalar(beta))}, 2.0);
  CHECK(pq.p == 8.0);
  CHECK(pq.q[0] == -8.0 * beta);
  pq = pq_coefficients({DampingSchedule::constant(0.3), Potential::quadratic(scalar(beta))}, 0.0);
  CHECK(pq.p == 1.0);
  CHECK(pq.q[0] == -beta);
  Vector eig(2);
  eig << 1.0, 4.0;
  pq = pq_coefficients({DampingSchedule::constant(2.0), Potential::quadratic(eig)}, 1.0);
  const double e2 = std::exp(2.0);
  CHECK(pq.p == doctest::Approx(e2).epsilon(1e-15));
  CHECK(pq.q[0] == doctest::Approx(-e2).epsilon(1e-15));
  CHECK(pq.q[1] == doctest::Approx(-4.0 * e2).epsilon(1e-15));
  CHECK_THROWS_AS(pq_coefficients({DampingSchedule::vanishing(3.0), Potential::quadratic(scalar(1.0))}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("quadratic identity J[sigma h] = sigma^2 second variation") {
  for (const DampingSchedule& damping : {DampingSchedule::vanishing(3.0), DampingSchedule::constant(1.0)}) {
    const LagrangianSpec spec{damping, Potential::quadratic(scalar(1.5))};
    const Trajectory zero = constant_curve(0.0, 0.5, 6.5, 6000);
    for (const Perturbation& h : {triangle(3.0, 1.5, 0.5, 6.5), sinusoid(2, 0.5, 6.5)}) {
      const double d2 = second_variation(spec, 0.5, 6.5, h);
      for (double sigma : {0.5, 3.0, 40.0}) {
        const Perturbation sh = scale(h, sigma);
        const double j = action(spec, perturb_curve(zero, sh));
        CHECK(j == doctest::Approx(second_variation(spec, 0.5, 6.5, sh)).epsilon(1e-9));
        CHECK(j == doctest::Approx(sigma * sigma * d2).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("second variation does not depend on the base curve for quadratics") {
  const Potential pot = Potential::quadratic(scalar(2.0));
  for (const DampingSchedule& damping : {DampingSchedule::vanishing(3.0), DampingSchedule::constant(0.5)}) {
    const LagrangianSpec spec{damping, pot};
    const Trajectory flow = integrate_flow(pot, damping, scalar(1.0), scalar(0.0), 1.0, 7.0, 3000);
    const Trajectory flat = constant_curve(-2.0, 1.0, 7.0, 3000);
    for (const Perturbation& h : {triangle(4.0, 2.0, 1.0, 7.0), sinusoid(3, 1.0, 7.0)}) {
      const double interval_form = second_variation(spec, 1.0, 7.0, h);
      const double a = second_variation(spec, flow, h);
      const double b = second_variation(spec, flat, h);
      CHECK(a == doctest::Approx(b).epsilon(1e-9));
      // full-Hessian form against the P, Q form
      CHECK(a == doctest::Approx(interval_form).epsilon(1e-9));
      CHECK(interval_form == doctest::Approx(d2j_oracle(damping, 2.0, h)).epsilon(1e-9));
    }
  }
}

TEST_CASE("second variation along a curve for the polynomial potential") {
  const Potential pot = Potential::polynomial(1.0, 4, 0.0);
  const LagrangianSpec spec{DampingSchedule::vanishing(3.0), pot};
  const Perturbation h = sinusoid(2, 1.0, 5.0);
  CHECK_THROWS_AS(second_variation(spec, 1.0, 5.0, h), std::invalid_argument);
  const Trajectory base = integrate_flow(pot, spec.damping, scalar(1.0), scalar(0.0), 1.0, 5.0, 4000);
  const double expected = 0.5 * oracle::integrate(
                                    [&](double t) {
                                      const double y = base.at(t).x[0];
                                      const double r = h.profile_rate(t), v = h.profile(t);
                                      return t * t * t * (r * r - 12.0 * y * y * v * v);
                                    },
                                    {1.0, 5.0});
  CHECK(second_variation(spec, base, h) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("closed forms agree with quadrature") {
  const LagrangianSpec con{DampingSchedule::constant(1.0), Potential::quadratic(scalar(1.0))};
  for (int k : {1, 2, 3}) {
    for (double len : {2.0, 2.0 * std::numbers::pi, 10.0}) {
      const Perturbation s = sinusoid(k, 0.3, 0.3 + len);
      CHECK(second_variation(con, 0.3, 0.3 + len, s) ==
            doctest::Approx(sinusoid_d2j_closed(0.3, 0.3 + len, k)).epsilon(1e-8));
    }
  }
  for (double beta : {0.5, 1.0, 3.0}) {
    const LagrangianSpec van{DampingSchedule::vanishing(3.0), Potential::quadratic(scalar(beta))};
    for (double eps : {0.4, 1.0, 1.9}) {
      const double delta = eps / 1000.0;
      const Perturbation h = triangle(2.0, eps, delta, 0.05, 4.0);
      CHECK(second_variation(van, 0.05, 4.0, h) ==
            doctest::Approx(triangle_d2j_closed(beta, 2.0, eps)).epsilon(std::max(1e-6, 10.0 * delta / eps)));
    }
  }
}
