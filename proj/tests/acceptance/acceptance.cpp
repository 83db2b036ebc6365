#include "vnag/action.hpp"
#include "vnag/bessel.hpp"
#include "vnag/cli/experiments.hpp"
#include "vnag/jacobi.hpp"

#include "support/oracles.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace vnag;
namespace fs = std::filesystem;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

LagrangianSpec quad(const DampingSchedule& d, double beta) { return {d, Potential::quadratic(scalar(beta))}; }

/// Collects the failures of one criterion; `detail` ends up on the line.
struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double sup_weighted(const Trajectory& traj, const Potential& pot, double from, double power) {
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.time(i);
    if (t >= from) worst = std::max(worst, std::pow(t, power) * eval(pot, traj.value(i)));
  }
  return worst;
}

Check rates() {
  Check c;
  const Potential pot = Potential::quadratic(scalar(1.0));
  const DampingSchedule nesterov = DampingSchedule::vanishing(3.0);
  const double reference =
      sup_weighted(integrate_flow(pot, nesterov, scalar(1.0), scalar(0.0), 0.01, 20.0, 400000), pot, 1.0, 2.0);
  const double measured =
      sup_weighted(integrate_flow(pot, nesterov, scalar(1.0), scalar(0.0), 0.01, 20.0, 4000), pot, 1.0, 2.0);
  c.expect(measured <= reference + 1e-6, "AGD sup t^2 f = " + num(measured) + " exceeds reference " + num(reference));
  c.detail = c.ok ? "AGD sup t^2 f = " + num(measured) + " (C = " + num(reference) + ")" : c.detail;

  // Over the curvature family λx²/2 the AGD bound on t²f is uniform while
  // gradient flow only keeps t·f bounded.
  double prev_gd = 0.0;
  for (double lambda : {1.0, 1e-1, 1e-2, 1e-3}) {
    const Potential p = Potential::quadratic(scalar(lambda));
    const double horizon = std::max(20.0, 5.0 / lambda);
    const auto n = static_cast<std::size_t>(4000 * horizon / 20.0);
    const Trajectory agd = integrate_flow(p, nesterov, scalar(1.0), scalar(0.0), 0.01, horizon, n);
    const Trajectory gd = integrate_gradient_flow(p, scalar(1.0), 0.01, horizon, n);
    const double agd2 = sup_weighted(agd, p, 1.0, 2.0), gd2 = sup_weighted(gd, p, 1.0, 2.0);
    const double gd1 = sup_weighted(gd, p, 1.0, 1.0);
    c.expect(agd2 <= 2.0, "AGD t^2 f not uniformly bounded at lambda " + num(lambda));
    c.expect(gd1 <= 0.5, "GD t f unbounded at lambda " + num(lambda));
    if (prev_gd > 0.0) c.expect(gd2 >= 5.0 * prev_gd, "GD t^2 f does not grow like 1/lambda at " + num(lambda));
    prev_gd = gd2;
  }
  if (c.ok) c.detail += "; GD sup t^2 f at lambda=1e-3 is " + num(prev_gd);
  return c;
}

Check el_residual_check() {
  Check c;
  const Potential pot = Potential::quadratic(scalar(1.0));
  const DampingSchedule d = DampingSchedule::vanishing(3.0);
  const double r4000 = el_residual(integrate_flow(pot, d, scalar(1.0), scalar(0.0), 1.0, 10.0, 4000), pot, d);
  const double r2000 = el_residual(integrate_flow(pot, d, scalar(1.0), scalar(0.0), 1.0, 10.0, 2000), pot, d);
  c.expect(r4000 <= 1e-5, "residual " + num(r4000));
  c.expect(r2000 / r4000 >= 3.5, "halving ratio " + num(r2000 / r4000));
  c.detail = c.ok ? "residual " + num(r4000) + ", ratio " + num(r2000 / r4000) : c.detail;
  return c;
}

Check bessel() {
  Check c;
  const auto rows = oracle::bessel_reference(std::string(VNAG_TEST_DATA_DIR) + "/bessel_reference.csv");
  c.expect(rows.size() == 1000, "reference grid size");
  double worst = 0.0;
  for (const auto& r : rows) {
    worst = std::max(worst, std::abs(bessel_j1(r.x) - r.j1) / std::abs(r.j1));
    worst = std::max(worst, std::abs(bessel_y1(r.x) - r.y1) / std::abs(r.y1));
  }
  c.expect(worst <= 1e-10, "worst relative error " + num(worst));
  for (double x = 50.0; x <= 1000.0; x *= 1.01) {
    const double env = std::sqrt(2.0 / (std::numbers::pi * x)), ph = x - 0.75 * std::numbers::pi;
    c.expect(std::abs(bessel_j1(x) - env * std::cos(ph)) <= env / x, "J1 asymptotic at " + num(x));
    c.expect(std::abs(bessel_y1(x) - env * std::sin(ph)) <= env / x, "Y1 asymptotic at " + num(x));
  }
  if (c.ok) c.detail = "worst relative error " + num(worst);
  return c;
}

Check constant_conjugate_times() {
  Check c;
  double worst = 0.0;
  for (const auto& [alpha, beta] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {1.0, 4.0}, {0.5, 2.0}}) {
    const double t1 = 0.5, gap = 2.0 * std::numbers::pi / std::sqrt(4.0 * beta - alpha * alpha);
    const auto r = conjugate_points_shooting(quad(DampingSchedule::constant(alpha), beta), beta, t1, t1 + 2.5 * gap, 20000);
    c.expect(r.conjugate_times.size() == 2, "expected two conjugate times");
    for (std::size_t k = 0; k < std::min<std::size_t>(2, r.conjugate_times.size()); ++k) {
      const double err = std::abs(r.conjugate_times[k] - (t1 + static_cast<double>(k + 1) * gap));
      worst = std::max(worst, err);
      c.expect(err <= 1e-7, "error " + num(err));
    }
  }
  if (c.ok) c.detail = "max error " + num(worst);
  return c;
}

Check regime_dichotomy() {
  Check c;
  for (double beta : {0.5, 1.0, 4.0}) {
    for (double ratio : {2.0, 2.5}) {
      for (double len : {1.0, 10.0, 50.0, 100.0}) {
        const auto r = conjugate_points_shooting(quad(DampingSchedule::constant(ratio * std::sqrt(beta)), beta), beta,
                                                 1.0, 1.0 + len, 40000);
        c.expect(r.conjugate_times.empty(), "conjugate point for alpha/sqrt(beta) = " + num(ratio));
      }
    }
    const double alpha = 1.9 * std::sqrt(beta);
    const double len = 2.0 * std::numbers::pi / std::sqrt(4.0 * beta - alpha * alpha) + 0.1;
    const auto r = conjugate_points_shooting(quad(DampingSchedule::constant(alpha), beta), beta, 1.0, 1.0 + len, 40000);
    c.expect(!r.conjugate_times.empty(), "no conjugate point at alpha = 1.9 sqrt(beta)");
  }
  if (c.ok) c.detail = "critical/overdamped free of conjugate points, underdamped has one";
  return c;
}

Check vanishing_cross_check() {
  Check c;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> beta_dist(0.1, 10.0), t1_dist(0.5, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double beta = beta_dist(rng), t1 = t1_dist(rng), t2 = t1 + 20.0 / std::sqrt(beta);
    const LagrangianSpec spec = quad(DampingSchedule::vanishing(3.0), beta);
    const auto shot = conjugate_points_shooting(spec, beta, t1, t2, 20000);
    const auto closed = conjugate_points_closed(spec, beta, t1, t2);
    c.expect(!closed.conjugate_times.empty(), "no Bessel roots");
    c.expect(shot.conjugate_times.size() == closed.conjugate_times.size(), "root counts differ");
    for (std::size_t k = 0; k < std::min(shot.conjugate_times.size(), closed.conjugate_times.size()); ++k) {
      worst = std::max(worst, std::abs(shot.conjugate_times[k] - closed.conjugate_times[k]));
    }
  }
  c.expect(worst <= 1e-7, "max difference " + num(worst));
  if (c.ok) c.detail = "max difference " + num(worst);
  return c;
}

Check triangle_second_variation() {
  Check c;
  const double t1 = 0.01, t2 = 25.0;
  double worst = 0.0;
  for (double beta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const LagrangianSpec spec = quad(DampingSchedule::vanishing(3.0), beta);
    for (double cc : {5.0, 6.0, 8.0, 10.0, 12.0}) {
      for (double eps : {0.25, 0.5, 1.0, 1.5, 3.0}) {
        const double q = second_variation(spec, t1, t2, triangle(cc, eps, eps / 1000.0, t1, t2));
        const double cf = triangle_d2j_closed(beta, cc, eps);
        worst = std::max(worst, std::abs(q - cf) / std::abs(cf));
      }
      // sign change of the quadrature values, located by bisection in ε
      const auto d2 = [&](double eps) { return second_variation(spec, t1, t2, triangle(cc, eps, eps / 1000.0, t1, t2)); };
      const double lo = std::sqrt(3.0 / beta), hi = std::sqrt(10.0 / beta);
      c.expect(d2(lo) > 0.0 && d2(hi) < 0.0, "no sign change in the bracket for beta " + num(beta) + ", c " + num(cc));
      const double root = oracle::bisect(d2, lo, hi, 50);
      c.expect(root > lo && root < hi, "sign change outside the bracket");
    }
  }
  c.expect(worst <= 1e-4, "worst relative difference " + num(worst));
  const double v = second_variation(quad(DampingSchedule::vanishing(3.0), 1.0), 0.5, 3.5, triangle(2.0, 1.0, 0.5, 3.5));
  c.expect(std::abs(v - 7.1333) <= 1e-3, "value at (1, 2, 1) is " + num(v));
  if (c.ok) c.detail = "worst relative difference " + num(worst) + ", value at (1,2,1) " + num(v);
  return c;
}

Check saddle_threshold() {
  Check c;
  for (double beta : {1.0, 10.0}) {
    for (double t1 : {0.5, 1.0, 4.0}) {
      const double t2 = t1 + std::sqrt(40.0 / beta) + 0.1;
      const Classification cl = classify(Potential::quadratic(scalar(beta)), DampingSchedule::vanishing(3.0), t1, t2);
      c.expect(cl.verdict == Verdict::Saddle, "verdict " + std::string(to_string(cl.verdict)));
      const cli::IndefinitenessWitness w = cli::saddle_witness(beta, t1, t2);
      c.expect(w.d2j_small > 0.0, "small-eps witness not positive");
      c.expect(w.d2j_large < 0.0, "large-eps witness not negative");
    }
  }
  if (c.ok) c.detail = "Saddle with opposite-sign witnesses on all six intervals";
  return c;
}

Check sinusoid_second_variation() {
  Check c;
  const LagrangianSpec spec = quad(DampingSchedule::constant(1.0), 1.0);
  double worst = 0.0;
  for (int k : {1, 2, 3}) {
    for (double len : {2.0, 2.0 * std::numbers::pi, 10.0}) {
      const double q = second_variation(spec, 0.0, len, sinusoid(k, 0.0, len));
      const double cf = sinusoid_d2j_closed(0.0, len, k);
      worst = std::max(worst, std::abs(q - cf) / std::abs(cf));
      c.expect((q < 0.0) == (len > std::sqrt(2.0) * k * std::numbers::pi), "sign mismatch at k " + std::to_string(k));
    }
  }
  c.expect(worst <= 1e-8, "worst relative difference " + num(worst));
  if (c.ok) c.detail = "worst relative difference " + num(worst);
  return c;
}

Check unbounded() {
  Check c;
  const double t1 = 1.0, t2 = 8.0;
  const LagrangianSpec spec = quad(DampingSchedule::vanishing(3.0), 1.0);
  // The flow started at the minimizer stays there.
  const Trajectory rest =
      integrate_flow(spec.potential, spec.damping, scalar(0.0), scalar(0.0), t1, t2, 8000);
  c.expect(t2 - t1 > std::sqrt(40.0), "interval too short");
  for (double eps : {0.5, 3.4}) {
    const Perturbation h = triangle(4.5, eps, t1, t2);
    const double base = second_variation(spec, t1, t2, h);
    double prev = 0.0;
    for (double sigma : {1.0, 10.0, 100.0, 1000.0}) {
      const double j = action(spec, perturb_curve(rest, scale(h, sigma)));
      c.expect(std::abs(j - sigma * sigma * base) <= 1e-9 * std::abs(sigma * sigma * base), "J not quadratic in sigma");
      c.expect(eps < 1.0 ? j > prev : j < prev, "not monotone in sigma");
      c.expect(eps < 1.0 ? j > 0.0 : j < 0.0, "wrong sign");
      prev = j;
    }
    if (c.ok) c.detail += (c.detail.empty() ? "" : ", ") + std::string("J[1000h] = ") + num(prev) + " at eps " + num(eps);
  }
  return c;
}

Check conjugate_monotonicity() {
  Check c;
  for (double t1 : {1.0, 4.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double beta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto t = first_conjugate_time(DampingSchedule::vanishing(3.0), beta, t1);
      c.expect(t.has_value(), "no conjugate time");
      if (!t) break;
      c.expect(*t < prev, "not decreasing at beta " + num(beta));
      prev = *t;
    }
  }
  if (c.ok) c.detail = "strictly decreasing at t1 = 1 and 4";
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Check determinism() {
  Check c;
  const fs::path root = fs::temp_directory_path() / ("vnag_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  for (const std::string& fig : cli::kFigures) {
    const fs::path cfg = root / (fig + ".json");
    std::ofstream(cfg) << "{\"experiment\": \"" << fig << "\", \"seed\": 11}\n";
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = root / (fig + "_" + std::to_string(run));
      const std::string cmd = std::string(VNAG_BINARY) + " reproduce --config " + cfg.string() + " --out " +
                              out.string() + " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      c.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, fig + " exited with failure");
      outputs[run] = slurp(out / "trajectory.csv") + slurp(out / "report.json");
    }
    c.expect(!outputs[0].empty() && outputs[0] == outputs[1], fig + " outputs differ between runs");
  }
  fs::remove_all(root);
  if (c.ok) c.detail = "fig1, fig2, fig3, unbounded, poly byte-identical";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"convergence-rate sanity", rates},
      {"Euler-Lagrange residual", el_residual_check},
      {"Bessel accuracy", bessel},
      {"constant-damping conjugate times", constant_conjugate_times},
      {"regime dichotomy", regime_dichotomy},
      {"vanishing-damping cross-check", vanishing_cross_check},
      {"triangle second variation", triangle_second_variation},
      {"saddle threshold", saddle_threshold},
      {"sinusoid second variation", sinusoid_second_variation},
      {"unboundedness trend", unbounded},
      {"conjugate time monotone in beta", conjugate_monotonicity},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2zu %s: %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), c.detail.c_str());
    std::fflush(stdout);
    failures += c.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
