#include "vnag/cli/experiments.hpp"

#include "vnag/cli/svg.hpp"
#include "vnag/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vnag::cli {

namespace {

Json vector_json(const std::vector<double>& v) { return Json(v); }

Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::vector<double> or_default(const std::vector<double>& given, std::vector<double> fallback) {
  return given.empty() ? fallback : given;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i] < v[i + 1])) return false;
  }
  return true;
}

Trajectory constant_curve(const Vector& value, double t1, double t2, std::size_t n) {
  std::vector<double> times(n + 1);
  for (std::size_t i = 0; i <= n; ++i) times[i] = i == n ? t2 : t1 + (t2 - t1) * static_cast<double>(i) / n;
  const auto cols = static_cast<Eigen::Index>(n + 1);
  return Trajectory(std::move(times), value.replicate(1, cols), Matrix::Zero(value.size(), cols));
}

/// σh for any real σ: a negative scale flips the direction.
Perturbation signed_scale(const Perturbation& h, double sigma) {
  const Perturbation scaled = scale(h, std::abs(sigma));
  return sigma < 0.0 ? along(scaled, -h.direction()) : scaled;
}

OutputSet fig1(const ExperimentConfig& cfg) {
  const double t1 = 0.01, t2 = 20.0, beta = 1.0;
  const Potential pot = Potential::quadratic(Vector::Constant(1, beta));
  const DampingSchedule damping = DampingSchedule::vanishing(3.0);
  const LagrangianSpec spec{damping, pot};
  const Vector x0 = Vector::Constant(1, 1.0), v0 = Vector::Zero(1);
  const Trajectory base = integrate_flow(pot, damping, x0, v0, t1, t2, cfg.n_steps);
  const double j_base = action(spec, base);

  struct Family {
    std::string name;
    Perturbation h;
  };
  const std::vector<Family> families{
      {"triangle_small_eps", triangle(10.0, 0.5, t1, t2)},
      {"triangle_large_eps", triangle(10.0, 4.0, t1, t2)},
      {"fourier_random", fourier_sine(cfg.seed, 8, 2.0, t1, t2)},
  };
  const std::vector<double> sigmas =
      or_default(cfg.sweep.sigma, {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0});

  Json fams = Json::array();
  std::vector<Series> series;
  for (const Family& f : families) {
    const double d2 = second_variation(spec, t1, t2, f.h);
    const double d1 = first_variation(spec, base, f.h);
    Json rows = Json::array();
    Series s{f.name, {}, {}};
    for (double sg : sigmas) {
      const Perturbation hs = signed_scale(f.h, sg);
      const double dj = action(spec, perturb_curve(base, hs)) - j_base;
      rows.push_back(Json{{"sigma", sg}, {"delta_action", dj}, {"quadratic_model", sg * d1 + sg * sg * d2}});
      s.x.push_back(sg);
      s.y.push_back(dj);
    }
    Json entry{{"name", f.name}, {"perturbation", to_json(f.h)}, {"second_variation", d2}, {"first_variation", d1}};
    if (const auto* tri = std::get_if<TriangleBump>(&f.h.kind())) {
      entry["closed_form"] = triangle_d2j_closed(beta, tri->c, tri->eps);
    }
    entry["local_behaviour"] = d2 > 0.0 ? "min" : "max";
    entry["delta_action"] = rows;
    fams.push_back(entry);
    series.push_back(std::move(s));
  }
  const double s_small = fams[0]["second_variation"].get<double>();
  const double s_large = fams[1]["second_variation"].get<double>();

  Json report{{"experiment", "reproduce"},
              {"figure", "fig1"},
              {"config", cfg.echo},
              {"potential", to_json(pot)},
              {"damping", to_json(damping)},
              {"interval", Json{{"t1", t1}, {"t2", t2}}},
              {"initial_conditions",
               Json{{"x0", 1.0}, {"v0", 0.0}, {"t1", t1}, {"note", "chosen; the source figure does not state them"}}},
              {"perturbation_choice",
               "triangles at c = 10 with eps = 0.5 and eps = 4 as the two panel directions, plus a seeded "
               "Fourier-sine probe; the source figure does not state its perturbations"},
              {"base_action", j_base},
              {"families", fams},
              {"opposite_signs", (s_small > 0.0) != (s_large > 0.0)}};

  CsvWriter csv({"t", "x", "x_triangle_small_eps", "x_triangle_large_eps", "x_fourier_random"});
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double t = base.time(i), x = base.value(i)[0];
    csv.row({t, x, x + families[0].h.profile(t), x + families[1].h.profile(t), x + families[2].h.profile(t)});
  }
  OutputSet out;
  out.add("trajectory.csv", csv.str());
  out.add("report.json", dump(report));
  out.add("figure.svg", line_chart(series, {"Action change along three perturbation directions", "sigma",
                                            "J[Y + sigma h] - J[Y]"}));
  return out;
}

OutputSet fig2(const ExperimentConfig& cfg) {
  const std::vector<double> betas = or_default(cfg.sweep.beta, {0.5, 1.0, 2.0, 4.0, 8.0});
  const std::vector<double> starts{1.0, 4.0};
  const std::vector<double> slopes{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  const DampingSchedule damping = DampingSchedule::vanishing(3.0);
  const std::size_t shoot_steps = std::max<std::size_t>(cfg.n_steps, 4000);
  const std::size_t plot_steps = 400;

  Json table = Json::array();
  CsvWriter csv({"t1", "beta", "slope", "t", "h"});
  std::vector<Series> series;
  Series markers{"first conjugate", {}, {}, true};
  Json monotone = Json::object();
  for (double t1 : starts) {
    std::vector<std::optional<double>> firsts;
    double window = 0.0;
    for (double beta : betas) {
      firsts.push_back(first_conjugate_time(damping, beta, t1));
      if (firsts.back()) window = std::max(window, *firsts.back() - t1);
    }
    window = window > 0.0 ? 1.25 * window : 10.0;
    std::vector<double> times;
    for (std::size_t b = 0; b < betas.size(); ++b) {
      const double beta = betas[b];
      const LagrangianSpec spec{damping, Potential::quadratic(Vector::Constant(1, beta))};
      Json row{{"t1", t1}, {"beta", beta}, {"first_conjugate_time", nullable(firsts[b])}};
      if (firsts[b]) {
        const double span = *firsts[b] - t1;
        const ConjugateReport shot = conjugate_points_shooting(spec, beta, t1, *firsts[b] + 0.25 * span, shoot_steps);
        const std::optional<double> s =
            shot.conjugate_times.empty() ? std::nullopt : std::optional<double>(shot.conjugate_times.front());
        row["shooting_time"] = nullable(s);
        row["shooting_difference"] = s ? Json(std::abs(*s - *firsts[b])) : Json(nullptr);
        times.push_back(*firsts[b]);
      } else {
        times.push_back(std::numeric_limits<double>::infinity());
      }
      table.push_back(row);
      for (double slope : slopes) {
        const Trajectory h = jacobi_solution(damping, beta, t1, t1 + window, plot_steps, slope);
        Series s{"t1=" + format_double(t1) + " beta=" + format_double(beta), {}, {}};
        for (std::size_t i = 0; i < h.size(); ++i) {
          csv.row({t1, beta, slope, h.time(i), h.value(i)[0]});
          s.x.push_back(h.time(i));
          s.y.push_back(h.value(i)[0]);
        }
        if (t1 == starts.front() && slope == 1.0) series.push_back(std::move(s));
      }
      if (t1 == starts.front() && firsts[b]) {
        markers.x.push_back(*firsts[b]);
        markers.y.push_back(0.0);
      }
    }
    bool nonincreasing = true;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) nonincreasing = nonincreasing && times[i + 1] <= times[i];
    monotone[format_double(t1)] = nonincreasing;
  }
  series.push_back(markers);

  Json report{{"experiment", "reproduce"},
              {"figure", "fig2"},
              {"config", cfg.echo},
              {"damping", to_json(damping)},
              {"slopes", vector_json(slopes)},
              {"conjugate_times", table},
              {"nonincreasing_in_beta", monotone}};
  OutputSet out;
  out.add("trajectory.csv", csv.str());
  out.add("report.json", dump(report));
  out.add("figure.svg", line_chart(series, {"Jacobi solutions from t1 = 1 and first conjugate points", "t", "h(t)"}));
  return out;
}

OutputSet fig3(const ExperimentConfig& cfg) {
  const double beta = 2e-2, mu = 3e-4, t1 = 0.01;
  Vector eig(2);
  eig << beta, mu;
  const Potential pot = Potential::quadratic(eig);
  const Vector x0 = Vector::Ones(2), v0 = Vector::Zero(2);
  const std::vector<double> alphas =
      or_default(cfg.sweep.alpha, {std::sqrt(mu), 2.0 * std::sqrt(mu), 2.0 * std::sqrt(beta), 3.0 * std::sqrt(beta)});
  const std::vector<double> lengths = or_default(cfg.sweep.lengths, {10.0, 25.0, 50.0, 100.0, 200.0});
  const double l_max = *std::max_element(lengths.begin(), lengths.end());

  Json rows = Json::array();
  CsvWriter csv({"alpha", "t", "x_0", "x_1", "v_0", "v_1"});
  std::vector<Series> series;
  for (double alpha : alphas) {
    const DampingSchedule damping = DampingSchedule::constant(alpha);
    const LagrangianSpec spec{damping, pot};
    const Trajectory traj = integrate_flow(pot, damping, x0, v0, t1, t1 + l_max, cfg.n_steps);
    Series s{"alpha=" + format_double(alpha), {}, {}};
    for (std::size_t i = 0; i < traj.size(); ++i) {
      csv.row({alpha, traj.time(i), traj.value(i)[0], traj.value(i)[1], traj.deriv(i)[0], traj.deriv(i)[1]});
      s.x.push_back(traj.time(i));
      s.y.push_back(traj.value(i)[0]);
    }
    series.push_back(std::move(s));

    Json per_length = Json::array();
    std::optional<double> crossover;
    for (double len : lengths) {
      const Classification c = classify(pot, damping, t1, t1 + len);
      const Trajectory piece = integrate_flow(pot, damping, x0, v0, t1, t1 + len, cfg.n_steps);
      per_length.push_back(Json{{"length", len}, {"verdict", to_string(c.verdict)}, {"action", action(spec, piece)}});
      if (c.earliest_conjugate_time) crossover = *c.earliest_conjugate_time - t1;
    }
    auto regime_name = [&](double lam) {
      switch (regime(alpha, lam)) {
        case DampingRegime::Underdamped: return "underdamped";
        case DampingRegime::Critical: return "critical";
        case DampingRegime::Overdamped: return "overdamped";
      }
      return "";
    };
    rows.push_back(Json{{"alpha", alpha},
                        {"regime_beta", regime_name(beta)},
                        {"regime_mu", regime_name(mu)},
                        {"crossover_length", nullable(crossover)},
                        {"lengths", per_length}});
  }

  const LagrangianSpec unit{DampingSchedule::constant(1.0), Potential::quadratic(Vector::Constant(1, 1.0))};
  Json sin_rows = Json::array();
  for (double len : {2.0, 4.0, 4.4, 4.5, 2.0 * std::numbers::pi, 10.0}) {
    const double q = second_variation(unit, 0.0, len, sinusoid(1, 0.0, len));
    const double cf = sinusoid_d2j_closed(0.0, len, 1);
    sin_rows.push_back(Json{{"length", len},
                            {"quadrature", q},
                            {"closed_form", cf},
                            {"negative", q < 0.0},
                            {"length_exceeds_sqrt2_pi", len > std::numbers::sqrt2 * std::numbers::pi}});
  }

  Json report{{"experiment", "reproduce"},
              {"figure", "fig3"},
              {"config", cfg.echo},
              {"potential", to_json(pot)},
              {"curvature_note",
               "eigenvalues set to the caption's beta = 2e-2 and mu = 3e-4 verbatim; the caption's written "
               "objective would give Hessian eigenvalues twice its coefficients"},
              {"initial_conditions",
               Json{{"x0", Json::array({1.0, 1.0})}, {"v0", Json::array({0.0, 0.0})}, {"t1", t1},
                    {"note", "chosen; the source figure does not state them"}}},
              {"dampings", rows},
              {"sinusoid_unit_damping", sin_rows}};
  OutputSet out;
  out.add("trajectory.csv", csv.str());
  out.add("report.json", dump(report));
  out.add("figure.svg", line_chart(series, {"Constant-damping flows, stiff coordinate", "t", "x_0(t)"}));
  return out;
}

OutputSet unbounded(const ExperimentConfig& cfg) {
  const double beta = 1.0, t1 = 1.0, t2 = 8.0, c = 4.5;
  const LagrangianSpec spec{DampingSchedule::vanishing(3.0), Potential::quadratic(Vector::Constant(1, beta))};
  const std::vector<double> sigmas = or_default(cfg.sweep.sigma, {1.0, 10.0, 100.0, 1000.0});
  const Trajectory zero = constant_curve(Vector::Zero(1), t1, t2, cfg.n_steps);
  const std::vector<std::pair<std::string, double>> widths{{"small_eps", 0.5}, {"large_eps", 3.4}};

  Json fams = Json::array();
  std::vector<Series> series;
  std::vector<Perturbation> hs;
  for (const auto& [name, eps] : widths) {
    const Perturbation h = triangle(c, eps, t1, t2);
    hs.push_back(h);
    const double d2 = second_variation(spec, t1, t2, h);
    Json rows = Json::array();
    std::vector<double> js;
    Series s{name, {}, {}};
    for (double sg : sigmas) {
      const double j = action(spec, perturb_curve(zero, scale(h, sg)));
      js.push_back(j);
      rows.push_back(Json{{"sigma", sg}, {"action", j}, {"action_over_sigma2", j / (sg * sg)}});
      s.x.push_back(std::log10(sg));
      s.y.push_back(std::copysign(std::log10(1.0 + std::abs(j)), j));
    }
    series.push_back(std::move(s));
    std::vector<double> signed_js = js;
    if (d2 < 0.0) {
      for (double& v : signed_js) v = -v;
    }
    const bool same_sign = std::all_of(js.begin(), js.end(), [&](double v) { return (v > 0.0) == (d2 > 0.0); });
    fams.push_back(Json{{"name", name},
                        {"perturbation", to_json(h)},
                        {"epsilon_star", epsilon_star(beta * c * c, beta)},
                        {"second_variation", d2},
                        {"closed_form", triangle_d2j_closed(beta, c, eps)},
                        {"actions", rows},
                        {"fixed_sign", same_sign},
                        {"monotone_in_magnitude", strictly_increasing(signed_js)}});
  }

  Json report{{"experiment", "reproduce"},
              {"figure", "unbounded"},
              {"config", cfg.echo},
              {"spec", to_json(spec)},
              {"interval", Json{{"t1", t1}, {"t2", t2}}},
              {"length_bound", std::sqrt(40.0 / beta)},
              {"base_curve", "the minimizer x* = 0 with pinned endpoints"},
              {"families", fams}};
  CsvWriter csv({"t", "h_small_eps", "h_large_eps"});
  for (std::size_t i = 0; i <= 1000; ++i) {
    const double t = t1 + (t2 - t1) * static_cast<double>(i) / 1000.0;
    csv.row({t, hs[0].profile(t), hs[1].profile(t)});
  }
  OutputSet out;
  out.add("trajectory.csv", csv.str());
  out.add("report.json", dump(report));
  out.add("figure.svg",
          line_chart(series, {"Action along scaled triangles", "log10 sigma", "sign(J) log10(1 + |J|)"}));
  return out;
}

OutputSet poly(const ExperimentConfig& cfg) {
  const double t1 = 0.01, t_end = 60.0;
  const Potential pot = Potential::polynomial(1.0, 4, 0.0);
  const DampingSchedule damping = DampingSchedule::vanishing(3.0);
  const LagrangianSpec spec{damping, pot};
  const Vector x0 = Vector::Constant(1, 1.0), v0 = Vector::Zero(1);
  const std::size_t base_steps = 4 * cfg.n_steps;
  const Trajectory base = integrate_flow(pot, damping, x0, v0, t1, t_end, base_steps);
  const std::size_t shoot_steps = std::max<std::size_t>(cfg.n_steps, 4000);

  Json rows = Json::array();
  Series markers{"first conjugate", {}, {}, true};
  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const ConjugateReport r = conjugate_points_shooting(spec, base, s, t_end, shoot_steps);
    const double y = base.at(s).x[0];
    Json row{{"window_start", s}, {"curvature_at_start", hessian_diagonal(pot, Vector::Constant(1, y))[0]}};
    if (r.conjugate_times.empty()) {
      row["first_conjugate_distance"] = nullptr;
    } else {
      row["first_conjugate_distance"] = r.conjugate_times.front() - s;
      markers.x.push_back(r.conjugate_times.front());
      markers.y.push_back(base.at(r.conjugate_times.front()).x[0]);
    }
    rows.push_back(row);
  }

  Json report{{"experiment", "reproduce"},
              {"figure", "poly"},
              {"config", cfg.echo},
              {"spec", to_json(spec)},
              {"initial_conditions", Json{{"x0", 1.0}, {"v0", 0.0}, {"t1", t1}}},
              {"interval_end", t_end},
              {"note",
               "windows [s, s + d] with d below the first conjugate distance contain no conjugate point; "
               "numerical exploration only"},
              {"windows", rows}};
  std::ostringstream os;
  write_csv(base, os);
  Series path{"X(t)", {}, {}};
  for (std::size_t i = 0; i < base.size(); i += 4) {
    path.x.push_back(base.time(i));
    path.y.push_back(base.value(i)[0]);
  }
  OutputSet out;
  out.add("trajectory.csv", os.str());
  out.add("report.json", dump(report));
  out.add("figure.svg", line_chart({path, markers}, {"Flow on x^4 with conjugate points", "t", "X(t)"}));
  return out;
}

}  // namespace

OutputSet run_reproduce(const ExperimentConfig& cfg) {
  if (cfg.experiment == "fig1") return fig1(cfg);
  if (cfg.experiment == "fig2") return fig2(cfg);
  if (cfg.experiment == "fig3") return fig3(cfg);
  if (cfg.experiment == "unbounded") return unbounded(cfg);
  if (cfg.experiment == "poly") return poly(cfg);
  std::string names;
  for (const std::string& f : kFigures) names += (names.empty() ? "" : ", ") + f;
  throw ConfigError("reproduce: 'experiment' must be one of " + names);
}

}  // namespace vnag::cli
