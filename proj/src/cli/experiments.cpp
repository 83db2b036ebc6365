#include "vnag/cli/experiments.hpp"

#include "vnag/cli/svg.hpp"
#include "vnag/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vnag::cli {

namespace {

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Vector initial_x0(const ExperimentConfig& cfg, int dim) { return cfg.x0 ? *cfg.x0 : Vector::Ones(dim); }
Vector initial_v0(const ExperimentConfig& cfg, int dim) { return cfg.v0 ? *cfg.v0 : Vector::Zero(dim); }

Json initial_json(const Vector& x0, const Vector& v0, double t1) {
  return Json{{"x0", vector_json(x0)}, {"v0", vector_json(v0)}, {"t1", t1}};
}

const QuadraticDiagonal* as_quadratic(const Potential& pot) { return std::get_if<QuadraticDiagonal>(&pot.kind()); }

/// Closed-form δ²J when one exists for this (spec, h), NaN otherwise.
double closed_form_d2j(const LagrangianSpec& spec, const Perturbation& h, std::string& note) {
  const QuadraticDiagonal* quad = as_quadratic(spec.potential);
  if (quad == nullptr || quad->eigenvalues.size() != 1) {
    note = "closed form needs a one-dimensional quadratic potential";
    return std::nan("");
  }
  const double lambda = quad->eigenvalues[0];
  if (const auto* tri = std::get_if<TriangleBump>(&h.kind())) {
    if (!spec.damping.is_vanishing() || spec.damping.c() != 3.0) {
      note = "triangle closed form needs vanishing damping 3/t";
      return std::nan("");
    }
    note = "triangle";
    return triangle_d2j_closed(lambda, tri->c, tri->eps, h.sigma());
  }
  if (const auto* s = std::get_if<SinusoidMode>(&h.kind())) {
    if (spec.damping.is_vanishing() || spec.damping.alpha() != 1.0 || lambda != 1.0) {
      note = "sinusoid closed form needs constant damping alpha = 1 and curvature 1";
      return std::nan("");
    }
    note = "sinusoid";
    return sinusoid_d2j_closed(h.t1(), h.t2(), s->k, h.sigma());
  }
  note = "no closed form for this perturbation kind";
  return std::nan("");
}

std::string damping_label(const DampingSchedule& d) {
  return d.is_vanishing() ? "c=" + format_double(d.c()) : "alpha=" + format_double(d.alpha());
}

}  // namespace

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("csv: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ",";
    text_ += format_double(values[i]);
  }
  text_ += "\n";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<SignChange> sign_changes(const std::vector<double>& eps, const std::vector<double>& values) {
  std::vector<SignChange> out;
  for (std::size_t i = 0; i + 1 < eps.size() && i + 1 < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(values[i + 1])) continue;
    if ((values[i] > 0.0 && values[i + 1] < 0.0) || (values[i] < 0.0 && values[i + 1] > 0.0)) {
      out.push_back({eps[i], eps[i + 1]});
    }
  }
  return out;
}

IndefinitenessWitness saddle_witness(double lambda, double t1, double t2) {
  if (!(t2 - t1 > std::sqrt(40.0 / lambda))) {
    throw std::invalid_argument("saddle_witness: interval must be longer than sqrt(40/lambda)");
  }
  const LagrangianSpec spec{DampingSchedule::vanishing(3.0), Potential::quadratic(Vector::Constant(1, lambda))};
  const double c = 0.5 * (t1 + t2), half = 0.5 * (t2 - t1);
  const double eps_large = 0.999 * half / 1.001;
  const double eps_small = 0.5 * epsilon_star(lambda * c * c, lambda);
  return {c, eps_small, eps_large, second_variation(spec, t1, t2, triangle(c, eps_small, t1, t2)),
          second_variation(spec, t1, t2, triangle(c, eps_large, t1, t2))};
}

OutputSet run_simulate(const ExperimentConfig& cfg) {
  const Potential& pot = require_potential(cfg);
  const DampingSchedule& damping = require_damping(cfg);
  const Interval& iv = require_interval(cfg);
  const int d = pot.dim();
  const Vector x0 = initial_x0(cfg, d), v0 = initial_v0(cfg, d);
  if (x0.size() != d || v0.size() != d) throw ConfigError("initial: dimension does not match the potential");

  const Trajectory traj = integrate_flow(pot, damping, x0, v0, iv.t1, iv.t2, cfg.n_steps);
  const LagrangianSpec spec{damping, pot};

  Json report{{"experiment", "simulate"}, {"config", cfg.echo}};
  report["initial"] = initial_json(x0, v0, iv.t1);
  report["n_steps"] = cfg.n_steps;
  report["el_residual"] = el_residual(traj, pot, damping);
  report["action"] = action(spec, traj);
  const std::size_t last = traj.size() - 1;
  report["final"] = Json{{"t", traj.time(last)},
                         {"x", vector_json(traj.value(last))},
                         {"v", vector_json(traj.deriv(last))},
                         {"f", eval(pot, traj.value(last))}};

  const QuadraticDiagonal* quad = as_quadratic(pot);
  if (!damping.is_vanishing() && quad != nullptr && d == 1) {
    double err = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const PhasePoint ex = damped_oscillator_exact(damping.alpha(), quad->eigenvalues[0], x0[0] - quad->xstar[0],
                                                    v0[0], iv.t1, traj.time(i));
      err = std::max(err, std::abs(traj.value(i)[0] - quad->xstar[0] - ex.x[0]));
    }
    report["exact_max_abs_error"] = err;
  }

  if (cfg.bregman) {
    const BregmanParams params = BregmanParams::polynomial(cfg.bregman->p, cfg.bregman->scale);
    const Trajectory breg = integrate_bregman_flow(params, pot, x0, v0, iv.t1, iv.t2, cfg.n_steps);
    const IdealScalingReport ideal = check_ideal_scaling(params, traj.times());
    report["bregman"] = Json{{"p", cfg.bregman->p},
                             {"scale", cfg.bregman->scale},
                             {"max_abs_difference_from_flow", (breg.values() - traj.values()).cwiseAbs().maxCoeff()},
                             {"ideal_scaling", Json{{"holds", ideal.holds},
                                                    {"beta_condition", ideal.beta_condition},
                                                    {"gamma_condition", ideal.gamma_condition},
                                                    {"max_violation", ideal.max_violation}}}};
  }

  std::string csv;
  {
    std::ostringstream os;
    write_csv(traj, os);
    csv = os.str();
  }
  std::vector<Series> series;
  for (int k = 0; k < d; ++k) {
    Series s{"x_" + std::to_string(k), {}, {}};
    for (std::size_t i = 0; i < traj.size(); ++i) {
      s.x.push_back(traj.time(i));
      s.y.push_back(traj.value(i)[k]);
    }
    series.push_back(std::move(s));
  }
  OutputSet out;
  out.add("trajectory.csv", std::move(csv));
  out.add("report.json", dump(report));
  out.add("figure.svg", line_chart(series, {"Flow " + damping_label(damping), "t", "X(t)"}));
  return out;
}

OutputSet run_second_variation(const ExperimentConfig& cfg) {
  const Potential& pot = require_potential(cfg);
  const DampingSchedule& damping = require_damping(cfg);
  const Interval& iv = require_interval(cfg);
  const LagrangianSpec spec{damping, pot};
  const int d = pot.dim();

  struct Entry {
    Json descriptor;
    std::optional<Perturbation> h;
    std::string error;
  };
  std::vector<Entry> entries;
  for (const Perturbation& h : build_perturbations(cfg, iv.t1, iv.t2)) entries.push_back({to_json(h), h, ""});
  const auto add = [&](Json desc, auto&& make) {
    try {
      Perturbation h = make();
      if (d > 1) h = along(h, Vector::Unit(d, 0));
      entries.push_back({to_json(h), h, ""});
    } catch (const std::invalid_argument& e) {
      entries.push_back({std::move(desc), std::nullopt, e.what()});
    }
  };
  for (double c : cfg.sweep.c) {
    for (double eps : cfg.sweep.eps) {
      add(Json{{"kind", "triangle"}, {"c", c}, {"eps", eps}, {"delta", eps / 1000.0}, {"sigma", 1.0}},
          [&] { return triangle(c, eps, iv.t1, iv.t2); });
    }
  }
  for (int k : cfg.sweep.k) {
    add(Json{{"kind", "sinusoid"}, {"k", k}, {"sigma", 1.0}}, [&] { return sinusoid(k, iv.t1, iv.t2); });
  }
  if (!cfg.sweep.sigma.empty()) {
    std::vector<Entry> scaled;
    for (const Entry& e : entries) {
      for (double s : cfg.sweep.sigma) {
        if (e.h) {
          const Perturbation h = scale(*e.h, s);
          scaled.push_back({to_json(h), h, ""});
        } else {
          Json desc = e.descriptor;
          desc["sigma"] = s;
          scaled.push_back({desc, std::nullopt, e.error});
        }
      }
    }
    entries = std::move(scaled);
  }
  if (entries.empty()) throw ConfigError("second-variation: no perturbations given");

  std::optional<Trajectory> base;
  if (!pot.has_constant_hessian()) {
    base = integrate_flow(pot, damping, initial_x0(cfg, d), initial_v0(cfg, d), iv.t1, iv.t2, cfg.n_steps);
  }

  Json results = Json::array();
  std::vector<double> quad_values, closed_values;
  for (const Entry& e : entries) {
    Json r{{"perturbation", e.descriptor}};
    double q = std::nan(""), cf = std::nan("");
    std::string note;
    if (e.h) {
      q = base ? second_variation(spec, *base, *e.h) : second_variation(spec, iv.t1, iv.t2, *e.h);
      cf = closed_form_d2j(spec, *e.h, note);
    } else {
      note = "perturbation not admissible on the interval: " + e.error;
      if (const QuadraticDiagonal* qd = as_quadratic(pot); qd != nullptr && qd->eigenvalues.size() == 1 &&
                                                          damping.is_vanishing() && damping.c() == 3.0 &&
                                                          e.descriptor.value("kind", "") == "triangle") {
        cf = triangle_d2j_closed(qd->eigenvalues[0], e.descriptor.at("c").get<double>(),
                                 e.descriptor.at("eps").get<double>(), e.descriptor.value("sigma", 1.0));
      }
    }
    r["quadrature"] = nullable(q);
    r["closed_form"] = nullable(cf);
    r["relative_difference"] =
        std::isfinite(q) && std::isfinite(cf) ? Json(std::abs(q - cf) / std::max(std::abs(cf), 1e-300)) : Json(nullptr);
    if (!note.empty()) r["note"] = note;
    if (e.h) {
      r["report"] = to_json(VariationReport{q, iv.t1, iv.t2, *e.h, spec});
    }
    results.push_back(r);
    quad_values.push_back(q);
    closed_values.push_back(cf);
  }

  Json brackets = Json::array();
  const std::size_t n_tri = cfg.sweep.c.size() * cfg.sweep.eps.size();
  if (n_tri > 0 && cfg.sweep.sigma.empty()) {
    const std::size_t offset = cfg.perturbations.size();
    const QuadraticDiagonal* qd = as_quadratic(pot);
    for (std::size_t ci = 0; ci < cfg.sweep.c.size(); ++ci) {
      std::vector<double> eps = cfg.sweep.eps, qv, cv;
      for (std::size_t ei = 0; ei < eps.size(); ++ei) {
        qv.push_back(quad_values[offset + ci * eps.size() + ei]);
        cv.push_back(closed_values[offset + ci * eps.size() + ei]);
      }
      Json b{{"c", cfg.sweep.c[ci]}};
      Json from_q = Json::array(), from_c = Json::array();
      for (const SignChange& s : sign_changes(eps, qv)) from_q.push_back(Json::array({s.eps_lo, s.eps_hi}));
      for (const SignChange& s : sign_changes(eps, cv)) from_c.push_back(Json::array({s.eps_lo, s.eps_hi}));
      b["quadrature_brackets"] = from_q;
      b["closed_form_brackets"] = from_c;
      if (qd != nullptr && qd->eigenvalues.size() == 1) {
        const double lam = qd->eigenvalues[0], c = cfg.sweep.c[ci];
        b["epsilon_star"] = epsilon_star(lam * c * c, lam);
      }
      brackets.push_back(b);
    }
  }

  Json report{{"experiment", "second-variation"}, {"config", cfg.echo}, {"results", results}};
  if (!brackets.empty()) report["sign_changes"] = brackets;

  // Profiles of the admissible perturbations on a common grid.
  std::vector<std::string> header{"t"};
  std::vector<const Perturbation*> hs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].h) {
      header.push_back("h_" + std::to_string(i));
      hs.push_back(&*entries[i].h);
    }
  }
  CsvWriter csv(header);
  const std::size_t samples = 1000;
  std::vector<Series> series;
  for (std::size_t j = 0; j < hs.size(); ++j) series.push_back({header[j + 1], {}, {}});
  for (std::size_t i = 0; i <= samples; ++i) {
    const double t = iv.t1 + (iv.t2 - iv.t1) * static_cast<double>(i) / samples;
    std::vector<double> row{t};
    for (std::size_t j = 0; j < hs.size(); ++j) {
      row.push_back(hs[j]->profile(t));
      series[j].x.push_back(t);
      series[j].y.push_back(row.back());
    }
    csv.row(row);
  }
  if (series.size() > 8) series.resize(8);
  OutputSet out;
  out.add("trajectory.csv", csv.str());
  out.add("report.json", dump(report));
  out.add("figure.svg", line_chart(series, {"Perturbation profiles", "t", "h(t)"}));
  return out;
}

OutputSet run_classify(const ExperimentConfig& cfg) {
  const Interval& iv = require_interval(cfg);
  std::vector<Potential> pots;
  if (!cfg.sweep.beta.empty()) {
    for (double b : cfg.sweep.beta) pots.push_back(Potential::quadratic(Vector::Constant(1, b)));
  } else {
    pots.push_back(require_potential(cfg));
  }
  for (const Potential& p : pots) {
    if (as_quadratic(p) == nullptr) throw ConfigError("classify: only quadratic potentials are supported");
  }
  std::vector<DampingSchedule> dampings;
  if (!cfg.sweep.alpha.empty()) {
    for (double a : cfg.sweep.alpha) dampings.push_back(DampingSchedule::constant(a));
  } else {
    dampings.push_back(require_damping(cfg));
  }
  std::vector<double> ends;
  if (!cfg.sweep.lengths.empty()) {
    for (double l : cfg.sweep.lengths) ends.push_back(iv.t1 + l);
  } else {
    ends.push_back(iv.t2);
  }
  for (const DampingSchedule& dmp : dampings) {
    try {
      dmp.require_time(iv.t1);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("classify: ") + e.what());
    }
  }
  const double t_max = *std::max_element(ends.begin(), ends.end());

  Json results = Json::array();
  std::vector<std::string> header{"t"};
  std::vector<Trajectory> jacobi;
  Json columns = Json::array();
  for (const Potential& pot : pots) {
    const QuadraticDiagonal& q = *as_quadratic(pot);
    const double lam_max = q.eigenvalues.maxCoeff();
    Eigen::Index arg_max = 0;
    q.eigenvalues.maxCoeff(&arg_max);
    for (const DampingSchedule& dmp : dampings) {
      for (double t2 : ends) {
        const Classification c = classify(pot, dmp, iv.t1, t2);
        Json r{{"potential", to_json(pot)}, {"damping", to_json(dmp)}, {"length", t2 - iv.t1}};
        r["classification"] = to_json(c);
        if (dmp.is_vanishing()) {
          const double threshold = std::sqrt(40.0 / lam_max);
          r["saddle_length_bound"] = threshold;
          if (dmp.c() == 3.0 && t2 - iv.t1 > threshold) {
            const IndefinitenessWitness w = saddle_witness(lam_max, iv.t1, t2);
            r["witness"] = Json{{"eigen_lambda", lam_max},
                                {"direction_index", arg_max},
                                {"c", w.c},
                                {"small", Json{{"eps", w.eps_small}, {"second_variation", w.d2j_small}}},
                                {"large", Json{{"eps", w.eps_large}, {"second_variation", w.d2j_large}}}};
          }
        } else if (regime(dmp.alpha(), lam_max) == DampingRegime::Underdamped) {
          r["saddle_length_bound"] = 2.0 * std::numbers::pi / std::sqrt(4.0 * lam_max - dmp.alpha() * dmp.alpha());
        } else {
          r["saddle_length_bound"] = nullptr;
        }
        results.push_back(r);
      }
      header.push_back("h_" + std::to_string(jacobi.size()));
      columns.push_back(Json{{"column", header.back()}, {"eigen_lambda", lam_max}, {"damping", to_json(dmp)}});
      jacobi.push_back(jacobi_solution(dmp, lam_max, iv.t1, t_max, cfg.n_steps));
    }
  }

  Json report{{"experiment", "classify"}, {"config", cfg.echo}, {"results", results}, {"jacobi_columns", columns}};
  CsvWriter csv(header);
  std::vector<Series> series;
  for (std::size_t j = 0; j < jacobi.size(); ++j) series.push_back({header[j + 1], {}, {}});
  for (std::size_t i = 0; i < jacobi.front().size(); ++i) {
    std::vector<double> row{jacobi.front().time(i)};
    for (std::size_t j = 0; j < jacobi.size(); ++j) {
      row.push_back(jacobi[j].value(i)[0]);
      series[j].x.push_back(row.front());
      series[j].y.push_back(row.back());
    }
    csv.row(row);
  }
  if (series.size() > 8) series.resize(8);
  OutputSet out;
  out.add("trajectory.csv", csv.str());
  out.add("report.json", dump(report));
  out.add("figure.svg", line_chart(series, {"Jacobi solutions, h(t1) = 0", "t", "h(t)"}));
  return out;
}

}  // namespace vnag::cli
