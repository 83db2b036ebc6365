#include "vnag/serialize.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace vnag {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw std::invalid_argument(what + ": expected a JSON object");
}

void require_keys(const Json& j, const std::string& what, const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) throw std::invalid_argument(what + ": unknown field '" + item.key() + "'");
  }
}

const Json& field(const Json& j, const std::string& what, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(what + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& what, const std::string& key) {
  const Json& v = field(j, what, key);
  if (!v.is_number()) throw std::invalid_argument(what + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const Json& j, const std::string& what, const std::string& key, double fallback) {
  return j.contains(key) ? number(j, what, key) : fallback;
}

long long integer(const Json& j, const std::string& what, const std::string& key) {
  const Json& v = field(j, what, key);
  if (!v.is_number_integer()) throw std::invalid_argument(what + "." + key + ": expected an integer");
  return v.get<long long>();
}

std::string kind_of(const Json& j, const std::string& what) {
  const Json& v = field(j, what, "kind");
  if (!v.is_string()) throw std::invalid_argument(what + ".kind: expected a string");
  return v.get<std::string>();
}

Vector number_vector(const Json& v, const std::string& what) {
  if (v.is_number()) return Vector::Constant(1, v.get<double>());
  if (!v.is_array() || v.empty()) throw std::invalid_argument(what + ": expected a nonempty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw std::invalid_argument(what + ": expected a nonempty array of numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

}  // namespace

Json to_json(const Potential& pot) {
  return std::visit(Overloaded{
                        [](const QuadraticDiagonal& q) {
                          return Json{{"kind", "quadratic"},
                                      {"eigenvalues", vector_json(q.eigenvalues)},
                                      {"xstar", vector_json(q.xstar)}};
                        },
                        [](const Polynomial1D& p) {
                          return Json{{"kind", "polynomial"}, {"a", p.coefficient}, {"p", p.degree}, {"xstar", p.xstar}};
                        },
                        [](const ZeroPotential& z) { return Json{{"kind", "zero"}, {"dim", z.dim}}; },
                    },
                    pot.kind());
}

Json to_json(const DampingSchedule& damping) {
  if (damping.is_vanishing()) return Json{{"kind", "vanishing"}, {"c", damping.c()}};
  return Json{{"kind", "constant"}, {"alpha", damping.alpha()}};
}

Json to_json(const Perturbation& h) {
  Json j = std::visit(Overloaded{
                          [](const TriangleBump& b) {
                            return Json{{"kind", "triangle"}, {"c", b.c}, {"eps", b.eps}, {"delta", b.delta}};
                          },
                          [](const SinusoidMode& s) { return Json{{"kind", "sinusoid"}, {"k", s.k}}; },
                          [](const FourierSine& f) {
                            return Json{{"kind", "fourier"},
                                        {"seed", f.seed},
                                        {"n_modes", f.n_modes},
                                        {"decay", f.decay},
                                        {"coefficients", vector_json(f.coefficients)}};
                          },
                      },
                      h.kind());
  j["sigma"] = h.sigma();
  if (h.dim() > 1) j["direction"] = vector_json(h.direction());
  return j;
}

Json to_json(const LagrangianSpec& spec) {
  return Json{{"damping", to_json(spec.damping)}, {"potential", to_json(spec.potential)}};
}

Json to_json(const VariationReport& report) {
  return Json{{"value", report.value},
              {"t1", report.t1},
              {"t2", report.t2},
              {"perturbation", to_json(report.perturbation)},
              {"spec", to_json(report.spec)}};
}

Json to_json(const ConjugateReport& report) {
  Json times = Json::array();
  for (double t : report.conjugate_times) times.push_back(t);
  return Json{{"eigen_lambda", std::isnan(report.eigen_lambda) ? Json(nullptr) : Json(report.eigen_lambda)},
              {"t1", report.t1},
              {"t2", report.t2},
              {"conjugate_times", times},
              {"method", to_string(report.method)}};
}

Json to_json(const Classification& c) {
  Json dirs = Json::array();
  for (const DirectionConjugacy& d : c.directions) {
    dirs.push_back(Json{{"eigen_lambda", d.eigen_lambda}, {"first_conjugate_time", optional_json(d.first_conjugate_time)}});
  }
  return Json{{"verdict", to_string(c.verdict)},
              {"t1", c.t1},
              {"t2", c.t2},
              {"legendre_holds", c.legendre_holds},
              {"directions", dirs},
              {"binding_eigenvalue", optional_json(c.binding_eigenvalue)},
              {"earliest_conjugate_time", optional_json(c.earliest_conjugate_time)}};
}

Potential potential_from_json(const Json& j) {
  const std::string what = "potential";
  require_object(j, what);
  const std::string kind = kind_of(j, what);
  if (kind == "quadratic") {
    require_keys(j, what, {"kind", "eigenvalues", "xstar"});
    Vector eig = number_vector(field(j, what, "eigenvalues"), what + ".eigenvalues");
    if (!j.contains("xstar")) return Potential::quadratic(std::move(eig));
    return Potential::quadratic(std::move(eig), number_vector(j.at("xstar"), what + ".xstar"));
  }
  if (kind == "polynomial") {
    require_keys(j, what, {"kind", "a", "p", "xstar"});
    return Potential::polynomial(number(j, what, "a"), static_cast<int>(integer(j, what, "p")),
                                 number_or(j, what, "xstar", 0.0));
  }
  if (kind == "zero") {
    require_keys(j, what, {"kind", "dim"});
    return Potential::zero(j.contains("dim") ? static_cast<int>(integer(j, what, "dim")) : 1);
  }
  throw std::invalid_argument(what + ".kind: unknown kind '" + kind + "'");
}

DampingSchedule damping_from_json(const Json& j) {
  const std::string what = "damping";
  require_object(j, what);
  const std::string kind = kind_of(j, what);
  if (kind == "vanishing") {
    require_keys(j, what, {"kind", "c"});
    return DampingSchedule::vanishing(number_or(j, what, "c", 3.0));
  }
  if (kind == "constant") {
    require_keys(j, what, {"kind", "alpha"});
    return DampingSchedule::constant(number(j, what, "alpha"));
  }
  throw std::invalid_argument(what + ".kind: unknown kind '" + kind + "'");
}

Perturbation perturbation_from_json(const Json& j, double t1, double t2) {
  const std::string what = "perturbation";
  require_object(j, what);
  const std::string kind = kind_of(j, what);
  const auto finish = [&](Perturbation h) {
    h = scale(h, number_or(j, what, "sigma", 1.0));
    if (j.contains("direction")) h = along(h, number_vector(j.at("direction"), what + ".direction"));
    return h;
  };
  if (kind == "triangle") {
    require_keys(j, what, {"kind", "c", "eps", "delta", "sigma", "direction"});
    const double c = number(j, what, "c"), eps = number(j, what, "eps");
    if (j.contains("delta")) return finish(triangle(c, eps, number(j, what, "delta"), t1, t2));
    return finish(triangle(c, eps, t1, t2));
  }
  if (kind == "sinusoid") {
    require_keys(j, what, {"kind", "k", "sigma", "direction"});
    return finish(sinusoid(static_cast<int>(integer(j, what, "k")), t1, t2));
  }
  if (kind == "fourier") {
    require_keys(j, what, {"kind", "seed", "n_modes", "decay", "sigma", "direction"});
    const long long seed = integer(j, what, "seed");
    if (seed < 0) throw std::invalid_argument(what + ".seed: must be nonnegative");
    return finish(fourier_sine(static_cast<std::uint64_t>(seed), static_cast<int>(integer(j, what, "n_modes")),
                               number(j, what, "decay"), t1, t2));
  }
  throw std::invalid_argument(what + ".kind: unknown kind '" + kind + "'");
}

}  // namespace vnag
