#include "vnag/cli/config.hpp"
#include "vnag/serialize.hpp"

#include <doctest.h>

#include <cmath>

using namespace vnag;
using vnag::cli::ConfigError;
using vnag::cli::parse_config;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

}  // namespace

TEST_CASE("potential round trip") {
  Vector eig(2), xs(2);
  eig << 2e-2, 3e-4;
  xs << 1.0, -0.5;
  for (const Potential& p : {Potential::quadratic(eig, xs), Potential::polynomial(1.5, 4, 0.25), Potential::zero(3)}) {
    const Json j = to_json(p);
    const Potential back = potential_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.dim() == p.dim());
  }
  CHECK(to_json(Potential::quadratic(eig, xs)).dump() ==
        R"({"kind":"quadratic","eigenvalues":[0.02,0.0003],"xstar":[1.0,-0.5]})");
}

TEST_CASE("damping round trip") {
  for (const DampingSchedule& d : {DampingSchedule::vanishing(3.0), DampingSchedule::vanishing(4.5),
                                   DampingSchedule::constant(0.2)}) {
    const Json j = to_json(d);
    CHECK(to_json(damping_from_json(j)) == j);
  }
  CHECK(damping_from_json(Json::parse(R"({"kind":"vanishing"})")).c() == 3.0);
}

TEST_CASE("perturbation round trip") {
  const Perturbation tri = scale(triangle(2.0, 1.0, 0.5, 3.5), 2.5);
  const Perturbation back = perturbation_from_json(to_json(tri), 0.5, 3.5);
  for (double t : {0.7, 1.5, 2.0, 2.99}) CHECK(back.profile(t) == tri.profile(t));
  CHECK(back.sigma() == 2.5);

  const Perturbation f = fourier_sine(11, 4, 1.5, 0.0, 2.0);
  Json fj = to_json(f);
  fj.erase("coefficients");
  CHECK(perturbation_from_json(fj, 0.0, 2.0).profile(0.77) == f.profile(0.77));

  const Perturbation s = sinusoid(3, 0.0, 1.0);
  CHECK(perturbation_from_json(to_json(s), 0.0, 1.0).profile(0.3) == s.profile(0.3));
}

TEST_CASE("report serialization") {
  const LagrangianSpec spec{DampingSchedule::vanishing(3.0), Potential::quadratic(scalar(1.0))};
  const Perturbation h = triangle(2.0, 1.0, 0.5, 3.5);
  const Json r = to_json(VariationReport{7.25, 0.5, 3.5, h, spec});
  CHECK(r.at("value") == 7.25);
  CHECK(r.at("t1") == 0.5);
  CHECK(r.at("t2") == 3.5);
  CHECK(r.at("perturbation").at("kind") == "triangle");
  CHECK(r.at("spec").at("damping").at("kind") == "vanishing");
  std::vector<std::string> keys;
  for (const auto& item : r.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"value", "t1", "t2", "perturbation", "spec"});

  const ConjugateReport c = conjugate_points_closed(spec, 1.0, 1.0, 20.0);
  const Json cj = to_json(c);
  CHECK(cj.at("method") == "ClosedForm");
  REQUIRE(cj.at("conjugate_times").size() == c.conjugate_times.size());
  // 17 significant digits survive the text form
  const Json reparsed = Json::parse(cj.dump());
  for (std::size_t i = 0; i < c.conjugate_times.size(); ++i) {
    CHECK(reparsed.at("conjugate_times")[i].get<double>() == c.conjugate_times[i]);
  }

  const Classification cl = classify(Potential::quadratic(scalar(1.0)), DampingSchedule::constant(2.0), 0.0, 5.0);
  const Json clj = to_json(cl);
  CHECK(clj.at("verdict") == "Minimizer");
  CHECK(clj.at("binding_eigenvalue").is_null());
  CHECK(clj.at("directions")[0].at("first_conjugate_time").is_null());
}

TEST_CASE("descriptor errors") {
  CHECK_THROWS_AS(potential_from_json(Json::parse(R"({"kind":"cubic"})")), std::invalid_argument);
  CHECK_THROWS_AS(potential_from_json(Json::parse(R"({"kind":"quadratic","eigenvalues":[1],"extra":1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(potential_from_json(Json::parse(R"({"kind":"quadratic","eigenvalues":[-1]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(damping_from_json(Json::parse(R"({"kind":"constant"})")), std::invalid_argument);
  CHECK_THROWS_AS(damping_from_json(Json::parse(R"({"kind":"constant","alpha":"x"})")), std::invalid_argument);
  CHECK_THROWS_AS(perturbation_from_json(Json::parse(R"({"kind":"sinusoid","k":0})"), 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(perturbation_from_json(Json::parse(R"({"kind":"triangle","c":0.5,"eps":1})"), 0.0, 3.0),
                  std::invalid_argument);
}

TEST_CASE("config parsing") {
  const Json doc = Json::parse(R"({
    "experiment": "second-variation",
    "potential": {"kind": "quadratic", "eigenvalues": [1.0]},
    "damping": {"kind": "vanishing", "c": 3},
    "interval": {"t1": 0.5, "t2": 3.5},
    "integration": {"n_steps": 200},
    "perturbations": [{"kind": "fourier", "n_modes": 3, "decay": 1.0}],
    "sweep": {"c": [2.0], "eps": [0.5, 1.0], "k": [1, 2]},
    "seed": 5
  })");
  const cli::ExperimentConfig cfg = parse_config(doc);
  CHECK(cfg.experiment == "second-variation");
  CHECK(cfg.n_steps == 200);
  CHECK(cfg.seed == 5);
  CHECK(cfg.perturbations[0].at("seed") == 5);
  CHECK(cfg.sweep.eps == std::vector<double>{0.5, 1.0});
  CHECK(cfg.sweep.k == std::vector<int>{1, 2});

  const cli::ExperimentConfig over = parse_config(doc, 9);
  CHECK(over.seed == 9);
  CHECK(over.perturbations[0].at("seed") == 9);
  CHECK(over.echo.at("seed") == 9);

  const auto bad = [&](const char* patch) {
    Json d = doc;
    d.merge_patch(Json::parse(patch));
    return d;
  };
  CHECK_THROWS_AS(parse_config(bad(R"({"unknown": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad(R"({"interval": {"t1": 2, "t2": 1}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad(R"({"interval": {"t1": 0, "t2": 1}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad(R"({"integration": {"n_steps": 201}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad(R"({"sweep": {"eps": [-1]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad(R"({"sweep": {"mu": [1]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad(R"({"damping": {"kind": "constant", "alpha": -1}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad(R"({"seed": -3})")), ConfigError);
  CHECK_THROWS_AS(parse_config(bad(R"({"perturbations": [{"kind": "sinusoid", "k": 1, "colour": 2}]})")),
                  ConfigError);
}
