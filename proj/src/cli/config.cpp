#include "vnag/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace vnag::cli {

namespace {

void reject_unknown(const Json& j, const std::string& what, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(what + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) throw ConfigError(what + ": unknown field '" + item.key() + "'");
  }
}

double finite_number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(what + ": must be finite");
  return v;
}

std::vector<double> number_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array of numbers");
  std::vector<double> out;
  for (const Json& v : j) out.push_back(finite_number(v, what));
  return out;
}

Vector number_vector(const Json& j, const std::string& what) {
  if (j.is_number()) return Vector::Constant(1, finite_number(j, what));
  const std::vector<double> v = number_list(j, what);
  if (v.empty()) throw ConfigError(what + ": must not be empty");
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Sweep parse_sweep(const Json& j) {
  reject_unknown(j, "sweep", {"beta", "alpha", "eps", "c", "sigma", "lengths", "k"});
  Sweep s;
  const auto list = [&](const char* key, std::vector<double>& dst) {
    if (j.contains(key)) dst = number_list(j.at(key), std::string("sweep.") + key);
  };
  list("beta", s.beta);
  list("alpha", s.alpha);
  list("eps", s.eps);
  list("c", s.c);
  list("sigma", s.sigma);
  list("lengths", s.lengths);
  if (j.contains("k")) {
    const Json& k = j.at("k");
    if (!k.is_array()) throw ConfigError("sweep.k: expected an array of integers");
    for (const Json& v : k) {
      if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError("sweep.k: entries must be integers >= 1");
      s.k.push_back(static_cast<int>(v.get<long long>()));
    }
  }
  for (double b : s.beta) {
    if (!(b > 0.0)) throw ConfigError("sweep.beta: entries must be positive");
  }
  for (double a : s.alpha) {
    if (!(a > 0.0)) throw ConfigError("sweep.alpha: entries must be positive");
  }
  for (double e : s.eps) {
    if (!(e > 0.0)) throw ConfigError("sweep.eps: entries must be positive");
  }
  for (double l : s.lengths) {
    if (!(l > 0.0)) throw ConfigError("sweep.lengths: entries must be positive");
  }
  for (double sg : s.sigma) {
    if (!(sg >= 0.0)) throw ConfigError("sweep.sigma: entries must be nonnegative");
  }
  return s;
}

template <class F>
auto wrap(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(Json doc, std::optional<std::uint64_t> seed_override) {
  reject_unknown(doc, "config",
                 {"experiment", "potential", "damping", "interval", "integration", "initial", "perturbations", "sweep",
                  "bregman", "seed"});
  ExperimentConfig cfg;

  if (doc.contains("seed")) {
    const Json& s = doc.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0) throw ConfigError("seed: expected a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (seed_override) cfg.seed = *seed_override;
  doc["seed"] = cfg.seed;

  if (doc.contains("experiment")) {
    if (!doc.at("experiment").is_string()) throw ConfigError("experiment: expected a string");
    cfg.experiment = doc.at("experiment").get<std::string>();
  }
  if (doc.contains("potential")) cfg.potential = wrap("potential", [&] { return potential_from_json(doc.at("potential")); });
  if (doc.contains("damping")) cfg.damping = wrap("damping", [&] { return damping_from_json(doc.at("damping")); });

  if (doc.contains("interval")) {
    const Json& iv = doc.at("interval");
    reject_unknown(iv, "interval", {"t1", "t2"});
    if (!iv.contains("t1") || !iv.contains("t2")) throw ConfigError("interval: needs t1 and t2");
    Interval in{finite_number(iv.at("t1"), "interval.t1"), finite_number(iv.at("t2"), "interval.t2")};
    if (!(in.t1 < in.t2)) throw ConfigError("interval: t1 must be < t2");
    if (cfg.damping) wrap("interval", [&] { cfg.damping->require_time(in.t1); return 0; });
    cfg.interval = in;
  }

  if (doc.contains("integration")) {
    const Json& ig = doc.at("integration");
    reject_unknown(ig, "integration", {"n_steps"});
    if (ig.contains("n_steps")) {
      const Json& n = ig.at("n_steps");
      if (!n.is_number_integer() || n.get<long long>() < 4 || n.get<long long>() % 2 != 0 ||
          n.get<long long>() > 50'000'000) {
        throw ConfigError("integration.n_steps: expected an even integer in [4, 5e7]");
      }
      cfg.n_steps = n.get<std::size_t>();
    }
  }

  if (doc.contains("initial")) {
    const Json& in = doc.at("initial");
    reject_unknown(in, "initial", {"x0", "v0"});
    if (in.contains("x0")) cfg.x0 = number_vector(in.at("x0"), "initial.x0");
    if (in.contains("v0")) cfg.v0 = number_vector(in.at("v0"), "initial.v0");
    if (cfg.potential) {
      const int d = cfg.potential->dim();
      if ((cfg.x0 && cfg.x0->size() != d) || (cfg.v0 && cfg.v0->size() != d)) {
        throw ConfigError("initial: dimension does not match the potential");
      }
    }
  }

  if (doc.contains("perturbations")) {
    Json& list = doc.at("perturbations");
    if (!list.is_array()) throw ConfigError("perturbations: expected an array");
    for (Json& p : list) {
      if (p.is_object() && p.value("kind", "") == "fourier" && !p.contains("seed")) p["seed"] = cfg.seed;
    }
    cfg.perturbations = list;
  }

  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc.at("sweep"));

  if (doc.contains("bregman")) {
    const Json& b = doc.at("bregman");
    reject_unknown(b, "bregman", {"p", "scale"});
    BregmanSpec spec;
    if (b.contains("p")) spec.p = finite_number(b.at("p"), "bregman.p");
    if (b.contains("scale")) spec.scale = finite_number(b.at("scale"), "bregman.scale");
    if (!(spec.p > 0.0) || !(spec.scale > 0.0)) throw ConfigError("bregman: p and scale must be positive");
    cfg.bregman = spec;
  }

  if (cfg.interval && !cfg.perturbations.empty()) {
    build_perturbations(cfg, cfg.interval->t1, cfg.interval->t2);
  }
  cfg.echo = std::move(doc);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(std::move(doc), seed_override);
}

std::vector<Perturbation> build_perturbations(const ExperimentConfig& cfg, double t1, double t2) {
  std::vector<Perturbation> out;
  for (std::size_t i = 0; i < cfg.perturbations.size(); ++i) {
    const std::string what = "perturbations[" + std::to_string(i) + "]";
    out.push_back(wrap(what, [&] { return perturbation_from_json(cfg.perturbations[i], t1, t2); }));
    if (cfg.potential && out.back().dim() != cfg.potential->dim()) {
      if (out.back().dim() != 1) throw ConfigError(what + ": direction dimension does not match the potential");
      out.back() = along(out.back(), Vector::Unit(cfg.potential->dim(), 0));
    }
  }
  return out;
}

const Potential& require_potential(const ExperimentConfig& cfg) {
  if (!cfg.potential) throw ConfigError("config: missing 'potential'");
  return *cfg.potential;
}

const DampingSchedule& require_damping(const ExperimentConfig& cfg) {
  if (!cfg.damping) throw ConfigError("config: missing 'damping'");
  return *cfg.damping;
}

const Interval& require_interval(const ExperimentConfig& cfg) {
  if (!cfg.interval) throw ConfigError("config: missing 'interval'");
  return *cfg.interval;
}

}  // namespace vnag::cli
