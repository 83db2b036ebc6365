#pragma once

#include "vnag/action.hpp"
#include "vnag/jacobi.hpp"

#include <json.hpp>

namespace vnag {

using Json = nlohmann::ordered_json;

/// δ²J of one perturbation together with the inputs that produced it.
struct VariationReport {
  double value;
  double t1;
  double t2;
  Perturbation perturbation;
  LagrangianSpec spec;
};

Json to_json(const Potential& pot);
Json to_json(const DampingSchedule& damping);
/// Descriptor form: kind, its parameters, and "sigma".
Json to_json(const Perturbation& h);
Json to_json(const LagrangianSpec& spec);
Json to_json(const VariationReport& report);
Json to_json(const ConjugateReport& report);
Json to_json(const Classification& c);

/// Parsers for the descriptor forms above.  Unknown or missing fields and
/// invalid parameters raise std::invalid_argument naming the offending key.
Potential potential_from_json(const Json& j);
DampingSchedule damping_from_json(const Json& j);
Perturbation perturbation_from_json(const Json& j, double t1, double t2);

}  // namespace vnag
