#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ginibeta/asymptotics.hpp"
#include "ginibeta/empirical.hpp"
#include "ginibeta/estimators.hpp"
#include "ginibeta/inference.hpp"
#include "ginibeta/model.hpp"
#include "ginibeta/moments.hpp"
#include "ginibeta/quadrature.hpp"
#include "ginibeta/simulation.hpp"
#include "ginibeta/weights.hpp"

namespace ginibeta::io {

using Json = nlohmann::ordered_json;

// Two numeric columns, comma separated, optional header (detected by a
// non-numeric first row). Columns are (x, y) unless y_first. Every bad line
// is reported with its line number in a single Error(ingestion).
PairedSample read_csv(std::istream& in, bool y_first = false, std::string_view source = "<stream>");
PairedSample ingest_csv(const std::string& path, bool y_first = false);

// "pht:0.75", "cte:0.95", "identity", or a JSON object
// {"family":"pht","nu":0.75} / {"family":"tabulated","grid":[[t,w],...]}.
WeightFunction parse_weight(std::string_view spec);
WeightFunction weight_from_json(const Json& j);
Json weight_to_json(const WeightFunction& w);

// {"family":"gaussian","mu_x":0,"mu_y":0,"var_x":1,"var_y":1,"rho":0.6},
// {"family":"linear-uniform","a":0,"c":1,"sigma":0.1},
// {"family":"quadratic-uniform"|"lognormal"|"pareto","sigma":0.1};
// shorthand strings "gaussian:RHO" and "FIXTURE:SIGMA".
BivariateModel parse_model(std::string_view spec);
BivariateModel model_from_json(const Json& j);

// Orders may be a number, "inf", or {"order": p, "attained": bool}.
MomentProfile moments_from_json(const Json& j);
Json moments_to_json(const MomentProfile& m);

QuadratureSpec quadrature_from_json(const Json& j, QuadratureSpec base = {});
Json quadrature_to_json(const QuadratureSpec& q);
BootstrapSpec bootstrap_from_json(const Json& j, BootstrapSpec base = {});
Json bootstrap_to_json(const BootstrapSpec& b);
MonteCarloPlan plan_from_json(const Json& j);

Json to_json(const BetaEstimates& e);
Json to_json(const InferenceReport& r);
Json to_json(const VarianceComponents& v);
Json to_json(const AssumptionReport& r);
Json to_json(const MonteCarloResult& r);

// Reads a whole file as JSON; Error(ingestion) on failure.
Json read_json_file(const std::string& path);

// Pretty-prints with every floating-point value written with 17 significant
// digits; non-finite values become null.
std::string dump(const Json& j);

}  // namespace ginibeta::io
