#include "ginibeta/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ginibeta/asymptotics.hpp"
#include "ginibeta/error.hpp"
#include "ginibeta/estimators.hpp"
#include "ginibeta/io.hpp"
#include "ginibeta/kernels.hpp"
#include "ginibeta/simulation.hpp"
#include "ginibeta/weights.hpp"

namespace ginibeta::cli {
namespace {

using io::Json;

Json error_json(const std::string& command, std::string_view kind, const std::string& message, int code) {
  Json j;
  j["error"] = Json{{"kind", std::string(kind)}, {"message", message}, {"exit_code", code}};
  j["command"] = command;
  return j;
}

const std::string& need(const std::optional<std::string>& v, const char* flag, const std::string& command) {
  if (!v) fail(ErrorKind::usage, command + " requires " + flag);
  return *v;
}

// Text of a user-supplied spec for the echo: JSON when it parses as JSON,
// the raw string otherwise.
Json spec_echo(const std::string& text) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::exception&) {
    }
  }
  return text;
}

struct Report {
  Json inputs = Json::object();
  Json results = Json::object();
  Json warnings = Json::array();
};

Report do_estimate(const RunConfig& c) {
  Report r;
  const std::string& path = need(c.input_path, "--input", c.command);
  const WeightFunction w = io::parse_weight(need(c.weight, "--weight", c.command));
  const PairedSample s = io::ingest_csv(path, c.y_first);
  const BetaEstimates e = delta_hat(s, w);
  r.inputs["input"] = path;
  r.inputs["columns"] = c.y_first ? "y,x" : "x,y";
  r.inputs["n"] = s.size();
  r.inputs["weight"] = io::weight_to_json(w);
  r.results = io::to_json(e);
  r.results["n"] = s.size();
  if (e.tie_count > 0)
    r.warnings.push_back(std::to_string(e.tie_count) +
                         " tied y-value(s): the general empirical-cdf form was used; distributional results assume "
                         "a continuous F_Y");
  return r;
}

Report do_infer(const RunConfig& c) {
  Report r;
  const std::string& path = need(c.input_path, "--input", c.command);
  const WeightFunction w = io::parse_weight(need(c.weight, "--weight", c.command));
  const PairedSample s = io::ingest_csv(path, c.y_first);
  BootstrapSpec spec = c.bootstrap.value_or(BootstrapSpec{});
  if (c.seed) spec.seed = *c.seed;
  const InferenceReport rep = bootstrap_delta(s, w, spec);
  r.inputs["input"] = path;
  r.inputs["columns"] = c.y_first ? "y,x" : "x,y";
  r.inputs["n"] = s.size();
  r.inputs["weight"] = io::weight_to_json(w);
  r.inputs["bootstrap"] = io::bootstrap_to_json(spec);
  r.results = io::to_json(rep);
  if (rep.bootstrap_failures > 0)
    r.warnings.push_back(std::to_string(rep.bootstrap_failures) + " degenerate resample(s) dropped");
  if (rep.unscaled_interval) r.warnings.push_back(rep.interval_note);
  if (rep.point.tie_count > 0)
    r.warnings.push_back(std::to_string(rep.point.tie_count) + " tied y-value(s) in the sample");
  return r;
}

Report do_variance(const RunConfig& c) {
  Report r;
  const std::string& model_text = need(c.model, "--model", c.command);
  const BivariateModel m = io::parse_model(model_text);
  const WeightFunction w = io::parse_weight(need(c.weight, "--weight", c.command));
  const QuadratureSpec q = c.quadrature.value_or(QuadratureSpec{});
  r.inputs["model"] = spec_echo(model_text);
  r.inputs["model_name"] = m.name;
  r.inputs["weight"] = io::weight_to_json(w);
  r.inputs["quadrature"] = io::quadrature_to_json(q);
  const VarianceComponents vc = asymptotic_variance(m, w, q);
  r.results = io::to_json(vc);
  if (m.gaussian) {
    const auto& g = *m.gaussian;
    r.results["gaussian_upsilon1_sq"] =
        g.rho != 0.0 ? Json(gaussian_upsilon1_sq(g.rho, g.cov_xy, g.var_y, w, q)) : Json(nullptr);
  }
  for (const auto& wmsg : vc.warnings) r.warnings.push_back(wmsg);
  return r;
}

Report do_simulate(const RunConfig& c) {
  Report r;
  const std::string& path = need(c.plan_path, "--plan", c.command);
  const Json pj = io::read_json_file(path);
  MonteCarloPlan plan = io::plan_from_json(pj);
  if (c.seed) plan.seed = *c.seed;
  r.inputs["plan_path"] = path;
  r.inputs["plan"] = pj;
  r.inputs["seed"] = plan.seed;
  const MonteCarloResult res = run_plan(plan);
  r.results = io::to_json(res);
  for (const auto& n : res.notes) r.warnings.push_back(n);
  return r;
}

Report do_check(const RunConfig& c) {
  Report r;
  const WeightFunction w = io::parse_weight(need(c.weight, "--weight", c.command));
  const Theorem th = parse_theorem(need(c.theorem, "--theorem", c.command));
  MomentProfile mp;
  if (c.model && c.moments) fail(ErrorKind::usage, "give either --model or --moments, not both");
  if (c.model) {
    mp = io::parse_model(*c.model).moments;
    r.inputs["model"] = spec_echo(*c.model);
  } else if (c.moments) {
    try {
      mp = io::moments_from_json(Json::parse(*c.moments));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::usage, std::string("invalid JSON in --moments: ") + e.what());
    }
  }
  r.inputs["weight"] = io::weight_to_json(w);
  r.inputs["theorem"] = std::string(theorem_tag(th));
  r.inputs["moments"] = io::moments_to_json(mp);
  const AssumptionReport rep = check_theorem_assumptions(w, th, mp);
  r.results = io::to_json(rep);
  if (rep.numeric_only)
    r.warnings.push_back("weight certificates are numeric-only (dense-grid checks on a tabulated weight)");
  return r;
}

}  // namespace

RunOutcome run(const RunConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  try {
    Report rep;
    if (c.command == "estimate") rep = do_estimate(c);
    else if (c.command == "infer") rep = do_infer(c);
    else if (c.command == "variance") rep = do_variance(c);
    else if (c.command == "simulate") rep = do_simulate(c);
    else if (c.command == "check-assumptions") rep = do_check(c);
    else fail(ErrorKind::usage, "unknown command '" + c.command + "'");
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = c.command;
    doc["inputs_echo"] = rep.inputs;
    doc["results"] = rep.results;
    doc["warnings"] = rep.warnings;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    doc["timing"] = Json{{"wall_seconds", secs}, {"simd_backend", std::string(kernels::backend_name(kernels::active_backend()))}};
    out.report = io::dump(doc);
    out.exit_code = 0;
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e.kind());
    out.error = io::dump(error_json(c.command, error_kind_name(e.kind()), e.what(), out.exit_code));
  } catch (const std::exception& e) {
    out.exit_code = exit_code_for(ErrorKind::internal_inconsistency);
    out.error = io::dump(error_json(c.command, error_kind_name(ErrorKind::internal_inconsistency), e.what(),
                                    out.exit_code));
  }
  return out;
}

namespace {

struct Flags {
  std::string input, weight, theorem, model, moments, plan, output, config, columns, scheme, ci_method, quadrature;
  std::size_t reps = 0, m = 0;
  double level = 0.0;
  std::uint64_t seed = 0;
};

// Overlays the --config JSON file and then explicit flags onto a RunConfig.
RunConfig build_config(const std::string& command, const Flags& f, const CLI::App& sub) {
  RunConfig c;
  c.command = command;
  auto given = [&](const char* name) { return sub.get_option_no_throw(name) && sub.count(name) > 0; };
  auto text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };

  BootstrapSpec boot;
  bool have_boot = false;
  if (given("--config")) {
    const Json j = io::read_json_file(f.config);
    if (!j.is_object()) fail(ErrorKind::usage, "--config file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = it.value();
      if (k == "input") c.input_path = text(v);
      else if (k == "weight") c.weight = text(v);
      else if (k == "theorem") c.theorem = text(v);
      else if (k == "model") c.model = text(v);
      else if (k == "moments") c.moments = text(v);
      else if (k == "plan") c.plan_path = text(v);
      else if (k == "output") c.output_path = text(v);
      else if (k == "columns") c.y_first = text(v) == "y,x";
      else if (k == "seed") {
        if (!v.is_number_unsigned()) fail(ErrorKind::usage, "config 'seed' must be a non-negative integer");
        c.seed = v.get<std::uint64_t>();
      } else if (k == "bootstrap") {
        boot = io::bootstrap_from_json(v, boot);
        have_boot = true;
      } else if (k == "quadrature") {
        c.quadrature = io::quadrature_from_json(v);
      } else {
        fail(ErrorKind::usage, "unknown field '" + k + "' in --config file");
      }
    }
  }
  if (given("--input")) c.input_path = f.input;
  if (given("--weight")) c.weight = f.weight;
  if (given("--theorem")) c.theorem = f.theorem;
  if (given("--model")) c.model = f.model;
  if (given("--moments")) c.moments = f.moments;
  if (given("--plan")) c.plan_path = f.plan;
  if (given("--output")) c.output_path = f.output;
  if (given("--seed")) c.seed = f.seed;
  if (given("--columns")) {
    if (f.columns != "x,y" && f.columns != "y,x") fail(ErrorKind::usage, "--columns must be 'x,y' or 'y,x'");
    c.y_first = f.columns == "y,x";
  }
  if (given("--quadrature")) {
    try {
      c.quadrature = io::quadrature_from_json(Json::parse(f.quadrature), c.quadrature.value_or(QuadratureSpec{}));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::usage, std::string("invalid JSON in --quadrature: ") + e.what());
    }
  }
  if (given("--bootstrap-reps")) boot.replicates = f.reps, have_boot = true;
  if (given("--scheme")) boot.scheme = parse_scheme(f.scheme), have_boot = true;
  if (given("--m")) boot.m = f.m, have_boot = true;
  if (given("--level")) boot.level = f.level, have_boot = true;
  if (given("--ci-method")) boot.ci_method = parse_ci_method(f.ci_method), have_boot = true;
  if (have_boot) c.bootstrap = boot;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical vs weighted-Gini beta: estimation, bootstrap inference, asymptotic variance and Monte Carlo "
               "validation"};
  app.require_subcommand(1);
  Flags f;

  auto add_config = [&](CLI::App* s) { s->add_option("--config", f.config, "JSON file with default settings"); };
  auto add_output = [&](CLI::App* s) { s->add_option("--output", f.output, "write the JSON report here (default stdout)"); };
  auto add_weight = [&](CLI::App* s) {
    s->add_option("--weight", f.weight, "pht:NU | cte:NU | identity | JSON weight object");
  };
  auto add_data = [&](CLI::App* s) {
    s->add_option("--input", f.input, "CSV file with two numeric columns");
    s->add_option("--columns", f.columns, "column order: x,y (default) or y,x");
  };

  CLI::App* estimate = app.add_subcommand("estimate", "point estimates of beta, beta_G and delta");
  add_data(estimate);
  add_weight(estimate);
  add_output(estimate);
  add_config(estimate);

  CLI::App* infer = app.add_subcommand("infer", "bootstrap confidence interval and test of delta = 0");
  add_data(infer);
  add_weight(infer);
  add_output(infer);
  add_config(infer);
  infer->add_option("--bootstrap-reps", f.reps, "number of resamples (>= 100, default 2000)");
  infer->add_option("--scheme", f.scheme, "naive | m_out_of_n");
  infer->add_option("--m", f.m, "resample size for m_out_of_n (default ceil(n^(2/3)))");
  infer->add_option("--level", f.level, "confidence level (default 0.95)");
  infer->add_option("--ci-method", f.ci_method, "percentile (default) | basic");
  infer->add_option("--seed", f.seed, "64-bit seed");

  CLI::App* variance = app.add_subcommand("variance", "asymptotic variance components for a model");
  variance->add_option("--model", f.model, "gaussian:RHO | quadratic-uniform:SIGMA | lognormal:SIGMA | pareto:SIGMA | JSON");
  add_weight(variance);
  variance->add_option("--quadrature", f.quadrature, "JSON quadrature settings");
  add_output(variance);
  add_config(variance);

  CLI::App* simulate = app.add_subcommand("simulate", "run a Monte Carlo plan");
  simulate->add_option("--plan", f.plan, "JSON plan file");
  simulate->add_option("--seed", f.seed, "override the plan seed");
  add_output(simulate);
  add_config(simulate);

  CLI::App* check = app.add_subcommand("check-assumptions", "check a weight against theorem conditions");
  add_weight(check);
  check->add_option("--theorem", f.theorem, "T1 | T2 | T3");
  check->add_option("--moments", f.moments, "JSON moment profile");
  check->add_option("--model", f.model, "take the moment profile from a built-in model");
  add_output(check);
  add_config(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const int code = exit_code_for(ErrorKind::usage);
    std::cerr << io::dump(error_json("", error_kind_name(ErrorKind::usage), e.what(), code));
    return code;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunOutcome out;
  RunConfig config;
  try {
    config = build_config(sub->get_name(), f, *sub);
    out = run(config);
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e.kind());
    out.error = io::dump(error_json(sub->get_name(), error_kind_name(e.kind()), e.what(), out.exit_code));
  }
  if (out.exit_code != 0) {
    std::cerr << out.error;
    return out.exit_code;
  }
  if (config.output_path) {
    std::ofstream os(*config.output_path, std::ios::binary);
    if (!os || !(os << out.report)) {
      const int code = exit_code_for(ErrorKind::ingestion);
      std::cerr << io::dump(error_json(config.command, error_kind_name(ErrorKind::ingestion),
                                       "cannot write output file '" + *config.output_path + "'", code));
      return code;
    }
  } else {
    std::cout << out.report;
  }
  return 0;
}

}  // namespace ginibeta::cli
