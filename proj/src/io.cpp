#include "ginibeta/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <vector>

#include "ginibeta/error.hpp"

namespace ginibeta::io {
namespace {

constexpr std::size_t kMaxReportedLines = 20;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Parses a whole field as a double; nullopt if it is not a number.
std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::invalid_parameter, what); }

const Json& require(const Json& j, const char* key, const char* ctx) {
  if (!j.is_object() || !j.contains(key)) bad(std::string(ctx) + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* key, const char* ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_number()) bad(std::string(ctx) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const char* ctx) {
  return j.is_object() && j.contains(key) ? number(j, key, ctx) : fallback;
}

std::uint64_t unsigned_field(const Json& j, const char* key, const char* ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    bad(std::string(ctx) + ": field '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string string_field(const Json& j, const char* key, const char* ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_string()) bad(std::string(ctx) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::pair<std::string_view, std::optional<double>> split_shorthand(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) return {spec, std::nullopt};
  const auto v = parse_number(trim(spec.substr(colon + 1)));
  if (!v) bad("expected a number after ':' in '" + std::string(spec) + "'");
  return {trim(spec.substr(0, colon)), v};
}

Json parse_json_text(std::string_view text, const char* what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::usage, std::string("invalid JSON in ") + what + ": " + e.what());
  }
}

MomentBound bound_from_json(const Json& v, const char* key) {
  if (v.is_string() && v.get<std::string>() == "inf") return MomentBound::all();
  if (v.is_number()) {
    const double p = v.get<double>();
    if (!(p >= 0.0)) bad(std::string("moments: '") + key + "' must be >= 0");
    return MomentBound{p, true};
  }
  if (v.is_object()) {
    MomentBound b;
    const Json& o = require(v, "order", "moments");
    b.order = o.is_string() && o.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity()
                                                              : number(v, "order", "moments");
    b.attained = v.value("attained", false);
    return b;
  }
  bad(std::string("moments: '") + key + "' must be a number, \"inf\" or {\"order\",\"attained\"}");
}

Json bound_to_json(const MomentBound& b) {
  Json j;
  if (std::isinf(b.order))
    j["order"] = "inf";
  else
    j["order"] = b.order;
  j["attained"] = b.attained;
  return j;
}

template <class T>
Json optional_number(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json history_json(const std::vector<double>& h) {
  Json a = Json::array();
  for (double v : h) a.push_back(v);
  return a;
}

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += Json(it.key()).dump();
        out += ": ";
        emit(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          emit(e, out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        emit(e, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default: out += j.dump(); return;
  }
}

}  // namespace

PairedSample read_csv(std::istream& in, bool y_first, std::string_view source) {
  std::vector<double> xs, ys;
  std::vector<std::string> problems;
  std::size_t bad_lines = 0;
  auto report = [&](std::size_t line, const std::string& msg) {
    ++bad_lines;
    if (problems.size() < kMaxReportedLines) problems.push_back("line " + std::to_string(line) + ": " + msg);
  };
  std::string raw;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line = trim(line.substr(3));
    if (line.empty()) {
      report(line_no, "empty line");
      first_content = false;
      continue;
    }
    const auto fields = split_commas(line);
    if (first_content) {
      first_content = false;
      const bool numeric_row = std::all_of(fields.begin(), fields.end(),
                                           [](std::string_view f) { return parse_number(f).has_value(); });
      if (!numeric_row) {
        if (fields.size() != 2) report(line_no, "header must name exactly two columns");
        continue;  // header
      }
    }
    if (fields.size() != 2) {
      report(line_no, "expected 2 fields, found " + std::to_string(fields.size()));
      continue;
    }
    const auto a = parse_number(fields[0]);
    const auto b = parse_number(fields[1]);
    if (!a || !b) {
      report(line_no, "non-numeric field '" + std::string(!a ? fields[0] : fields[1]) + "'");
      continue;
    }
    if (!std::isfinite(*a) || !std::isfinite(*b)) {
      report(line_no, "non-finite value '" + std::string(!std::isfinite(*a) ? fields[0] : fields[1]) + "'");
      continue;
    }
    xs.push_back(y_first ? *b : *a);
    ys.push_back(y_first ? *a : *b);
  }
  if (in.bad()) fail(ErrorKind::ingestion, std::string(source) + ": read error");
  if (bad_lines > 0) {
    std::string msg = std::string(source) + ": " + std::to_string(bad_lines) + " invalid line(s)";
    for (const auto& p : problems) msg += "; " + p;
    if (bad_lines > problems.size()) msg += "; ...";
    fail(ErrorKind::ingestion, msg);
  }
  if (xs.size() < 2)
    fail(ErrorKind::ingestion, std::string(source) + ": need at least 2 data rows, found " + std::to_string(xs.size()));
  return PairedSample(std::move(xs), std::move(ys));
}

PairedSample ingest_csv(const std::string& path, bool y_first) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ingestion, "cannot open input file '" + path + "'");
  return read_csv(in, y_first, path);
}

WeightFunction weight_from_json(const Json& j) {
  if (j.is_string()) return parse_weight(j.get<std::string>());
  const std::string family = string_field(j, "family", "weight");
  if (family == "pht") return make_pht(number(j, "nu", "weight"));
  if (family == "cte") return make_cte(number(j, "nu", "weight"));
  if (family == "identity") return make_identity();
  if (family == "tabulated") {
    const Json& g = require(j, "grid", "weight");
    if (!g.is_array()) bad("weight: 'grid' must be an array of [t, w] pairs");
    std::vector<TabulatedPoint> pts;
    for (const auto& p : g) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        bad("weight: every grid entry must be a [t, w] pair of numbers");
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return make_tabulated(std::move(pts));
  }
  bad("weight: unknown family '" + family + "' (pht | cte | tabulated | identity)");
}

WeightFunction parse_weight(std::string_view spec) {
  spec = trim(spec);
  if (!spec.empty() && spec.front() == '{') return weight_from_json(parse_json_text(spec, "weight"));
  const auto [name, value] = split_shorthand(spec);
  if (name == "identity" && !value) return make_identity();
  if (name == "pht" && value) return make_pht(*value);
  if (name == "cte" && value) return make_cte(*value);
  fail(ErrorKind::usage, "unrecognized weight '" + std::string(spec) + "' (pht:NU | cte:NU | identity | JSON object)");
}

Json weight_to_json(const WeightFunction& w) {
  Json j;
  j["family"] = std::string(family_name(w.family()));
  if (w.family() == WeightFamily::tabulated) {
    Json g = Json::array();
    for (const auto& p : w.grid()) g.push_back(Json::array({p.t, p.w}));
    j["grid"] = g;
  } else {
    j["nu"] = w.parameter();
  }
  j["description"] = w.describe();
  j["continuity"] = std::string(continuity_name(w.continuity()));
  Json d = Json::array();
  for (double t : w.discontinuities()) d.push_back(t);
  j["discontinuities"] = d;
  if (w.growth().unbounded_growth) {
    j["b_exponent"] = "unbounded-growth";
  } else {
    j["b_exponent"] = w.growth().b;
    j["growth_constant"] = w.growth().c;
  }
  j["numeric_only"] = w.numeric_only();
  return j;
}

BivariateModel model_from_json(const Json& j) {
  if (j.is_string()) return parse_model(j.get<std::string>());
  const std::string family = string_field(j, "family", "model");
  if (family == "gaussian")
    return make_gaussian_model(number_or(j, "mu_x", 0.0, "model"), number_or(j, "mu_y", 0.0, "model"),
                               number_or(j, "var_x", 1.0, "model"), number_or(j, "var_y", 1.0, "model"),
                               number(j, "rho", "model"));
  if (family == "linear-uniform")
    return make_linear_uniform_model(number_or(j, "a", 0.0, "model"), number_or(j, "c", 1.0, "model"),
                                     number_or(j, "sigma", 0.0, "model"));
  return make_nonlinear_model(parse_fixture(family), number_or(j, "sigma", 0.1, "model"));
}

BivariateModel parse_model(std::string_view spec) {
  spec = trim(spec);
  if (!spec.empty() && spec.front() == '{') return model_from_json(parse_json_text(spec, "model"));
  const auto [name, value] = split_shorthand(spec);
  if (name == "gaussian") {
    if (!value) fail(ErrorKind::usage, "gaussian model shorthand needs a correlation: gaussian:RHO");
    return make_gaussian_model(0.0, 0.0, 1.0, 1.0, *value);
  }
  return make_nonlinear_model(parse_fixture(name), value.value_or(0.1));
}

MomentProfile moments_from_json(const Json& j) {
  if (!j.is_object()) bad("moments must be a JSON object");
  MomentProfile m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    auto flag = [&]() {
      if (!v.is_boolean()) bad("moments: '" + k + "' must be true or false");
      return v.get<bool>();
    };
    if (k == "x_moment") m.x_moment = bound_from_json(v, "x_moment");
    else if (k == "y_moment") m.y_moment = bound_from_json(v, "y_moment");
    else if (k == "cond_second_moment") m.cond_second_moment = bound_from_json(v, "cond_second_moment");
    else if (k == "cross_moment_finite") m.cross_moment_finite = flag();
    else if (k == "cdf_continuous") m.cdf_continuous = flag();
    else if (k == "quantile_regression_continuous") m.quantile_regression_continuous = flag();
    else if (k == "cond_var_growth") m.cond_var_growth = number(j, "cond_var_growth", "moments");
    else bad("moments: unknown field '" + k + "'");
  }
  return m;
}

Json moments_to_json(const MomentProfile& m) {
  Json j = Json::object();
  if (m.x_moment) j["x_moment"] = bound_to_json(*m.x_moment);
  if (m.y_moment) j["y_moment"] = bound_to_json(*m.y_moment);
  if (m.cross_moment_finite) j["cross_moment_finite"] = *m.cross_moment_finite;
  if (m.cond_second_moment) j["cond_second_moment"] = bound_to_json(*m.cond_second_moment);
  if (m.cond_var_growth) j["cond_var_growth"] = *m.cond_var_growth;
  if (m.cdf_continuous) j["cdf_continuous"] = *m.cdf_continuous;
  if (m.quantile_regression_continuous) j["quantile_regression_continuous"] = *m.quantile_regression_continuous;
  return j;
}

QuadratureSpec quadrature_from_json(const Json& j, QuadratureSpec q) {
  if (!j.is_object()) bad("quadrature must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "grid_size") q.grid_size = unsigned_field(j, "grid_size", "quadrature");
    else if (k == "eps_q") q.eps_q = number(j, "eps_q", "quadrature");
    else if (k == "refine_tol") q.refine_tol = number(j, "refine_tol", "quadrature");
    else if (k == "max_refinements") q.max_refinements = static_cast<int>(unsigned_field(j, "max_refinements", "quadrature"));
    else bad("quadrature: unknown field '" + k + "'");
  }
  q.validate();
  return q;
}

Json quadrature_to_json(const QuadratureSpec& q) {
  Json j;
  j["grid_size"] = q.grid_size;
  j["eps_q"] = q.eps_q;
  j["refine_tol"] = q.refine_tol;
  j["max_refinements"] = q.max_refinements;
  return j;
}

BootstrapSpec bootstrap_from_json(const Json& j, BootstrapSpec b) {
  if (!j.is_object()) bad("bootstrap must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "replicates") b.replicates = unsigned_field(j, "replicates", "bootstrap");
    else if (k == "scheme") b.scheme = parse_scheme(string_field(j, "scheme", "bootstrap"));
    else if (k == "m") b.m = it.value().is_null() ? std::nullopt : std::optional(unsigned_field(j, "m", "bootstrap"));
    else if (k == "level") b.level = number(j, "level", "bootstrap");
    else if (k == "ci_method") b.ci_method = parse_ci_method(string_field(j, "ci_method", "bootstrap"));
    else if (k == "seed") b.seed = unsigned_field(j, "seed", "bootstrap");
    else bad("bootstrap: unknown field '" + k + "'");
  }
  return b;
}

Json bootstrap_to_json(const BootstrapSpec& b) {
  Json j;
  j["replicates"] = b.replicates;
  j["scheme"] = std::string(scheme_name(b.scheme));
  j["m"] = b.m ? Json(*b.m) : Json(nullptr);
  j["level"] = b.level;
  j["ci_method"] = std::string(ci_method_name(b.ci_method));
  j["seed"] = b.seed;
  return j;
}

MonteCarloPlan plan_from_json(const Json& j) {
  if (!j.is_object()) bad("plan must be a JSON object");
  MonteCarloPlan p;
  p.model = model_from_json(require(j, "model", "plan"));
  p.w = weight_from_json(require(j, "weight", "plan"));
  const Json& ns = require(j, "sample_sizes", "plan");
  if (!ns.is_array()) bad("plan: 'sample_sizes' must be an array");
  for (const auto& v : ns) {
    if (!v.is_number_unsigned()) bad("plan: sample sizes must be positive integers");
    p.sample_sizes.push_back(v.get<std::size_t>());
  }
  p.replications = unsigned_field(j, "replications", "plan");
  if (j.contains("seed")) p.seed = unsigned_field(j, "seed", "plan");
  if (j.contains("checks")) {
    const Json& cs = j.at("checks");
    if (!cs.is_array()) bad("plan: 'checks' must be an array of names");
    for (const auto& c : cs) {
      if (!c.is_string()) bad("plan: check names must be strings");
      p.checks.push_back(parse_check(c.get<std::string>()));
    }
  }
  if (j.contains("bootstrap")) p.bootstrap = bootstrap_from_json(j.at("bootstrap"));
  if (j.contains("quadrature")) p.quad = quadrature_from_json(j.at("quadrature"));
  if (j.contains("keep_replicates")) p.keep_replicates = j.at("keep_replicates").get<bool>();
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"model", "weight", "sample_sizes", "replications", "seed",
                                  "checks", "bootstrap", "quadrature", "keep_replicates"};
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }))
      bad("plan: unknown field '" + it.key() + "'");
  }
  p.validate();
  return p;
}

Json to_json(const BetaEstimates& e) {
  Json j;
  j["beta_hat"] = e.beta_hat;
  j["beta_g_hat"] = e.beta_g_hat;
  j["delta_hat"] = e.delta_hat;
  j["z0_bar"] = e.z0_bar;
  j["denom_classical"] = e.denom_classical;
  j["denom_gini"] = e.denom_gini;
  j["used_fast_path"] = e.used_fast_path;
  j["tie_count"] = e.tie_count;
  return j;
}

Json to_json(const InferenceReport& r) {
  Json j;
  j["point"] = to_json(r.point);
  j["ci_low"] = r.ci_low;
  j["ci_high"] = r.ci_high;
  j["reject_h0_delta_zero"] = r.reject_h0_delta_zero;
  j["bootstrap_failures"] = r.bootstrap_failures;
  j["resample_sd"] = r.resample_sd;
  j["m_used"] = r.m_used;
  j["unscaled_interval"] = r.unscaled_interval;
  j["interval_note"] = r.interval_note;
  j["spec_echo"] = bootstrap_to_json(r.spec_echo);
  return j;
}

Json to_json(const AssumptionReport& r) {
  Json j;
  j["theorem"] = std::string(theorem_tag(r.theorem));
  j["overall"] = std::string(verdict_name(r.overall));
  j["binding"] = r.binding.empty() ? Json(nullptr) : Json(r.binding);
  Json cs = Json::array();
  for (const auto& c : r.conditions) {
    Json cj;
    cj["name"] = c.name;
    cj["verdict"] = std::string(verdict_name(c.verdict));
    cj["detail"] = c.detail;
    cs.push_back(cj);
  }
  j["conditions"] = cs;
  j["b_exponent"] = optional_number(r.b);
  j["required_moment_order"] = optional_number(r.required_moment_order);
  j["numeric_only"] = r.numeric_only;
  return j;
}

Json to_json(const VarianceComponents& v) {
  Json j;
  j["upsilon1_sq"] = v.upsilon1_sq;
  j["upsilon2_sq"] = v.upsilon2_sq;
  j["total"] = v.total();
  j["B"] = v.B;
  j["D"] = v.D;
  j["z0"] = v.z0;
  j["beta"] = v.beta;
  j["beta_g"] = v.beta_g;
  j["delta"] = v.delta;
  j["upsilon2_normalized"] = v.upsilon2_normalized;
  const auto& t = v.upsilon2_diag.terms;
  j["upsilon2_terms"] = Json{{"term11", t.term11}, {"term12", t.term12}, {"term22", t.term22},
                             {"natural_scale", t.natural_scale}};
  Json u1;
  u1["levels"] = v.upsilon1_diag.levels;
  u1["converged"] = v.upsilon1_diag.converged;
  u1["history"] = history_json(v.upsilon1_diag.history);
  Json u2;
  u2["cells"] = v.upsilon2_diag.cells;
  u2["eps_q"] = v.upsilon2_diag.eps_q;
  u2["converged"] = v.upsilon2_diag.converged;
  u2["history"] = history_json(v.upsilon2_diag.history);
  Json sens = Json::array();
  for (const auto& [eps, val] : v.upsilon2_diag.eps_sensitivity) sens.push_back(Json{{"eps_q", eps}, {"value", val}});
  u2["eps_sensitivity"] = sens;
  u2["convention"] = v.upsilon2_diag.convention;
  j["quad_diag"] = Json{{"upsilon1", u1}, {"upsilon2", u2}};
  j["assumptions"] = to_json(v.assumptions);
  return j;
}

Json to_json(const MonteCarloResult& r) {
  Json j;
  j["model"] = r.model;
  j["weight"] = r.weight;
  Json cs = Json::array();
  for (Check c : r.checks) cs.push_back(std::string(check_name(c)));
  j["checks"] = cs;
  j["delta"] = r.delta;
  j["variance"] = r.variance ? Json{{"upsilon1_sq", r.variance->upsilon1_sq},
                                    {"upsilon2_sq", r.variance->upsilon2_sq},
                                    {"total", r.variance->total()}}
                             : Json(nullptr);
  Json per = Json::array();
  for (const auto& s : r.per_n) {
    Json e;
    e["n"] = s.n;
    e["replications"] = s.replications;
    e["failures"] = s.failures;
    e["mean_delta_hat"] = s.mean_delta_hat;
    e["bias"] = s.bias;
    e["median_bias"] = s.median_bias;
    e["rmse"] = s.rmse;
    e["var_scaled"] = s.var_scaled;
    e["variance_ratio"] = optional_number(s.variance_ratio);
    e["ks_distance"] = optional_number(s.ks_distance);
    e["ks_critical"] = optional_number(s.ks_critical);
    e["coverage"] = optional_number(s.coverage);
    e["rejection_rate"] = optional_number(s.rejection_rate);
    e["bootstrap_failures"] = s.bootstrap_failures;
    if (!s.replicates.empty()) e["replicates"] = history_json(s.replicates);
    per.push_back(e);
  }
  j["per_n"] = per;
  j["rmse_decreasing"] = r.rmse_decreasing ? Json(*r.rmse_decreasing) : Json(nullptr);
  Json notes = Json::array();
  for (const auto& n : r.notes) notes.push_back(n);
  j["notes"] = notes;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ingestion, "cannot open JSON file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ingestion, "invalid JSON in '" + path + "': " + e.what());
  }
}

std::string dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace ginibeta::io
