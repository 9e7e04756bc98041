#include <cmath>
#include <string>

#include "ginibeta/error.hpp"
#include "ginibeta/model.hpp"
#include "ginibeta/numeric.hpp"
#include "ginibeta/simulation.hpp"

namespace ginibeta {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

MomentProfile light_tailed_profile() {
  MomentProfile p;
  p.x_moment = MomentBound::all();
  p.y_moment = MomentBound::all();
  p.cross_moment_finite = true;
  p.cond_second_moment = MomentBound::all();
  p.cond_var_growth = 0.0;
  p.cdf_continuous = true;
  p.quantile_regression_continuous = true;
  return p;
}

void require_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail(ErrorKind::invalid_parameter, "noise sigma must be finite and >= 0");
}

}  // namespace

PairedSample BivariateModel::sample(CounterStream& stream, std::size_t n) const {
  if (!draw) fail(ErrorKind::invalid_parameter, "model '" + name + "' has no sampler");
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto [xv, yv] = draw(stream);
    x[k] = xv;
    y[k] = yv;
  }
  return PairedSample(std::move(x), std::move(y));
}

PairedSample BivariateModel::sample(std::uint64_t seed, std::size_t n, std::uint64_t stream_id) const {
  CounterStream stream(seed, stream_id, n);
  return sample(stream, n);
}

BivariateModel make_gaussian_model(double mu_x, double mu_y, double var_x, double var_y, double rho) {
  if (!(var_x > 0.0) || !(var_y > 0.0) || !std::isfinite(var_x) || !std::isfinite(var_y))
    fail(ErrorKind::invalid_parameter, "gaussian model needs positive finite variances");
  if (!(std::abs(rho) < 1.0)) fail(ErrorKind::invalid_parameter, "gaussian model needs |rho| < 1");
  if (!std::isfinite(mu_x) || !std::isfinite(mu_y)) fail(ErrorKind::invalid_parameter, "gaussian model needs finite means");
  const double sx = std::sqrt(var_x);
  const double sy = std::sqrt(var_y);
  const double slope = rho * sx / sy;
  const double resid_sd = std::sqrt(1.0 - rho * rho) * sx;
  const double cv = (1.0 - rho * rho) * var_x;

  BivariateModel m;
  m.name = "gaussian(mu_x=" + fmt(mu_x) + ",mu_y=" + fmt(mu_y) + ",var_x=" + fmt(var_x) + ",var_y=" + fmt(var_y) +
           ",rho=" + fmt(rho) + ")";
  m.quantile = [mu_y, sy](double t) { return mu_y + sy * normal_quantile(t); };
  m.cond_mean = [mu_x, mu_y, slope](double y) { return mu_x + slope * (y - mu_y); };
  m.cond_var = [cv](double) { return cv; };
  m.mean_x = mu_x;
  m.mean_y = mu_y;
  m.var_y = var_y;
  m.draw = [=](CounterStream& s) {
    const double z1 = s.normal();
    const double z2 = s.normal();
    const double y = mu_y + sy * z1;
    const double x = mu_x + sx * rho * z1 + resid_sd * z2;
    return std::pair{x, y};
  };
  m.moments = light_tailed_profile();
  m.gaussian = GaussianParameters{rho, rho * sx * sy, var_x, var_y};
  return m;
}

BivariateModel make_linear_uniform_model(double a, double c, double sigma) {
  require_sigma(sigma);
  if (!std::isfinite(a) || !std::isfinite(c)) fail(ErrorKind::invalid_parameter, "linear model needs finite a, c");
  BivariateModel m;
  m.name = "linear-uniform(a=" + fmt(a) + ",c=" + fmt(c) + ",sigma=" + fmt(sigma) + ")";
  m.quantile = [](double t) { return t; };
  m.cond_mean = [a, c](double y) { return a + c * y; };
  const double v = sigma * sigma;
  m.cond_var = [v](double) { return v; };
  m.mean_x = a + 0.5 * c;
  m.mean_y = 0.5;
  m.var_y = 1.0 / 12.0;
  m.draw = [a, c, sigma](CounterStream& s) {
    const double y = s.uniform();
    const double x = a + c * y + (sigma > 0.0 ? sigma * s.normal() : 0.0);
    return std::pair{x, y};
  };
  m.moments = light_tailed_profile();
  return m;
}

std::string_view fixture_name(NonlinearFixture f) noexcept {
  switch (f) {
    case NonlinearFixture::quadratic_uniform: return "quadratic-uniform";
    case NonlinearFixture::lognormal: return "lognormal";
    case NonlinearFixture::pareto: return "pareto";
  }
  return "unknown";
}

NonlinearFixture parse_fixture(std::string_view s) {
  if (s == "quadratic-uniform" || s == "quadratic_uniform" || s == "quadratic") return NonlinearFixture::quadratic_uniform;
  if (s == "lognormal") return NonlinearFixture::lognormal;
  if (s == "pareto") return NonlinearFixture::pareto;
  fail(ErrorKind::invalid_parameter, "unknown model fixture '" + std::string(s) + "'");
}

BivariateModel make_nonlinear_model(NonlinearFixture fixture, double sigma) {
  require_sigma(sigma);
  const double v = sigma * sigma;
  BivariateModel m;
  m.name = std::string(fixture_name(fixture)) + "(sigma=" + fmt(sigma) + ")";
  m.cond_var = [v](double) { return v; };
  switch (fixture) {
    case NonlinearFixture::quadratic_uniform:
      m.quantile = [](double t) { return t; };
      m.cond_mean = [](double y) { return y * y; };
      m.mean_x = 1.0 / 3.0;
      m.mean_y = 0.5;
      m.var_y = 1.0 / 12.0;
      m.draw = [sigma](CounterStream& s) {
        const double y = s.uniform();
        const double x = y * y + (sigma > 0.0 ? sigma * s.normal() : 0.0);
        return std::pair{x, y};
      };
      m.moments = light_tailed_profile();
      break;
    case NonlinearFixture::lognormal: {
      // log-scale kept small so the fourth-moment tail of Y is resolved
      // by the endpoint cutoff of the Stieltjes partition
      constexpr double s = 0.25;
      m.quantile = [](double t) { return std::exp(s * normal_quantile(t)); };
      m.cond_mean = [](double y) { return std::log(y) / s; };
      m.mean_x = 0.0;
      m.mean_y = std::exp(0.5 * s * s);
      m.var_y = (std::exp(s * s) - 1.0) * std::exp(s * s);
      m.draw = [sigma](CounterStream& st) {
        const double z = st.normal();
        const double x = z + (sigma > 0.0 ? sigma * st.normal() : 0.0);
        return std::pair{x, std::exp(s * z)};
      };
      m.moments = light_tailed_profile();
      break;
    }
    case NonlinearFixture::pareto: {
      constexpr double alpha = 3.0;
      m.quantile = [](double t) { return std::pow(1.0 - t, -1.0 / alpha); };
      m.cond_mean = [](double y) { return y; };
      m.mean_y = alpha / (alpha - 1.0);
      m.mean_x = m.mean_y;
      m.var_y = alpha / ((alpha - 1.0) * (alpha - 1.0) * (alpha - 2.0));
      m.draw = [sigma](CounterStream& s) {
        const double y = std::pow(s.uniform(), -1.0 / alpha);
        const double x = y + (sigma > 0.0 ? sigma * s.normal() : 0.0);
        return std::pair{x, y};
      };
      m.moments = light_tailed_profile();
      m.moments.x_moment = MomentBound{alpha, false};
      m.moments.y_moment = MomentBound{alpha, false};
      m.moments.cond_second_moment = MomentBound{alpha / 2.0, false};
      break;
    }
  }
  return m;
}

}  // namespace ginibeta
