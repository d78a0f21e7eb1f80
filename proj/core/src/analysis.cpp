#include "dwqa/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace dwqa {

namespace {

struct Line {
  double slope = 0.0, intercept = 0.0;
  double slope_se = 0.0, intercept_se = 0.0;
  double r2 = 0.0;
};

Line regress(const std::vector<double>& x, const std::vector<double>& y,
             const std::vector<double>& w) {
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("fit needs at least 3 points in the window");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xm = sx / sw, ym = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xm) * (x[i] - xm);
    sxy += w[i] * (x[i] - xm) * (y[i] - ym);
    syy += w[i] * (y[i] - ym) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit abscissae are all equal");
  Line l;
  l.slope = sxy / sxx;
  l.intercept = ym - l.slope * xm;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - l.intercept - l.slope * x[i];
    ssr += w[i] * r * r;
  }
  const double s2 = ssr / static_cast<double>(n - 2);
  l.slope_se = std::sqrt(s2 / sxx);
  l.intercept_se = std::sqrt(s2 * (1.0 / sw + xm * xm / sxx));
  l.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return l;
}

void check_sizes(std::span<const double> x, std::span<const double> y, const FitOptions& o) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y lengths differ");
  if (o.y_stderr && o.y_stderr->size() != y.size())
    throw std::invalid_argument("stderr length differs from y");
}

double log_weight(double y, const FitOptions& o, std::size_t i) {
  if (!o.y_stderr) return 1.0;
  const double se = (*o.y_stderr)[i];
  if (!(se > 0.0)) throw std::invalid_argument("weighted fit needs positive stderrs");
  const double rel = se / y;
  return 1.0 / (rel * rel);
}

FitResult fit_impl(FitModel model, std::span<const double> x, std::span<const double> y,
                   const std::function<bool(double, double)>& keep, const FitOptions& o) {
  check_sizes(x, y, o);
  std::vector<double> lx, ly, w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!keep(x[i], y[i])) continue;
    if (!(y[i] > 0.0)) throw std::invalid_argument("nonpositive y inside the fit window");
    if (model != FitModel::Exponential && !(x[i] > 0.0))
      throw std::invalid_argument("nonpositive x inside a log-log fit window");
    lx.push_back(model == FitModel::Exponential ? x[i] : std::log(x[i]));
    ly.push_back(std::log(y[i]));
    w.push_back(log_weight(y[i], o, i));
  }
  const Line l = regress(lx, ly, w);
  FitResult r;
  r.model = model;
  r.exponent = model == FitModel::LogLogSlope ? l.slope : -l.slope;
  r.exponent_se = l.slope_se;
  r.prefactor = std::exp(l.intercept);
  r.prefactor_se = r.prefactor * l.intercept_se;
  r.n_points = static_cast<int>(lx.size());
  r.r2 = l.r2;
  return r;
}

}  // namespace

std::string to_string(FitModel model) {
  switch (model) {
    case FitModel::PowerLaw: return "power_law";
    case FitModel::Exponential: return "exponential";
    case FitModel::LogLogSlope: return "loglog_slope";
  }
  return "";
}

FitModel fit_model_from_string(const std::string& name) {
  if (name == "power_law" || name == "power") return FitModel::PowerLaw;
  if (name == "exponential" || name == "exp") return FitModel::Exponential;
  if (name == "loglog_slope" || name == "loglog") return FitModel::LogLogSlope;
  throw std::invalid_argument("unknown fit model: " + name);
}

std::string FitResult::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = dwqa::to_string(model);
  j["exponent"] = exponent;
  j["exponent_se"] = exponent_se;
  j["prefactor"] = prefactor;
  j["prefactor_se"] = prefactor_se;
  j["window"] = {std::isfinite(window.lo) ? nlohmann::ordered_json(window.lo) : nullptr,
                 std::isfinite(window.hi) ? nlohmann::ordered_json(window.hi) : nullptr};
  j["n_points"] = n_points;
  j["r2"] = r2;
  return j.dump(2);
}

FitResult power_law_fit(std::span<const double> t, std::span<const double> y, FitWindow window,
                        const FitOptions& options) {
  auto r = fit_impl(FitModel::PowerLaw, t, y, [&](double x, double) { return window.contains(x); },
                    options);
  r.window = window;
  return r;
}

FitResult exponential_fit(std::span<const double> t, std::span<const double> y, FitWindow window,
                          const FitOptions& options) {
  auto r = fit_impl(FitModel::Exponential, t, y,
                    [&](double x, double) { return window.contains(x); }, options);
  r.window = window;
  return r;
}

FitResult loglog_slope(std::span<const double> x, std::span<const double> y,
                       const PointFilter& filter, const FitOptions& options) {
  auto r = fit_impl(FitModel::LogLogSlope, x, y,
                    [&](double a, double b) { return !filter || filter(a, b); }, options);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!filter || filter(x[i], y[i])) {
      lo = std::min(lo, x[i]);
      hi = std::max(hi, x[i]);
    }
  r.window = {lo, hi};
  return r;
}

}  // namespace dwqa
