#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dwqa {

enum class FitModel { PowerLaw, Exponential, LogLogSlope };

std::string to_string(FitModel model);
FitModel fit_model_from_string(const std::string& name);

/// Inclusive range on the abscissa.
struct FitWindow {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// PowerLaw: y = prefactor * t^-exponent.
/// Exponential: y = prefactor * exp(-exponent * t), exponent is the rate C.
/// LogLogSlope: y = prefactor * x^exponent.
struct FitResult {
  FitModel model = FitModel::PowerLaw;
  double exponent = 0.0;
  double exponent_se = 0.0;
  double prefactor = 0.0;
  double prefactor_se = 0.0;
  FitWindow window;
  int n_points = 0;
  double r2 = 0.0;

  std::string to_json() const;
};

/// Optional per-point standard errors of y; when given, points are weighted
/// by (y / se)^2 in log space.
struct FitOptions {
  std::optional<std::vector<double>> y_stderr;
};

FitResult power_law_fit(std::span<const double> t, std::span<const double> y, FitWindow window,
                        const FitOptions& options = {});
FitResult exponential_fit(std::span<const double> t, std::span<const double> y, FitWindow window,
                          const FitOptions& options = {});
using PointFilter = std::function<bool(double x, double y)>;
FitResult loglog_slope(std::span<const double> x, std::span<const double> y,
                       const PointFilter& filter, const FitOptions& options = {});

}  // namespace dwqa
