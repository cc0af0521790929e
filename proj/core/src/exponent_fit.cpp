#include "slowvol/exponent_fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "slowvol/errors.hpp"

namespace slowvol {

std::string_view to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::polynomial: return "polynomial";
    case GrowthClass::exponential: return "exponential";
    case GrowthClass::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

struct LeastSquares {
  Eigen::VectorXd coefficients;
  double rms = 0.0;
};

LeastSquares solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& rhs) {
  LeastSquares out;
  out.coefficients = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd r = design * out.coefficients - rhs;
  out.rms = std::sqrt(r.squaredNorm() / static_cast<double>(rhs.size()));
  return out;
}

}  // namespace

ScalingFit fit_scaling_exponent(std::span<const double> x, std::span<const double> y,
                                const FitOptions& options) {
  if (x.size() != y.size()) {
    throw InvalidArgument("abscissa and values differ in length");
  }
  if (x.size() < options.min_samples) {
    throw SeriesTooShort("need at least " + std::to_string(options.min_samples) +
                         " samples, got " + std::to_string(x.size()));
  }
  if (!(options.window_fraction > 0.0 && options.window_fraction <= 1.0)) {
    throw InvalidArgument("window_fraction must lie in (0, 1]");
  }

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) {
      if (!(y[i] > 0.0)) {
        throw InvalidArgument("series values must be positive");
      }
      usable.push_back(i);
    }
  }
  const std::size_t needed = options.finite_size_correction ? 4 : 3;
  auto count = static_cast<std::size_t>(
      std::ceil(options.window_fraction * static_cast<double>(usable.size())));
  count = std::min(usable.size(), std::max(count, needed));
  if (count < needed) {
    throw SeriesTooShort("fewer than " + std::to_string(needed) +
                         " samples with positive abscissa in the fit window");
  }
  const std::vector<std::size_t> window(usable.end() - static_cast<std::ptrdiff_t>(count),
                                        usable.end());

  const auto n = static_cast<Eigen::Index>(count);
  Eigen::MatrixXd loglog(n, options.finite_size_correction ? 3 : 2);
  Eigen::MatrixXd linear(n, 2);
  Eigen::VectorXd logy(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double xi = x[window[static_cast<std::size_t>(k)]];
    const double yi = y[window[static_cast<std::size_t>(k)]];
    loglog(k, 0) = std::log(xi);
    loglog(k, 1) = 1.0;
    if (options.finite_size_correction) loglog(k, 2) = 1.0 / xi;
    linear(k, 0) = xi;
    linear(k, 1) = 1.0;
    logy(k) = std::log(yi);
  }

  const LeastSquares power = solve(loglog, logy);
  const LeastSquares expo = solve(linear, logy);

  ScalingFit fit;
  fit.window_lo = x[window.front()];
  fit.window_hi = x[window.back()];
  fit.residual = power.rms;
  fit.linear_slope = expo.coefficients(0);
  fit.linear_residual = expo.rms;

  if (expo.rms < power.rms && fit.linear_slope > options.exponential_slope_threshold) {
    fit.classification = GrowthClass::exponential;
    fit.exponent = ScalingFit::infinite_exponent;
    return fit;
  }
  fit.exponent = power.coefficients(0);
  if (power.rms > options.residual_cap) {
    fit.classification = GrowthClass::inconclusive;
  } else {
    fit.classification = GrowthClass::polynomial;
    // Bounded or slowly decaying series have growth degree 0.
    fit.exponent = std::max(0.0, fit.exponent);
  }
  return fit;
}

}  // namespace slowvol
