#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

namespace slowvol {

enum class GrowthClass { polynomial, exponential, inconclusive };

std::string_view to_string(GrowthClass c);

// Finite-window estimator of the polynomial growth degree
//   limsup log y(x) / log x
// It fits log y against log x on the trailing part of the series. It is an
// estimate from finitely many terms, not the limit itself.
struct FitOptions {
  // Trailing fraction of the usable samples (those with x > 0) that enters
  // the regression.
  double window_fraction = 0.5;
  // Adds a c/x term to the log-log model: log y = k log x + a + c / x.
  // This absorbs the leading lower-order term of a polynomial
  // (e.g. (2m+1)(2m^2+2m+3)/3 for the ball sizes of Z^3).
  bool finite_size_correction = false;
  // A series is exponential when log y is better fitted linearly in x than in
  // log x and the linear slope exceeds this threshold.
  double exponential_slope_threshold = 0.05;
  // Root-mean-square residual of the log-log fit above which the fit is
  // reported as inconclusive.
  double residual_cap = 0.05;
  std::size_t min_samples = 8;
};

struct ScalingFit {
  static constexpr double infinite_exponent = std::numeric_limits<double>::infinity();

  // Growth degree; infinite_exponent when classified exponential.
  double exponent = 0.0;
  // Abscissae of the first and last sample in the fit window.
  double window_lo = 0.0;
  double window_hi = 0.0;
  // RMS residual of the log-log fit.
  double residual = 0.0;
  // Slope and RMS residual of the competing fit of log y against x.
  double linear_slope = 0.0;
  double linear_residual = 0.0;
  GrowthClass classification = GrowthClass::inconclusive;
};

// Throws SeriesTooShort when fewer than options.min_samples samples are given
// or when fewer than 3 positive abscissae fall in the window. Values must be
// positive.
ScalingFit fit_scaling_exponent(std::span<const double> x, std::span<const double> y,
                                const FitOptions& options = {});

}  // namespace slowvol
