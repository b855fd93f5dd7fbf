#pragma once

#include <span>

namespace chainprop {

// Dominant oscillation period of a uniformly sampled series: unbiased
// autocorrelation, first maximum past the first sign change, parabolic peak
// refinement.  Throws if the series shows no oscillation.
double dominant_period(std::span<const double> t, std::span<const double> v);

// Period of a non-negative series that periodically touches (near) zero:
// mean spacing of the sub-threshold interior minima, each refined by a
// parabola through its neighbours.  Needs at least two touches.
double zero_touch_period(std::span<const double> t, std::span<const double> v, double threshold);

// Pearson correlation coefficient.
double correlation(std::span<const double> a, std::span<const double> b);

}  // namespace chainprop
