#pragma once

#include <span>

namespace gldpdq {

double normal_pdf(double z) noexcept;
double normal_cdf(double z) noexcept;
//! Standard normal quantile, p in (0, 1).
double normal_quantile(double p);

//! Linear-interpolation quantile of an ascending sample:
//! h = (n-1)p + 1, x_(floor h) + (h - floor h)(x_(floor h + 1) - x_(floor h)).
//! p is clamped to [0, 1]; throws DomainError on an empty sample.
double sample_quantile(std::span<const double> sorted, double p);

double mean(std::span<const double> x);
//! Sample standard deviation (n - 1 denominator); 0 for a single value.
double standard_deviation(std::span<const double> x);

} // namespace gldpdq
