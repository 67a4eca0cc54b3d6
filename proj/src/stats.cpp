#include "gldpdq/stats.hpp"

#include "gldpdq/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gldpdq {

double normal_pdf(double z) noexcept
{
  return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double normal_cdf(double z) noexcept
{
  return 0.5 * std::erfc(-z * (0.5 * std::numbers::sqrt2));
}

double normal_quantile(double p)
{
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>{}, p);
}

double sample_quantile(std::span<const double> sorted, double p)
{
  if (sorted.empty())
    throw DomainError("sample_quantile: empty sample");
  const std::size_t n = sorted.size();
  p = std::clamp(p, 0.0, 1.0);
  const double h = static_cast<double>(n - 1) * p;
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo);
  if (i + 1 >= n)
    return sorted[n - 1];
  const double frac = h - lo;
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

double mean(std::span<const double> x)
{
  if (x.empty())
    throw DomainError("mean: empty input");
  double s = 0.0;
  for (double v : x)
    s += v;
  return s / static_cast<double>(x.size());
}

double standard_deviation(std::span<const double> x)
{
  if (x.size() < 2)
    return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x)
    ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

} // namespace gldpdq
