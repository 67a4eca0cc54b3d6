#include "gldpdq/gof.hpp"

#include "gldpdq/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace gldpdq {

namespace {

constexpr double kTermCutoff = 1e-12;
constexpr std::size_t kMaxTerms = 100000;
// Below this sqrt(n) d the alternating series converges slowly and its
// truncation error oscillates in sign; the theta-function form of the same
// distribution converges in a few terms there.
constexpr double kSeriesSwitch = 1.0;

// P(K <= lambda) = sqrt(2 pi)/lambda sum_{k odd} exp(-k^2 pi^2 / (8 lambda^2)).
double kolmogorov_cdf_small(double lambda)
{
  if (lambda < 0.05)
    return 0.0;
  const double c = M_PI * M_PI / (8.0 * lambda * lambda);
  double sum = 0.0;
  for (int k = 1; k < 100; k += 2) {
    const double term = std::exp(-static_cast<double>(k * k) * c);
    sum += term;
    if (term < 1e-17 * sum)
      break;
  }
  return std::sqrt(2.0 * M_PI) / lambda * sum;
}

} // namespace

double ks_statistic(const SortedSample& s, const GldParams& p)
{
  const std::size_t n = s.size();
  const double nd = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double F = cdf(p, s[i]);
    const double above = static_cast<double>(i + 1) / nd - F;
    const double below = F - static_cast<double>(i) / nd;
    d = std::max({d, std::abs(above), std::abs(below)});
  }
  return std::min(d, 1.0);
}

double kolmogorov_series(double lambda, std::size_t terms)
{
  double sum = 0.0;
  for (std::size_t k = 1; k <= terms; ++k) {
    const double kd = static_cast<double>(k);
    const double term = std::exp(-2.0 * kd * kd * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
  }
  return 2.0 * sum;
}

double ks_pvalue(double d, std::size_t n)
{
  if (n == 0)
    throw DomainError("ks_pvalue: n must be positive");
  if (std::isnan(d) || d < 0.0)
    throw DomainError("ks_pvalue: d must be non-negative");
  const double lambda = std::sqrt(static_cast<double>(n)) * d;
  if (lambda < kSeriesSwitch)
    return std::clamp(1.0 - kolmogorov_cdf_small(lambda), 0.0, 1.0);

  double sum = 0.0;
  for (std::size_t k = 1; k <= kMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    const double term = std::exp(-2.0 * kd * kd * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < kTermCutoff)
      break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(const SortedSample& s, const GldParams& p)
{
  const double d = ks_statistic(s, p);
  return {d, ks_pvalue(d, s.size()), s.size(), s.size() < 30};
}

std::vector<QqPoint> qq_data(const SortedSample& s, const GldParams& p)
{
  const std::size_t n = s.size();
  const double nd = static_cast<double>(n);
  std::vector<QqPoint> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = {s[i], quantile(p, (static_cast<double>(i) + 0.5) / nd)};
  return out;
}

void write_qq_csv(std::ostream& os, std::span<const QqPoint> points)
{
  os << "sample,model\n";
  for (const QqPoint& q : points)
    os << fmt::format("{:.17g},{:.17g}\n", q.sample, q.model);
}

} // namespace gldpdq
