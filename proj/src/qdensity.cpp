#include "gldpdq/qdensity.hpp"

#include "gldpdq/errors.hpp"
#include "gldpdq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gldpdq {

namespace {

// exp(-t^2 / 2) underflows to exactly zero beyond this, so terms outside
// the window contribute nothing and skipping them changes no bits.
constexpr double kKernelReach = 40.0;

void check_open_unit(double u, const char* what)
{
  if (!(u > 0.0 && u < 1.0))
    throw DomainError(std::string(what) + ": u must lie in (0, 1)");
}

} // namespace

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values))
{
  if (values_.size() < kMinSize)
    throw DataError("insufficient data: need at least " + std::to_string(kMinSize) +
                    " observations, got " + std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v))
      throw DataError("sample contains a non-finite value");
  std::sort(values_.begin(), values_.end());
}

ProbabilityGrid::ProbabilityGrid(std::size_t j_count)
{
  if (j_count < 2)
    throw DomainError("ProbabilityGrid: J must be at least 2");
  points_.resize(j_count);
  const double jd = static_cast<double>(j_count);
  for (std::size_t j = 0; j < j_count; ++j)
    points_[j] = (static_cast<double>(j) + 0.5) / jd;
}

BandwidthSpec BandwidthSpec::fixed(double value)
{
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError("BandwidthSpec: fixed bandwidth must be positive and finite");
  BandwidthSpec spec;
  spec.mode_ = Mode::fixed;
  spec.fixed_value_ = value;
  return spec;
}

double qhat(const SortedSample& s, double u, double b)
{
  check_open_unit(u, "qhat");
  if (!(b > 0.0) || !std::isfinite(b))
    throw DomainError("qhat: bandwidth must be positive");

  const std::size_t n = s.size();
  const double nd = static_cast<double>(n);
  const auto x = s.values();

  // spacings X_(i+1) - X_(i) for i = 1..n-1 sit at knots i/n
  const double first = std::ceil(nd * (u - kKernelReach * b));
  const double last = std::floor(nd * (u + kKernelReach * b));
  const std::size_t i_begin = first < 1.0 ? 1 : static_cast<std::size_t>(first);
  const std::size_t i_end = last > nd - 1.0 ? n - 1 : static_cast<std::size_t>(last);

  double sum = 0.0;
  for (std::size_t i = i_begin; i <= i_end; ++i) {
    const double t = (u - static_cast<double>(i) / nd) / b;
    sum += normal_pdf(t) * (x[i] - x[i - 1]);
  }
  return sum / b;
}

double bandwidth(const SortedSample& s, double u, const BandwidthSpec& spec)
{
  check_open_unit(u, "bandwidth");
  if (spec.mode() == BandwidthSpec::Mode::fixed)
    return *spec.fixed_value();

  const double nd = static_cast<double>(s.size());
  const double z = normal_quantile(u);
  const double phi = normal_pdf(z);
  const double qor = phi * phi / (1.0 + 2.0 * z * z);
  double b = std::pow(15.0 / nd, 0.2) * std::pow(qor, 0.4);
  b = std::max(b, 1.0 / nd);
  return std::min(b, std::min(u, 1.0 - u));
}

double clamp_floor(const SortedSample& s) noexcept
{
  return 1e-10 * (s.max() - s.min() + 1.0);
}

EmpiricalPdq empirical_pdq(const SortedSample& s, const ProbabilityGrid& grid,
                           const BandwidthSpec& spec)
{
  const std::size_t J = grid.size();
  const double floor = clamp_floor(s);

  std::vector<double> q(J);
  std::size_t clamped = 0;
  for (std::size_t j = 0; j < J; ++j) {
    const double u = grid[j];
    double v = qhat(s, u, bandwidth(s, u, spec));
    if (!(v > floor)) {
      v = floor;
      ++clamped;
    }
    q[j] = v;
  }
  if (clamped == J)
    throw EstimationError("empirical pdQ: quantile density is non-positive at every grid "
                          "point; the sample is not informative");

  double kappa_hat = 0.0;
  for (double v : q)
    kappa_hat += 1.0 / v;
  kappa_hat /= static_cast<double>(J);

  std::vector<double> values(J);
  for (std::size_t j = 0; j < J; ++j)
    values[j] = 1.0 / (kappa_hat * q[j]);

  return EmpiricalPdq{grid, std::move(values), kappa_hat, clamped};
}

ProbabilityGrid make_grid(std::size_t n)
{
  return ProbabilityGrid(n <= 200 ? 25 : 50);
}

} // namespace gldpdq
