#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gldpdq {

//! Finite sample held in ascending order; at least kMinSize values.
class SortedSample
{
public:
  static constexpr std::size_t kMinSize = 10;

  //! Sorts `values`; throws DataError if fewer than kMinSize or any non-finite.
  explicit SortedSample(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

private:
  std::vector<double> values_;
};

//! Midpoint probabilities u_j = (j - 1/2) / J, j = 1..J.
class ProbabilityGrid
{
public:
  explicit ProbabilityGrid(std::size_t j_count);

  std::size_t size() const noexcept { return points_.size(); }
  std::span<const double> points() const noexcept { return points_; }
  double operator[](std::size_t j) const noexcept { return points_[j]; }

private:
  std::vector<double> points_;
};

class BandwidthSpec
{
public:
  enum class Mode
  {
    qor_normal_reference,
    fixed
  };

  BandwidthSpec() = default;
  static BandwidthSpec qor_normal_reference() { return {}; }
  static BandwidthSpec fixed(double value);

  Mode mode() const noexcept { return mode_; }
  std::optional<double> fixed_value() const noexcept { return fixed_value_; }

private:
  Mode mode_ = Mode::qor_normal_reference;
  std::optional<double> fixed_value_;
};

struct EmpiricalPdq
{
  ProbabilityGrid grid;
  std::vector<double> values;
  double kappa_hat;
  //! Grid points whose quantile density estimate hit the clamp floor.
  std::size_t clamped = 0;
};

//! Kernel quantile density estimate at u with bandwidth b.
//!
//! The Gaussian-kernel derivative of the smoothed empirical quantile
//! function, sum_i X_(i) {k_b(u - (i-1)/n) - k_b(u - i/n)}, with the end
//! knots 0 and 1 given zero weight. Summing by parts, that is the
//! kernel-weighted sum of spacings sum_{i<n} k_b(u - i/n) (X_(i+1) - X_(i)),
//! which is how it is evaluated.
double qhat(const SortedSample& s, double u, double b);

//! Bandwidth at u. The normal-reference mode uses
//! b(u) = (15/n)^(1/5) QOR(u)^(2/5) with QOR(u) = phi(z)^2 / (1 + 2 z^2),
//! z = Phi^-1(u), floored at 1/n and then capped at min(u, 1 - u).
//! The fixed mode returns its value unchanged.
double bandwidth(const SortedSample& s, double u, const BandwidthSpec& spec);

//! Normalised reciprocal quantile density on the grid: 1 / (kappa_hat q_j)
//! with kappa_hat = mean_j 1 / q_j, so the values average to one.
EmpiricalPdq empirical_pdq(const SortedSample& s, const ProbabilityGrid& grid,
                           const BandwidthSpec& spec = {});

//! J = 25 for n <= 200, otherwise J = 50.
ProbabilityGrid make_grid(std::size_t n);

//! Value below which a quantile density estimate is clamped.
double clamp_floor(const SortedSample& s) noexcept;

} // namespace gldpdq
