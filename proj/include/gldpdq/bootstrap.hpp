#pragma once

#include "gldpdq/fit.hpp"
#include "gldpdq/qdensity.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gldpdq {

//! Maps a sample to a fitted GLD. Defaults to the pdQ estimator.
using Estimator = std::function<FitResult(const SortedSample&)>;

Estimator pdq_estimator(BandwidthSpec spec = {});

enum class FunctionalKind
{
  location,
  skew_diff,
  custom
};

//! Scalar summary of a fitted GLD.
struct Functional
{
  FunctionalKind kind;
  std::function<double(const FitResult&)> extract;

  //! lambda1
  static Functional location();
  //! lambda3 - lambda4; zero for a symmetric GLD.
  static Functional skew_diff();
  static Functional custom(std::function<double(const FitResult&)> fn);
};

enum class IntervalMethod
{
  percentile,
  bca
};

struct BootstrapInterval
{
  double lower;
  double upper;
  double level;
  IntervalMethod method;
  std::size_t b_count;
  std::optional<double> z0;
  std::optional<double> accel;
  //! Point estimate on the original sample.
  double estimate;
  std::vector<std::string> warnings;
};

struct BootstrapOptions
{
  Estimator estimator;  // empty means pdq_estimator()
  unsigned workers = 1;
};

inline constexpr std::size_t kMinResamples = 100;
inline constexpr std::size_t kDefaultPercentileResamples = 500;
inline constexpr std::size_t kDefaultBcaResamples = 2000;
//! Above this sample size the acceleration uses a grouped jackknife.
inline constexpr std::size_t kJackknifeExactLimit = 2000;
inline constexpr std::size_t kJackknifeBlocks = 200;
inline constexpr std::size_t kMaxResampleRetries = 10;

//! Functional applied to fits of b_count with-replacement resamples.
//! Resample r draws from the sub-seed derive_seed(seed, r); a failed fit is
//! redrawn from a further derived seed, up to kMaxResampleRetries times.
std::vector<double> resample_estimates(const SortedSample& s, const Functional& f,
                                       std::size_t b_count, std::uint64_t seed,
                                       const BootstrapOptions& options = {});

//! Empirical (1 - level)/2 and (1 + level)/2 quantiles of the estimates.
//! `estimate` defaults to the median of the estimates.
BootstrapInterval percentile_interval(std::span<const double> estimates, double level,
                                      std::optional<double> estimate = std::nullopt);

//! Bias-correction constant Phi^-1(#{theta* < theta_hat} / B); infinite when
//! every resample lies on one side.
double bias_correction(std::span<const double> estimates, double estimate);

//! Acceleration from jackknife values:
//! sum (mean - theta_i)^3 / (6 [sum (mean - theta_i)^2]^(3/2)); zero when the
//! jackknife values do not vary.
double jackknife_acceleration(std::span<const double> jackknife_values);

//! Jackknife values of the functional: delete-one refits, or for
//! n > kJackknifeExactLimit, kJackknifeBlocks blocks of every
//! kJackknifeBlocks-th order statistic.
std::vector<double> jackknife_values(const SortedSample& s, const Functional& f,
                                     const BootstrapOptions& options = {});

//! BCa interval from given constants. With z0 = 0 and accel = 0 the
//! adjusted levels are the unadjusted ones, so this reproduces the
//! percentile interval.
BootstrapInterval bca_interval_from(std::span<const double> estimates, double estimate, double z0,
                                    double accel, double level);

//! BCa interval for f on s from bootstrap estimates of the same (s, f).
//! Falls back to the percentile interval (with a warning) when z0 is infinite.
BootstrapInterval bca_interval(const SortedSample& s, const Functional& f,
                               std::span<const double> estimates, double level,
                               const BootstrapOptions& options = {});

//! Interval for lambda1(s1) - lambda1(s2) from independent resamples of each.
BootstrapInterval two_sample_location_diff(const SortedSample& s1, const SortedSample& s2,
                                           IntervalMethod method, double level,
                                           std::size_t b_count, std::uint64_t seed,
                                           const BootstrapOptions& options = {});

//! Draws a with-replacement resample of s.
SortedSample resample(const SortedSample& s, std::uint64_t seed);

} // namespace gldpdq
