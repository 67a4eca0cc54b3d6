#include "gldpdq/bootstrap.hpp"

#include "gldpdq/errors.hpp"
#include "gldpdq/parallel.hpp"
#include "gldpdq/random.hpp"
#include "gldpdq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gldpdq {

namespace {

void check_level(double level)
{
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("confidence level must lie in (0, 1)");
}

const Estimator& estimator_or_default(const BootstrapOptions& options, Estimator& fallback)
{
  if (options.estimator)
    return options.estimator;
  fallback = pdq_estimator();
  return fallback;
}

// Draws resamples from successive seeds until the evaluation succeeds.
template <class Eval>
double with_retries(std::uint64_t seed, Eval&& eval)
{
  for (std::size_t attempt = 0; attempt <= kMaxResampleRetries; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, attempt);
    try {
      const double v = eval(s);
      if (std::isfinite(v))
        return v;
    } catch (const NumericError&) {
    } catch (const DomainError&) {
    }
  }
  throw EstimationError("bootstrap: resample fit failed after " +
                        std::to_string(kMaxResampleRetries) + " retries");
}

double acceleration_from_deviations(std::span<const double> dev)
{
  double s2 = 0.0;
  double s3 = 0.0;
  for (double d : dev) {
    s2 += d * d;
    s3 += d * d * d;
  }
  if (!(s2 > 0.0))
    return 0.0;
  return s3 / (6.0 * std::pow(s2, 1.5));
}

std::vector<double> centred_deviations(std::span<const double> values, double sign)
{
  const double m = mean(values);
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    dev[i] = sign * (m - values[i]);
  return dev;
}

std::vector<double> sorted_copy(std::span<const double> x)
{
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

// Adjusted BCa probability for the normal quantile z.
double bca_level(double z0, double accel, double z, bool& ill_posed)
{
  const double shifted = z0 + z;
  const double denom = 1.0 - accel * shifted;
  if (!(denom > 0.0)) {
    ill_posed = true;
    return z < 0.0 ? 0.0 : 1.0;
  }
  return normal_cdf(z0 + shifted / denom);
}

} // namespace

Estimator pdq_estimator(BandwidthSpec spec)
{
  return [spec](const SortedSample& s) { return fit(s, spec); };
}

Functional Functional::location()
{
  return {FunctionalKind::location, [](const FitResult& r) { return r.params.lambda1(); }};
}

Functional Functional::skew_diff()
{
  return {FunctionalKind::skew_diff,
          [](const FitResult& r) { return r.params.lambda3() - r.params.lambda4(); }};
}

Functional Functional::custom(std::function<double(const FitResult&)> fn)
{
  if (!fn)
    throw DomainError("Functional::custom: empty extractor");
  return {FunctionalKind::custom, std::move(fn)};
}

SortedSample resample(const SortedSample& s, std::uint64_t seed)
{
  Rng rng(seed);
  const std::size_t n = s.size();
  std::vector<double> out(n);
  for (double& x : out)
    x = s[rng.index(n)];
  return SortedSample(std::move(out));
}

std::vector<double> resample_estimates(const SortedSample& s, const Functional& f,
                                       std::size_t b_count, std::uint64_t seed,
                                       const BootstrapOptions& options)
{
  if (b_count < kMinResamples)
    throw DomainError("resample_estimates: need at least " + std::to_string(kMinResamples) +
                      " resamples");
  Estimator fallback;
  const Estimator& est = estimator_or_default(options, fallback);

  std::vector<double> out(b_count);
  parallel_for(b_count, options.workers, [&](std::size_t r) {
    out[r] = with_retries(derive_seed(seed, r),
                          [&](std::uint64_t sd) { return f.extract(est(resample(s, sd))); });
  });
  return out;
}

BootstrapInterval percentile_interval(std::span<const double> estimates, double level,
                                      std::optional<double> estimate)
{
  check_level(level);
  if (estimates.empty())
    throw DomainError("percentile_interval: no estimates");
  const std::vector<double> sorted = sorted_copy(estimates);
  const double alpha = 1.0 - level;

  BootstrapInterval ci{};
  ci.lower = sample_quantile(sorted, 0.5 * alpha);
  ci.upper = sample_quantile(sorted, 1.0 - 0.5 * alpha);
  ci.level = level;
  ci.method = IntervalMethod::percentile;
  ci.b_count = estimates.size();
  ci.estimate = estimate ? *estimate : sample_quantile(sorted, 0.5);
  return ci;
}

double bias_correction(std::span<const double> estimates, double estimate)
{
  if (estimates.empty())
    throw DomainError("bias_correction: no estimates");
  const auto below = std::count_if(estimates.begin(), estimates.end(),
                                   [estimate](double t) { return t < estimate; });
  if (below == 0)
    return -HUGE_VAL;
  if (static_cast<std::size_t>(below) == estimates.size())
    return HUGE_VAL;
  return normal_quantile(static_cast<double>(below) / static_cast<double>(estimates.size()));
}

double jackknife_acceleration(std::span<const double> jackknife_values)
{
  if (jackknife_values.empty())
    return 0.0;
  const std::vector<double> dev = centred_deviations(jackknife_values, 1.0);
  return acceleration_from_deviations(dev);
}

std::vector<double> jackknife_values(const SortedSample& s, const Functional& f,
                                     const BootstrapOptions& options)
{
  Estimator fallback;
  const Estimator& est = estimator_or_default(options, fallback);
  const std::size_t n = s.size();
  const auto x = s.values();
  const bool grouped = n > kJackknifeExactLimit;
  const std::size_t groups = grouped ? kJackknifeBlocks : n;

  std::vector<double> out(groups);
  parallel_for(groups, options.workers, [&](std::size_t g) {
    std::vector<double> kept;
    kept.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      if ((grouped ? i % kJackknifeBlocks : i) != g)
        kept.push_back(x[i]);
    out[g] = f.extract(est(SortedSample(std::move(kept))));
  });
  return out;
}

BootstrapInterval bca_interval_from(std::span<const double> estimates, double estimate, double z0,
                                    double accel, double level)
{
  check_level(level);
  if (estimates.empty())
    throw DomainError("bca_interval: no estimates");
  if (!std::isfinite(z0) || !std::isfinite(accel))
    throw DomainError("bca_interval: z0 and acceleration must be finite");

  const std::vector<double> sorted = sorted_copy(estimates);
  const double alpha = 1.0 - level;
  double p_lo = 0.5 * alpha;
  double p_hi = 1.0 - 0.5 * alpha;
  bool ill_posed = false;
  if (z0 != 0.0 || accel != 0.0) {
    p_lo = bca_level(z0, accel, normal_quantile(0.5 * alpha), ill_posed);
    p_hi = bca_level(z0, accel, normal_quantile(1.0 - 0.5 * alpha), ill_posed);
  }

  BootstrapInterval ci{};
  ci.lower = sample_quantile(sorted, p_lo);
  ci.upper = sample_quantile(sorted, p_hi);
  ci.level = level;
  ci.method = IntervalMethod::bca;
  ci.b_count = estimates.size();
  ci.z0 = z0;
  ci.accel = accel;
  ci.estimate = estimate;
  if (ill_posed)
    ci.warnings.emplace_back("acceleration pushed an adjusted level outside (0, 1); clamped");
  return ci;
}

BootstrapInterval bca_interval(const SortedSample& s, const Functional& f,
                               std::span<const double> estimates, double level,
                               const BootstrapOptions& options)
{
  check_level(level);
  if (s.size() < 20)
    throw DomainError("bca_interval: need at least 20 observations for the jackknife");
  Estimator fallback;
  const Estimator& est = estimator_or_default(options, fallback);

  const double theta = f.extract(est(s));
  const double z0 = bias_correction(estimates, theta);
  if (!std::isfinite(z0)) {
    BootstrapInterval ci = percentile_interval(estimates, level, theta);
    ci.warnings.emplace_back("all bootstrap estimates lie on one side of the estimate; "
                             "fell back to the percentile interval");
    return ci;
  }

  BootstrapOptions jack_options = options;
  jack_options.estimator = est;
  const std::vector<double> jack = jackknife_values(s, f, jack_options);
  BootstrapInterval ci = bca_interval_from(estimates, theta, z0, jackknife_acceleration(jack), level);
  if (s.size() > kJackknifeExactLimit)
    ci.warnings.emplace_back("acceleration from a grouped jackknife (" +
                             std::to_string(kJackknifeBlocks) + " blocks)");
  return ci;
}

BootstrapInterval two_sample_location_diff(const SortedSample& s1, const SortedSample& s2,
                                           IntervalMethod method, double level,
                                           std::size_t b_count, std::uint64_t seed,
                                           const BootstrapOptions& options)
{
  check_level(level);
  if (b_count < kMinResamples)
    throw DomainError("two_sample_location_diff: need at least " +
                      std::to_string(kMinResamples) + " resamples");
  Estimator fallback;
  const Estimator& est = estimator_or_default(options, fallback);
  const Functional loc = Functional::location();

  const double theta = loc.extract(est(s1)) - loc.extract(est(s2));

  std::vector<double> diffs(b_count);
  parallel_for(b_count, options.workers, [&](std::size_t r) {
    const double a = with_retries(derive_seed(seed, 2 * r), [&](std::uint64_t sd) {
      return loc.extract(est(resample(s1, sd)));
    });
    const double b = with_retries(derive_seed(seed, 2 * r + 1), [&](std::uint64_t sd) {
      return loc.extract(est(resample(s2, sd)));
    });
    diffs[r] = a - b;
  });

  if (method == IntervalMethod::percentile)
    return percentile_interval(diffs, level, theta);

  const double z0 = bias_correction(diffs, theta);
  if (!std::isfinite(z0)) {
    BootstrapInterval ci = percentile_interval(diffs, level, theta);
    ci.warnings.emplace_back("all bootstrap estimates lie on one side of the estimate; "
                             "fell back to the percentile interval");
    return ci;
  }

  // Influence of each sample on the difference: lambda1(s2) enters with a
  // negative sign.
  BootstrapOptions jack_options = options;
  jack_options.estimator = est;
  std::vector<double> dev = centred_deviations(jackknife_values(s1, loc, jack_options), 1.0);
  const std::vector<double> dev2 = centred_deviations(jackknife_values(s2, loc, jack_options), -1.0);
  dev.insert(dev.end(), dev2.begin(), dev2.end());

  BootstrapInterval ci =
      bca_interval_from(diffs, theta, z0, acceleration_from_deviations(dev), level);
  if (s1.size() > kJackknifeExactLimit || s2.size() > kJackknifeExactLimit)
    ci.warnings.emplace_back("acceleration from a grouped jackknife (" +
                             std::to_string(kJackknifeBlocks) + " blocks)");
  return ci;
}

} // namespace gldpdq
