#include "gldpdq/bootstrap.hpp"
#include "gldpdq/errors.hpp"
#include "gldpdq/gld.hpp"
#include "gldpdq/stats.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

using namespace gldpdq;
using Catch::Approx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Stand-in estimator whose location is the sample mean; gives closed-form
// jackknife values and keeps the heavier tests fast.
FitResult mean_fit(const SortedSample& s)
{
  return FitResult{GldParams(mean(s.values()), 1, 1, 1), 0.0, {1, 1}, 0, ProbabilityGrid(2),
                   std::chrono::nanoseconds(0), {}};
}

BootstrapOptions mean_options()
{
  BootstrapOptions o;
  o.estimator = mean_fit;
  return o;
}

std::vector<double> one_to(int n)
{
  std::vector<double> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

} // namespace

TEST_CASE("functionals")
{
  const FitResult r{GldParams(2, 3, 0.4, 0.1), 0, {0, 0}, 0, ProbabilityGrid(2), {}, {}};
  CHECK(Functional::location().extract(r) == 2.0);
  CHECK(Functional::skew_diff().extract(r) == Approx(0.3));
  CHECK(Functional::location().kind == FunctionalKind::location);
  CHECK(Functional::skew_diff().kind == FunctionalKind::skew_diff);
  CHECK_THROWS_AS(Functional::custom({}), DomainError);
}

TEST_CASE("resample estimates")
{
  const SortedSample s(sample({0, 1, 1, 1}, 500, 1));
  CHECK_THROWS_AS(resample_estimates(s, Functional::location(), 99, 1), DomainError);

  const auto three = resample_estimates(s, Functional::custom([](const FitResult&) { return 3.0; }),
                                        100, 1, mean_options());
  CHECK(three == std::vector<double>(100, 3.0));

  const auto a = resample_estimates(s, Functional::location(), 500, 7);
  CHECK(std::abs(mean(a)) < 0.1);
  const auto b = resample_estimates(s, Functional::location(), 500, 7);
  CHECK(a == b);
  BootstrapOptions four;
  four.workers = 4;
  CHECK(resample_estimates(s, Functional::location(), 500, 7, four) == a);
  CHECK(resample_estimates(s, Functional::location(), 500, 8) != a);
}

TEST_CASE("resamples draw from the sample")
{
  const SortedSample s(one_to(50));
  const SortedSample r = resample(s, 3);
  CHECK(r.size() == 50);
  for (double x : r.values())
    CHECK(std::binary_search(s.values().begin(), s.values().end(), x));
  CHECK(resample(s, 3).values().size() == r.size());
  CHECK(std::equal(r.values().begin(), r.values().end(), resample(s, 3).values().begin()));
}

TEST_CASE("percentile interval")
{
  const auto x = one_to(100);
  const BootstrapInterval ci = percentile_interval(x, 0.95);
  CHECK(ci.lower == Approx(3.475).epsilon(1e-14));
  CHECK(ci.upper == Approx(97.525).epsilon(1e-14));
  CHECK(ci.method == IntervalMethod::percentile);
  CHECK(ci.b_count == 100);
  CHECK_FALSE(ci.z0.has_value());
  CHECK_FALSE(ci.accel.has_value());

  const BootstrapInterval flat = percentile_interval(std::vector<double>(50, 2.5), 0.9);
  CHECK(flat.lower == 2.5);
  CHECK(flat.upper == 2.5);

  const BootstrapInterval half = percentile_interval(x, 0.5);
  CHECK(half.upper - 50.5 == Approx(50.5 - half.lower));

  CHECK_THROWS_AS(percentile_interval(x, 0.0), DomainError);
  CHECK_THROWS_AS(percentile_interval(x, 1.0), DomainError);
  CHECK_THROWS_AS(percentile_interval(x, 1.2), DomainError);
  CHECK_THROWS_AS(percentile_interval(std::vector<double>{}, 0.9), DomainError);
}

TEST_CASE("percentile intervals widen with the level")
{
  oracle::ParamGen gen(41);
  std::vector<double> x(300);
  for (double& v : x)
    v = gen.uniform(-2, 5) * gen.uniform(0, 1);
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (double level = 0.05; level < 0.995; level += 0.05) {
    const BootstrapInterval ci = percentile_interval(x, level);
    CHECK(ci.lower <= ci.upper);
    CHECK(ci.lower <= lo);
    CHECK(ci.upper >= hi);
    lo = ci.lower;
    hi = ci.upper;
  }
}

TEST_CASE("bias correction")
{
  const auto x = one_to(100);
  CHECK(bias_correction(x, 50.5) == 0.0);
  CHECK(bias_correction(x, 0.5) == -HUGE_VAL);
  CHECK(bias_correction(x, 1000) == HUGE_VAL);
  CHECK(bias_correction(x, 90.5) == Approx(normal_quantile(0.9)));
}

TEST_CASE("BCa with no bias and no acceleration is the percentile interval")
{
  oracle::ParamGen gen(42);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(100 + t);
    for (double& v : x)
      v = gen.uniform(-1, 1) + gen.uniform(0, 3) * gen.uniform(0, 1);
    const double level = gen.uniform(0.5, 0.99);
    const BootstrapInterval p = percentile_interval(x, level);
    const BootstrapInterval b = bca_interval_from(x, 0.0, 0.0, 0.0, level);
    CHECK(b.lower == p.lower);
    CHECK(b.upper == p.upper);
    CHECK(b.method == IntervalMethod::bca);
    CHECK(b.z0 == 0.0);
    CHECK(b.accel == 0.0);
  }
}

TEST_CASE("BCa on symmetric estimates stays within one order-statistic gap")
{
  const auto x = one_to(200);
  const double theta = 100.5;
  const double z0 = bias_correction(x, theta);
  const BootstrapInterval b = bca_interval_from(x, theta, z0, 0.0, 0.95);
  const BootstrapInterval p = percentile_interval(x, 0.95);
  CHECK(std::abs(b.lower - p.lower) <= 1.0);
  CHECK(std::abs(b.upper - p.upper) <= 1.0);
}

TEST_CASE("BCa levels follow the adjustment formula")
{
  const auto x = one_to(1000);
  const double z0 = 0.2, a = 0.05;
  const BootstrapInterval b = bca_interval_from(x, 0.0, z0, a, 0.9);
  const auto adjusted = [&](double p) {
    const double z = normal_quantile(p);
    return normal_cdf(z0 + (z0 + z) / (1 - a * (z0 + z)));
  };
  CHECK(b.lower == Approx(oracle::type7(x, adjusted(0.05))).epsilon(1e-12));
  CHECK(b.upper == Approx(oracle::type7(x, adjusted(0.95))).epsilon(1e-12));
  CHECK_THROWS_AS(bca_interval_from(x, 0.0, HUGE_VAL, 0.0, 0.9), DomainError);
}

TEST_CASE("jackknife acceleration")
{
  CHECK(jackknife_acceleration(std::vector<double>(10, 4.0)) == 0.0);
  CHECK(jackknife_acceleration(std::vector<double>{}) == 0.0);
  const std::vector<double> j{1.0, 2.0, 4.0, 8.0};
  const double m = 3.75;
  double s2 = 0, s3 = 0;
  for (double v : j) {
    s2 += (m - v) * (m - v);
    s3 += (m - v) * (m - v) * (m - v);
  }
  CHECK(jackknife_acceleration(j) == Approx(s3 / (6 * std::pow(s2, 1.5))).epsilon(1e-14));
}

TEST_CASE("jackknife of the mean has closed-form values")
{
  oracle::ParamGen gen(43);
  std::vector<double> x(60);
  for (double& v : x)
    v = std::exp(gen.uniform(-1, 2));
  const SortedSample s(x);
  const auto jack = jackknife_values(s, Functional::location(), mean_options());
  REQUIRE(jack.size() == 60);
  const double total = std::accumulate(s.values().begin(), s.values().end(), 0.0);
  for (std::size_t i = 0; i < 60; ++i)
    CHECK(jack[i] == Approx((total - s[i]) / 59.0).epsilon(1e-13));

  // For the mean the acceleration reduces to a sample skewness expression.
  const double m = total / 60.0;
  double s2 = 0, s3 = 0;
  for (double v : s.values()) {
    s2 += (v - m) * (v - m);
    s3 += (v - m) * (v - m) * (v - m);
  }
  CHECK(jackknife_acceleration(jack) == Approx(s3 / (6 * std::pow(s2, 1.5))).epsilon(1e-9));
}

TEST_CASE("grouped jackknife above the exact limit")
{
  std::vector<double> x(2500);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = static_cast<double>(i);
  const SortedSample s(x);
  const auto jack = jackknife_values(s, Functional::location(), mean_options());
  REQUIRE(jack.size() == kJackknifeBlocks);
  // Block g drops every index congruent to g modulo the block count.
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  for (std::size_t g = 0; g < kJackknifeBlocks; ++g) {
    double dropped = 0;
    std::size_t count = 0;
    for (std::size_t i = g; i < x.size(); i += kJackknifeBlocks) {
      dropped += x[i];
      ++count;
    }
    CHECK(jack[g] == Approx((total - dropped) / static_cast<double>(x.size() - count)).epsilon(1e-13));
  }
  const auto boot = resample_estimates(s, Functional::location(), 200, 5, mean_options());
  const BootstrapInterval ci = bca_interval(s, Functional::location(), boot, 0.95, mean_options());
  CHECK(std::any_of(ci.warnings.begin(), ci.warnings.end(),
                    [](const std::string& w) { return w.find("grouped") != std::string::npos; }));
}

TEST_CASE("BCa interval on a fitted sample")
{
  const SortedSample s(sample({0, 1.442, 0.1469, 0.1469}, 100, 3));
  const auto boot = resample_estimates(s, Functional::location(), 300, 11);
  const BootstrapInterval ci = bca_interval(s, Functional::location(), boot, 0.95);
  CHECK(ci.method == IntervalMethod::bca);
  REQUIRE(ci.z0.has_value());
  REQUIRE(ci.accel.has_value());
  CHECK(std::isfinite(*ci.z0));
  CHECK(std::abs(*ci.accel) < 0.5);
  CHECK(ci.lower <= ci.upper);
  CHECK(ci.lower < ci.estimate);
  CHECK(ci.estimate < ci.upper);
  CHECK(ci.estimate == fit(s).params.lambda1());

  const SortedSample small(one_to(19));
  CHECK_THROWS_AS(bca_interval(small, Functional::location(), boot, 0.95), DomainError);
}

TEST_CASE("BCa falls back to percentile when every estimate is on one side")
{
  const SortedSample s(one_to(30));
  const Functional three = Functional::custom([](const FitResult&) { return 3.0; });
  const auto boot = resample_estimates(s, three, 100, 1, mean_options());
  const BootstrapInterval ci = bca_interval(s, three, boot, 0.95, mean_options());
  CHECK(ci.method == IntervalMethod::percentile);
  CHECK_FALSE(ci.warnings.empty());
  CHECK(ci.lower == 3.0);
  CHECK(ci.upper == 3.0);
}

TEST_CASE("location intervals shift with the data")
{
  const auto raw = sample({0, 1, 0.5, 0.6}, 200, 9);
  std::vector<double> moved(raw);
  for (double& v : moved)
    v += 12.5;
  const SortedSample a(raw), b(moved);
  const auto ea = resample_estimates(a, Functional::location(), 200, 4);
  const auto eb = resample_estimates(b, Functional::location(), 200, 4);
  const BootstrapInterval pa = percentile_interval(ea, 0.9);
  const BootstrapInterval pb = percentile_interval(eb, 0.9);
  CHECK_THAT(pb.lower, WithinAbs(pa.lower + 12.5, 1e-9));
  CHECK_THAT(pb.upper, WithinAbs(pa.upper + 12.5, 1e-9));
}

TEST_CASE("two-sample location difference")
{
  const auto base = sample({0, 1, 0.5, 0.6}, 150, 21);
  const SortedSample s(base);
  const BootstrapInterval same =
      two_sample_location_diff(s, s, IntervalMethod::percentile, 0.95, 200, 5);
  CHECK(same.estimate == 0.0);
  CHECK(same.lower < 0.0);
  CHECK(same.upper > 0.0);

  std::vector<double> shifted(base);
  for (double& v : shifted)
    v += 2.276;
  const SortedSample s1(shifted);
  const BootstrapInterval d = two_sample_location_diff(s1, s, IntervalMethod::percentile, 0.95, 200, 5);
  CHECK_THAT(d.estimate, WithinAbs(2.276, 1e-9));
  CHECK(d.lower < 2.276);
  CHECK(d.upper > 2.276);
  const BootstrapInterval again =
      two_sample_location_diff(s1, s, IntervalMethod::percentile, 0.95, 200, 5);
  CHECK(again.lower == d.lower);
  CHECK(again.upper == d.upper);

  const BootstrapInterval bca = two_sample_location_diff(s1, s, IntervalMethod::bca, 0.95, 200, 5);
  CHECK(bca.method == IntervalMethod::bca);
  CHECK(bca.z0.has_value());
  CHECK(bca.accel.has_value());
  CHECK(bca.lower < bca.upper);
  CHECK_THROWS_AS(two_sample_location_diff(s1, s, IntervalMethod::bca, 0.95, 50, 5), DomainError);
}

TEST_CASE("two-sample acceleration combines both jackknives")
{
  oracle::ParamGen gen(44);
  std::vector<double> x(40), y(30);
  for (double& v : x)
    v = std::exp(gen.uniform(-1, 2));
  for (double& v : y)
    v = gen.uniform(0, 1);
  const SortedSample s1(x), s2(y);
  const BootstrapInterval ci =
      two_sample_location_diff(s1, s2, IntervalMethod::bca, 0.9, 400, 3, mean_options());
  REQUIRE(ci.accel.has_value());

  // Influence of the difference of means: +deviations of s1, -deviations of s2.
  const auto dev = [](const SortedSample& s, double sign) {
    std::vector<double> d;
    const double m = mean(s.values());
    const double n = static_cast<double>(s.size());
    for (double v : s.values())
      d.push_back(sign * (v - m) / (n - 1));
    return d;
  };
  auto d = dev(s1, 1.0);
  const auto d2 = dev(s2, -1.0);
  d.insert(d.end(), d2.begin(), d2.end());
  double s2sum = 0, s3sum = 0;
  for (double v : d) {
    s2sum += v * v;
    s3sum += v * v * v;
  }
  CHECK(*ci.accel == Approx(s3sum / (6 * std::pow(s2sum, 1.5))).epsilon(1e-9));
}

TEST_CASE("failed resample fits are retried")
{
  int calls = 0;
  BootstrapOptions flaky;
  flaky.estimator = [&calls](const SortedSample& s) {
    if (++calls % 3 == 0)
      throw EstimationError("flaky");
    return mean_fit(s);
  };
  const SortedSample s(one_to(30));
  const auto est = resample_estimates(s, Functional::location(), 100, 1, flaky);
  CHECK(est.size() == 100);

  BootstrapOptions broken;
  broken.estimator = [](const SortedSample&) -> FitResult { throw EstimationError("always"); };
  CHECK_THROWS_AS(resample_estimates(s, Functional::location(), 100, 1, broken), EstimationError);
}
