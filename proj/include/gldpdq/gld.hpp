#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace gldpdq {

//! Shape values with magnitude below this use the logarithmic limit of
//! (u^lambda - 1) / lambda.
inline constexpr double kZeroShapeThreshold = 1e-8;

//! FMKL generalized lambda distribution parameters.
//!
//! lambda1 is the location, lambda2 > 0 the inverse scale, lambda3 and
//! lambda4 the left and right tail shapes.
class GldParams
{
public:
  GldParams(double lambda1, double lambda2, double lambda3, double lambda4);

  double lambda1() const noexcept { return lambda1_; }
  double lambda2() const noexcept { return lambda2_; }
  double lambda3() const noexcept { return lambda3_; }
  double lambda4() const noexcept { return lambda4_; }

  friend bool operator==(const GldParams&, const GldParams&) = default;

private:
  double lambda1_;
  double lambda2_;
  double lambda3_;
  double lambda4_;
};

struct Support
{
  double lower;
  double upper;
};

double quantile(const GldParams& p, double u);
double quantile_density(const GldParams& p, double u);
double density_quantile(const GldParams& p, double u);
//! Integral of the density quantile over (0, 1).
double kappa(const GldParams& p);
//! Probability density quantile f_Q(u) / kappa; free of lambda1 and lambda2.
double pdq(const GldParams& p, double u);
//! n inverse-transform draws; identical output for identical (p, n, seed).
std::vector<double> sample(const GldParams& p, std::size_t n, std::uint64_t seed);
//! Distribution function by bisection on the quantile function.
double cdf(const GldParams& p, double x);
Support support(const GldParams& p);

//! Building blocks shared with the estimator. Everything here works with
//! lambda1 = 0, lambda2 = 1 and takes log(u), log(1 - u) precomputed so a
//! fixed grid can be evaluated repeatedly without recomputing logarithms.
namespace shape {

//! (p^lambda - 1) / lambda given log(p), with the log limit near zero.
double box_cox(double log_p, double lambda) noexcept;

//! 1 / (u^(l3-1) + (1-u)^(l4-1)).
inline double density_quantile(double log_u, double log_1mu, double l3, double l4) noexcept
{
  return 1.0 / (std::exp((l3 - 1.0) * log_u) + std::exp((l4 - 1.0) * log_1mu));
}

//! Integral of density_quantile over (0, 1). May be non-finite for
//! extreme shapes; callers decide how to react.
double kappa(double l3, double l4) noexcept;

} // namespace shape

} // namespace gldpdq

