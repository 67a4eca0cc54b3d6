#include "gldpdq/gld.hpp"

#include "gldpdq/errors.hpp"
#include "gldpdq/quadrature.hpp"
#include "gldpdq/random.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gldpdq {

namespace {

constexpr std::size_t kKappaNodes = 64;

void check_probability(double u, const char* what)
{
  if (!(u > 0.0 && u < 1.0))
    throw DomainError(std::string(what) + ": u must lie in (0, 1), got " + std::to_string(u));
}

// Gauss-Legendre nodes on (0, 1) pushed twice through the smoothstep map
// t -> t^2 (3 - 2t). The map has zero derivative at both ends, which turns
// the u^a endpoint behaviour of the density quantile into a smooth
// integrand. 1 - u is formed from the mirrored node to keep full precision.
struct KappaRule
{
  double log_u[kKappaNodes];
  double log_1mu[kKappaNodes];
  double weight[kKappaNodes];
};

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }
double smoothstep_slope(double t) { return 6.0 * t * (1.0 - t); }

const KappaRule& kappa_rule()
{
  static const KappaRule rule = [] {
    KappaRule r{};
    const QuadratureRule gl = gauss_legendre(kKappaNodes, 0.0, 1.0);
    for (std::size_t i = 0; i < kKappaNodes; ++i) {
      const double s = gl.nodes[i];
      const double t = smoothstep(s);
      const double u = smoothstep(t);
      const double v = smoothstep(smoothstep(1.0 - s));
      r.log_u[i] = std::log(u);
      r.log_1mu[i] = std::log(v);
      r.weight[i] = gl.weights[i] * smoothstep_slope(s) * smoothstep_slope(t);
    }
    return r;
  }();
  return rule;
}

} // namespace

GldParams::GldParams(double lambda1, double lambda2, double lambda3, double lambda4)
  : lambda1_(lambda1), lambda2_(lambda2), lambda3_(lambda3), lambda4_(lambda4)
{
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2) || !std::isfinite(lambda3) ||
      !std::isfinite(lambda4))
    throw DomainError("GldParams: all parameters must be finite");
  if (!(lambda2 > 0.0))
    throw DomainError("GldParams: lambda2 must be positive");
}

namespace shape {

double box_cox(double log_p, double lambda) noexcept
{
  if (std::abs(lambda) < kZeroShapeThreshold)
    return log_p;
  return std::expm1(lambda * log_p) / lambda;
}

double kappa(double l3, double l4) noexcept
{
  const KappaRule& r = kappa_rule();
  double sum = 0.0;
  for (std::size_t i = 0; i < kKappaNodes; ++i)
    sum += r.weight[i] * density_quantile(r.log_u[i], r.log_1mu[i], l3, l4);
  return sum;
}

} // namespace shape

double quantile(const GldParams& p, double u)
{
  check_probability(u, "quantile");
  const double left = shape::box_cox(std::log(u), p.lambda3());
  const double right = shape::box_cox(std::log1p(-u), p.lambda4());
  return p.lambda1() + (left - right) / p.lambda2();
}

double quantile_density(const GldParams& p, double u)
{
  check_probability(u, "quantile_density");
  return 1.0 / (p.lambda2() * shape::density_quantile(std::log(u), std::log1p(-u), p.lambda3(),
                                                       p.lambda4()));
}

double density_quantile(const GldParams& p, double u)
{
  check_probability(u, "density_quantile");
  return p.lambda2() *
         shape::density_quantile(std::log(u), std::log1p(-u), p.lambda3(), p.lambda4());
}

double kappa(const GldParams& p)
{
  const double k = shape::kappa(p.lambda3(), p.lambda4());
  if (!std::isfinite(k) || !(k > 0.0))
    throw NumericError("kappa: non-finite density quantile integral");
  return p.lambda2() * k;
}

double pdq(const GldParams& p, double u)
{
  check_probability(u, "pdq");
  const double k = shape::kappa(p.lambda3(), p.lambda4());
  if (!std::isfinite(k) || !(k > 0.0))
    throw NumericError("pdq: non-finite density quantile integral");
  return shape::density_quantile(std::log(u), std::log1p(-u), p.lambda3(), p.lambda4()) / k;
}

std::vector<double> sample(const GldParams& p, std::size_t n, std::uint64_t seed)
{
  if (n == 0)
    throw DomainError("sample: n must be at least 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& x : out)
    x = quantile(p, rng.uniform_open());
  return out;
}

Support support(const GldParams& p)
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  Support s{-inf, inf};
  if (p.lambda3() > 0.0)
    s.lower = p.lambda1() - 1.0 / (p.lambda2() * p.lambda3());
  if (p.lambda4() > 0.0)
    s.upper = p.lambda1() + 1.0 / (p.lambda2() * p.lambda4());
  return s;
}

double cdf(const GldParams& p, double x)
{
  if (std::isnan(x))
    throw DomainError("cdf: x is NaN");
  const Support s = support(p);
  if (x <= s.lower)
    return 0.0;
  if (x >= s.upper)
    return 1.0;

  // Bisection keeps the bracket [lo, hi] with Q(lo) < x <= Q(hi).
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    const double q = quantile(p, mid);
    if (q == x)
      return mid;
    if (q < x)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace gldpdq
