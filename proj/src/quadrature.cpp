#include "gldpdq/quadrature.hpp"

#include "gldpdq/errors.hpp"

#include <cmath>
#include <numbers>

namespace gldpdq {

QuadratureRule gauss_legendre(std::size_t n, double a, double b)
{
  if (n == 0)
    throw DomainError("gauss_legendre: need at least one node");

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const double mid = 0.5 * (b + a);
  const double half = 0.5 * (b - a);
  const std::size_t m = (n + 1) / 2;
  const double nd = static_cast<double>(n);

  for (std::size_t i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        const double jd = static_cast<double>(j);
        p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
      }
      dp = nd * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15)
        break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

} // namespace gldpdq
