#pragma once

#include "gldpdq/gld.hpp"
#include "gldpdq/qdensity.hpp"

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

namespace gldpdq {

struct KsResult
{
  double statistic;
  double p_value;
  std::size_t n;
  //! The asymptotic p-value is rough for small samples (n < 30).
  bool approximate;
};

//! D = max_i max(|i/n - F(X_(i))|, |(i-1)/n - F(X_(i))|) with F the GLD cdf.
double ks_statistic(const SortedSample& s, const GldParams& p);

//! Asymptotic Kolmogorov p-value 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 n d^2),
//! summed until a term falls below 1e-12, clamped to [0, 1]. For
//! sqrt(n) d < 1 the equivalent theta-function series is used instead.
double ks_pvalue(double d, std::size_t n);

KsResult ks_test(const SortedSample& s, const GldParams& p);

//! The alternating series with exactly `terms` terms, unclamped. Exposed to
//! check truncation.
double kolmogorov_series(double lambda, std::size_t terms);

struct QqPoint
{
  double sample;
  double model;
};

//! (X_(i), Q((i - 1/2)/n)) for i = 1..n.
std::vector<QqPoint> qq_data(const SortedSample& s, const GldParams& p);

//! Two-column CSV with header "sample,model".
void write_qq_csv(std::ostream& os, std::span<const QqPoint> points);

} // namespace gldpdq
