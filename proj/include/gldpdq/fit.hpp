#pragma once

#include "gldpdq/gld.hpp"
#include "gldpdq/qdensity.hpp"

#include <array>
#include <chrono>
#include <span>
#include <string>
#include <vector>

namespace gldpdq {

struct ShapePair
{
  double lambda3;
  double lambda4;

  friend bool operator==(const ShapePair&, const ShapePair&) = default;
};

//! Starting values for the shape search: every ordered pair of kValues.
struct StartGrid
{
  static constexpr std::array<double, 10> kValues{-0.9, -0.5, -0.1, 0.0, 0.1,
                                                  0.2,  0.4,  0.8,  1.0, 1.5};
  //! All 100 pairs, lexicographic in (lambda3, lambda4).
  static std::vector<ShapePair> pairs();
};

//! Box the shape optimiser is confined to.
inline constexpr double kShapeLowerBound = -5.0;
inline constexpr double kShapeUpperBound = 10.0;
//! Objective value substituted for non-finite evaluations.
inline constexpr double kObjectiveSentinel = 1e300;
//! Number of best start-grid pairs refined by the local search.
inline constexpr std::size_t kRefinedStarts = 3;

struct QuartileSet
{
  //! Throws DegenerateSampleError unless q25 <= q50 <= q75 and q25 < q75.
  QuartileSet(double q25, double q50, double q75);

  double q25;
  double q50;
  double q75;
};

struct LocationScale
{
  double lambda1;
  double lambda2;
};

struct ShapeFit
{
  ShapePair shape;
  double objective;
  ShapePair start;
  std::size_t iterations;
  //! False when the local search hit its iteration cap.
  bool converged;
};

struct FitResult
{
  GldParams params;
  double objective;
  ShapePair start;
  std::size_t iterations;
  ProbabilityGrid grid;
  std::chrono::nanoseconds elapsed;
  std::vector<std::string> warnings;
};

//! Squared distance between empirical and GLD pdQ over a fixed grid,
//! with the grid logarithms computed once.
class PdqObjective
{
public:
  explicit PdqObjective(const EmpiricalPdq& target);

  double operator()(double lambda3, double lambda4) const noexcept;

private:
  std::vector<double> target_;
  std::vector<double> log_u_;
  std::vector<double> log_1mu_;
};

//! sum_j [e_j - pdq(u_j; lambda3, lambda4)]^2; kObjectiveSentinel if not finite.
double objective(double lambda3, double lambda4, const EmpiricalPdq& e);

double sample_quantile(const SortedSample& s, double p);

//! (p^l3 - 1)/l3 - ((1-p)^l4 - 1)/l4 with the zero-shape log limits.
double c_factor(double p, double lambda3, double lambda4);

//! Solves the quartile-matching equations for lambda1 and lambda2.
LocationScale match_location_scale(const QuartileSet& q, double lambda3, double lambda4);

//! Step 1: ranks the start-grid pairs by objective, runs a bounded simplex
//! search from each of the kRefinedStarts best and keeps the lowest result.
//! `start` is the pair the winning search began from; `iterations` totals
//! all searches.
ShapeFit fit_shape(const EmpiricalPdq& e);

//! Both steps on a sample: shapes from the empirical pdQ, then location
//! and scale from the sample quartiles.
FitResult fit(const SortedSample& s, const BandwidthSpec& spec = {});

} // namespace gldpdq
