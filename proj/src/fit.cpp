#include "gldpdq/fit.hpp"

#include "gldpdq/errors.hpp"
#include "gldpdq/optimize.hpp"
#include "gldpdq/stats.hpp"

#include <algorithm>
#include <cmath>

namespace gldpdq {

namespace {

constexpr std::size_t kMaxIterations = 500;

} // namespace

std::vector<ShapePair> StartGrid::pairs()
{
  std::vector<ShapePair> out;
  out.reserve(kValues.size() * kValues.size());
  for (double l3 : kValues)
    for (double l4 : kValues)
      out.push_back({l3, l4});
  return out;
}

QuartileSet::QuartileSet(double q25_, double q50_, double q75_) : q25(q25_), q50(q50_), q75(q75_)
{
  if (!(q25 <= q50 && q50 <= q75))
    throw DegenerateSampleError("quartiles are not ordered");
  if (!(q25 < q75))
    throw DegenerateSampleError("degenerate sample: lower and upper quartiles coincide");
}

PdqObjective::PdqObjective(const EmpiricalPdq& target)
  : target_(target.values.begin(), target.values.end())
{
  const auto u = target.grid.points();
  log_u_.reserve(u.size());
  log_1mu_.reserve(u.size());
  for (double p : u) {
    log_u_.push_back(std::log(p));
    log_1mu_.push_back(std::log1p(-p));
  }
}

double PdqObjective::operator()(double lambda3, double lambda4) const noexcept
{
  const double k = shape::kappa(lambda3, lambda4);
  double sum = 0.0;
  for (std::size_t j = 0; j < target_.size(); ++j) {
    const double model = shape::density_quantile(log_u_[j], log_1mu_[j], lambda3, lambda4) / k;
    const double d = target_[j] - model;
    sum += d * d;
  }
  return std::isfinite(sum) ? sum : kObjectiveSentinel;
}

double objective(double lambda3, double lambda4, const EmpiricalPdq& e)
{
  return PdqObjective(e)(lambda3, lambda4);
}

double sample_quantile(const SortedSample& s, double p)
{
  return sample_quantile(s.values(), p);
}

double c_factor(double p, double lambda3, double lambda4)
{
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("c_factor: p must lie in (0, 1)");
  return shape::box_cox(std::log(p), lambda3) - shape::box_cox(std::log1p(-p), lambda4);
}

LocationScale match_location_scale(const QuartileSet& q, double lambda3, double lambda4)
{
  const double spread = c_factor(0.75, lambda3, lambda4) - c_factor(0.25, lambda3, lambda4);
  const double lambda2 = spread / (q.q75 - q.q25);
  if (!(lambda2 > 0.0) || !std::isfinite(lambda2))
    throw NumericError("match_location_scale: non-positive inverse scale");
  const double lambda1 = q.q50 - c_factor(0.5, lambda3, lambda4) / lambda2;
  return {lambda1, lambda2};
}

ShapeFit fit_shape(const EmpiricalPdq& e)
{
  const PdqObjective obj(e);

  struct Ranked
  {
    double value;
    std::size_t index;
    ShapePair start;
  };
  const std::vector<ShapePair> pairs = StartGrid::pairs();
  std::vector<Ranked> ranked;
  ranked.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    ranked.push_back({obj(pairs[i].lambda3, pairs[i].lambda4), i, pairs[i]});
  std::partial_sort(ranked.begin(), ranked.begin() + kRefinedStarts, ranked.end(),
                    [](const Ranked& a, const Ranked& b) {
                      return a.value < b.value || (a.value == b.value && a.index < b.index);
                    });
  const double best_value = ranked.front().value;

  const Objective f = [&obj](std::span<const double> x) { return obj(x[0], x[1]); };
  const auto refine = [&f](ShapePair start) {
    NelderMeadOptions options;
    options.lower = {kShapeLowerBound, kShapeLowerBound};
    options.upper = {kShapeUpperBound, kShapeUpperBound};
    options.max_iterations = kMaxIterations;
    MinimizeResult run = nelder_mead(f, {start.lambda3, start.lambda4}, options);
    std::size_t used = run.iterations;
    // A collapsed simplex can stall short of the minimum; one restart with a
    // fresh, smaller simplex from the incumbent settles it.
    if (used < kMaxIterations) {
      options.initial_step = 0.01;
      options.max_iterations = kMaxIterations - used;
      MinimizeResult again = nelder_mead(f, run.x, options);
      used += again.iterations;
      if (again.value <= run.value)
        run = std::move(again);
      else
        run.converged = again.converged;
    }
    return ShapeFit{{run.x[0], run.x[1]}, run.value, start, used, run.converged};
  };

  ShapeFit out = refine(ranked.front().start);
  std::size_t total = out.iterations;
  for (std::size_t k = 1; k < kRefinedStarts; ++k) {
    ShapeFit other = refine(ranked[k].start);
    total += other.iterations;
    if (other.objective < out.objective)
      out = other;
  }
  out.iterations = total;
  if (!(out.objective <= best_value)) {
    out.shape = ranked.front().start;
    out.start = ranked.front().start;
    out.objective = best_value;
  }
  return out;
}

FitResult fit(const SortedSample& s, const BandwidthSpec& spec)
{
  const auto t0 = std::chrono::steady_clock::now();

  ProbabilityGrid grid = make_grid(s.size());
  const EmpiricalPdq e = empirical_pdq(s, grid, spec);
  const ShapeFit sf = fit_shape(e);

  const QuartileSet q(sample_quantile(s, 0.25), sample_quantile(s, 0.5), sample_quantile(s, 0.75));
  const LocationScale ls = match_location_scale(q, sf.shape.lambda3, sf.shape.lambda4);

  std::vector<std::string> warnings;
  if (!sf.converged)
    warnings.emplace_back("shape optimiser reached its iteration limit");
  if (e.clamped > 0)
    warnings.emplace_back(std::to_string(e.clamped) +
                          " grid point(s) had a non-positive quantile density estimate");

  const auto elapsed = std::chrono::steady_clock::now() - t0;
  return FitResult{GldParams(ls.lambda1, ls.lambda2, sf.shape.lambda3, sf.shape.lambda4),
                   sf.objective,
                   sf.start,
                   sf.iterations,
                   std::move(grid),
                   std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed),
                   std::move(warnings)};
}

} // namespace gldpdq
