#include "gldpdq/optimize.hpp"

#include "gldpdq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gldpdq {

namespace {

struct Vertex
{
  std::vector<double> x;
  double f;
};

} // namespace

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0,
                           const NelderMeadOptions& options)
{
  const std::size_t dim = x0.size();
  if (dim == 0)
    throw DomainError("nelder_mead: empty starting point");
  const bool boxed = !options.lower.empty();
  if (boxed && (options.lower.size() != dim || options.upper.size() != dim))
    throw DomainError("nelder_mead: bounds do not match the dimension");

  auto project = [&](std::vector<double>& x) {
    if (!boxed)
      return;
    for (std::size_t k = 0; k < dim; ++k)
      x[k] = std::clamp(x[k], options.lower[k], options.upper[k]);
  };
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    return std::isnan(v) ? HUGE_VAL : v;
  };

  project(x0);
  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back({x0, eval(x0)});
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<double> x = x0;
    x[k] += options.initial_step;
    if (boxed && x[k] > options.upper[k])
      x[k] = x0[k] - options.initial_step;
    project(x);
    simplex.push_back({x, eval(x)});
  }

  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };

  std::vector<double> centroid(dim);
  auto along = [&](double t) {
    // centroid + t (centroid - worst)
    std::vector<double> x(dim);
    for (std::size_t k = 0; k < dim; ++k)
      x[k] = centroid[k] + t * (centroid[k] - simplex.back().x[k]);
    project(x);
    return x;
  };

  std::size_t iter = 0;
  bool converged = false;
  order();
  while (iter < options.max_iterations) {
    const double spread = simplex.back().f - simplex.front().f;
    double size = 0.0;
    for (std::size_t v = 1; v <= dim; ++v)
      for (std::size_t k = 0; k < dim; ++k)
        size = std::max(size, std::abs(simplex[v].x[k] - simplex[0].x[k]));
    if (spread < options.f_tol || size < options.x_tol) {
      converged = true;
      break;
    }
    ++iter;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < dim; ++v)
      for (std::size_t k = 0; k < dim; ++k)
        centroid[k] += simplex[v].x[k];
    for (double& c : centroid)
      c /= static_cast<double>(dim);

    Vertex reflected{along(1.0), 0.0};
    reflected.f = eval(reflected.x);

    if (reflected.f < simplex.front().f) {
      Vertex expanded{along(2.0), 0.0};
      expanded.f = eval(expanded.x);
      simplex.back() = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
    } else if (reflected.f < simplex[dim - 1].f) {
      simplex.back() = std::move(reflected);
    } else {
      const bool outside = reflected.f < simplex.back().f;
      Vertex contracted{along(outside ? 0.5 : -0.5), 0.0};
      contracted.f = eval(contracted.x);
      if (contracted.f < std::min(reflected.f, simplex.back().f)) {
        simplex.back() = std::move(contracted);
      } else {
        for (std::size_t v = 1; v <= dim; ++v) {
          for (std::size_t k = 0; k < dim; ++k)
            simplex[v].x[k] = simplex[0].x[k] + 0.5 * (simplex[v].x[k] - simplex[0].x[k]);
          simplex[v].f = eval(simplex[v].x);
        }
      }
    }
    order();
  }

  return MinimizeResult{simplex.front().x, simplex.front().f, iter, converged};
}

} // namespace gldpdq
