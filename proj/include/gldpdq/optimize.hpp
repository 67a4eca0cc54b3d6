#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gldpdq {

struct NelderMeadOptions
{
  //! Stop once the spread of objective values over the simplex drops below this.
  double f_tol = 1e-10;
  //! Stop once every vertex lies within this distance (max-norm) of the best.
  double x_tol = 1e-8;
  std::size_t max_iterations = 500;
  //! Edge length of the initial simplex.
  double initial_step = 0.1;
  //! Optional box; trial points are projected onto it. Empty means unbounded.
  std::vector<double> lower;
  std::vector<double> upper;
};

struct MinimizeResult
{
  std::vector<double> x;
  double value;
  std::size_t iterations;
  bool converged;
};

using Objective = std::function<double(std::span<const double>)>;

//! Derivative-free simplex minimisation (reflection, expansion, contraction,
//! shrink with the standard 1, 2, 1/2, 1/2 coefficients).
MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0,
                           const NelderMeadOptions& options = {});

} // namespace gldpdq
