#pragma once

#include <functional>
#include <vector>

namespace kies {

struct NelderMeadOptions {
  int max_iterations = 4000;
  /// Converged once the spread of simplex values and the simplex diameter are both below these.
  double f_tol = 1e-10;
  double x_tol = 1e-9;
  /// Initial simplex: x0 plus `step` along each axis.
  double step = 0.5;
  /// After convergence the simplex is rebuilt around the best vertex and the
  /// search resumed, up to this many times, while it keeps improving.
  int restarts_on_convergence = 3;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f;
  int iterations;
  int evaluations;
  bool converged;
};

/// Derivative-free minimisation with standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 1/2, 1/2). Non-finite objective values count as +infinity.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opt = {});

}  // namespace kies
