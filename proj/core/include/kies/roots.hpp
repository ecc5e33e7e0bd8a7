#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace kies {

struct Bracket {
  double lo;
  double hi;
};

/// Bisection on [lo, hi] for a function whose sign at lo is `sign_lo` (and
/// opposite at hi). The endpoints themselves are never evaluated, so limits
/// at the ends of an open domain can be supplied through `sign_lo`.
/// Stops once the bracket is narrower than `abs_tol` or cannot be split.
template <class F>
double bisect(F&& f, double lo, double hi, bool negative_at_lo, double abs_tol = 1e-12,
              int max_iter = 400) {
  for (int i = 0; i < max_iter && hi - lo > abs_tol; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if (v == 0.0) return mid;
    if ((v < 0.0) == negative_at_lo)
      lo = mid;
    else
      hi = mid;
  }
  return lo + 0.5 * (hi - lo);
}

/// Locates the sign changes of f on the grid {step, 2*step, ...} inside (0, 1),
/// using the supplied endpoint limit signs for the outermost cells.
template <class F, class Out>
void scan_sign_changes(F&& f, int sign_at_0, int sign_at_1, double step, Out out) {
  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  double prev_t = 0.0;
  int prev_s = sign_at_0;
  const auto cells = static_cast<long>(std::floor(1.0 / step));
  for (long k = 1; k <= cells; ++k) {
    const double t = (k == cells) ? 1.0 : static_cast<double>(k) * step;
    const int s = (k == cells) ? sign_at_1 : sgn(f(t));
    if (s != 0 && prev_s != 0 && s != prev_s) out(Bracket{prev_t, t});
    if (s != 0) {
      prev_s = s;
      prev_t = t;
    }
  }
}

/// Finds the root of an increasing function on [0, inf) with f(0) < target by
/// doubling the upper end from 1 until f crosses `target`, then bisecting.
template <class F>
std::optional<double> expand_and_bisect(F&& f, double target, double abs_tol = 1e-12,
                                        int max_doublings = 20) {
  double lo = 0.0;
  double hi = 1.0;
  int k = 0;
  while (!(f(hi) >= target)) {
    if (++k > max_doublings) return std::nullopt;
    lo = hi;
    hi *= 2.0;
  }
  auto g = [&](double x) { return f(x) - target; };
  return bisect(g, lo, hi, true, abs_tol);
}

}  // namespace kies
