#include "kies/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace kies {
namespace {

using Vec = std::vector<double>;

struct Run {
  Vec x;
  double f;
  int iterations = 0;
  bool converged = false;
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, Vec x0,
                             const NelderMeadOptions& opt) {
  if (x0.empty()) throw std::invalid_argument("nelder_mead: empty starting point");
  const std::size_t n = x0.size();
  int evaluations = 0;
  auto eval = [&](const Vec& x) {
    ++evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  auto run = [&](const Vec& start, int budget) {
    std::vector<Vec> s(n + 1, start);
    Vec fs(n + 1);
    for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += opt.step;
    for (std::size_t i = 0; i <= n; ++i) fs[i] = eval(s[i]);
    std::vector<std::size_t> order(n + 1);

    Run r;
    for (; r.iterations < budget; ++r.iterations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t second = order[n - 1];

      double diam = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(s[i][k] - s[best][k]));
      const double spread = fs[worst] - fs[best];
      if (std::isfinite(fs[worst]) && spread <= opt.f_tol && diam <= opt.x_tol) {
        r.converged = true;
        break;
      }

      Vec c(n, 0.0);
      for (std::size_t i = 0; i <= n; ++i)
        if (i != worst)
          for (std::size_t k = 0; k < n; ++k) c[k] += s[i][k] / static_cast<double>(n);
      auto along = [&](double coef) {
        Vec y(n);
        for (std::size_t k = 0; k < n; ++k) y[k] = c[k] + coef * (s[worst][k] - c[k]);
        return y;
      };

      Vec xr = along(-1.0);
      const double fr = eval(xr);
      if (fr < fs[best]) {
        Vec xe = along(-2.0);
        const double fe = eval(xe);
        if (fe < fr) {
          s[worst] = std::move(xe);
          fs[worst] = fe;
        } else {
          s[worst] = std::move(xr);
          fs[worst] = fr;
        }
        continue;
      }
      if (fr < fs[second]) {
        s[worst] = std::move(xr);
        fs[worst] = fr;
        continue;
      }
      const bool outside = fr < fs[worst];
      Vec xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fs[worst])) {
        s[worst] = std::move(xc);
        fs[worst] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == best) continue;
        for (std::size_t k = 0; k < n; ++k) s[i][k] = s[best][k] + 0.5 * (s[i][k] - s[best][k]);
        fs[i] = eval(s[i]);
      }
    }
    const auto it = std::min_element(fs.begin(), fs.end());
    r.x = s[static_cast<std::size_t>(it - fs.begin())];
    r.f = *it;
    return r;
  };

  Run best = run(x0, opt.max_iterations);
  int iterations = best.iterations;
  bool converged = best.converged;
  for (int k = 0; k < opt.restarts_on_convergence && converged && iterations < opt.max_iterations;
       ++k) {
    Run again = run(best.x, opt.max_iterations - iterations);
    iterations += again.iterations;
    converged = again.converged;
    if (!(again.f < best.f)) break;
    best.x = std::move(again.x);
    best.f = again.f;
  }
  return {std::move(best.x), best.f, iterations, evaluations, converged};
}

}  // namespace kies
