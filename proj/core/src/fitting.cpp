#include "kies/fitting.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "kies/nelder_mead.hpp"
#include "kies/random.hpp"

namespace kies {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::string indexed(const char* base, int i) { return std::string(base) + "_" + std::to_string(i); }

double lookup(const ParameterList& params, const std::string& name) {
  for (const auto& [k, v] : params)
    if (k == name) return v;
  throw std::invalid_argument("missing parameter '" + name + "'");
}

bool has(const ParameterList& params, const std::string& name) {
  return std::any_of(params.begin(), params.end(), [&](const auto& kv) { return kv.first == name; });
}

// Search boxes for random starting points. Positive scalars are drawn
// log-uniformly, probabilities uniformly on the logit scale.
struct Box {
  double lo, hi;
};
constexpr Box kLambdaBox{1e-2, 1e3};
constexpr Box kBetaBox{0.3, 5.0};
constexpr Box kScaleBox{1e-2, 1e3};
constexpr Box kShiftBox{1e-3, 1e2};
constexpr Box kThetaBox{1e-3, 1e2};
constexpr Box kAlphaBox{1e-1, 1e1};
constexpr Box kLogitBox{-6.0, 3.0};
constexpr Box kWeightBox{-2.0, 2.0};

// Unconstrained coordinates of one family.
class Layout {
 public:
  Layout(FitFamily family, int components, int n) : family_(family), k_(components), n_(n) {
    if (family == FitFamily::A2) k_ = 2;
    if (family == FitFamily::A1) k_ = 1;
  }

  std::size_t dim() const {
    switch (family_) {
      case FitFamily::A1: return 2;
      case FitFamily::A2:
      case FitFamily::A3: return static_cast<std::size_t>(3 * k_ - 1);
      case FitFamily::A4:
      case FitFamily::A5:
      case FitFamily::A6: return 4;
      case FitFamily::A7:
      case FitFamily::A8: return 5;
    }
    return 0;
  }

  ParameterList decode(const std::vector<double>& z) const {
    ParameterList out;
    switch (family_) {
      case FitFamily::A1:
        out = {{"lambda", std::exp(z[0])}, {"beta", std::exp(z[1])}};
        break;
      case FitFamily::A2:
      case FitFamily::A3: {
        for (int i = 0; i < k_; ++i) out.emplace_back(indexed("lambda", i + 1), std::exp(z[i]));
        for (int i = 0; i < k_; ++i) out.emplace_back(indexed("beta", i + 1), std::exp(z[k_ + i]));
        // softmax with the last logit pinned at zero
        double hi = 0.0;
        for (int i = 0; i < k_ - 1; ++i) hi = std::max(hi, z[2 * k_ + i]);
        std::vector<double> w(k_);
        double total = 0.0;
        for (int i = 0; i < k_; ++i) {
          w[i] = std::exp((i < k_ - 1 ? z[2 * k_ + i] : 0.0) - hi);
          total += w[i];
        }
        for (int i = 0; i < k_; ++i) out.emplace_back(indexed("p", i + 1), w[i] / total);
        break;
      }
      case FitFamily::A4:
        out = {{"beta", std::exp(z[0])}, {"a", std::exp(z[1])}, {"b", std::exp(z[2])},
               {"p", logistic(z[3])},    {"n", static_cast<double>(n_)}};
        break;
      case FitFamily::A5:
        out = {{"beta", std::exp(z[0])}, {"a", std::exp(z[1])}, {"b", std::exp(z[2])},
               {"p", logistic(z[3])}};
        break;
      case FitFamily::A6:
        out = {{"beta", std::exp(z[0])}, {"a", std::exp(z[1])}, {"b", std::exp(z[2])},
               {"theta", std::exp(z[3])}};
        break;
      case FitFamily::A7:
      case FitFamily::A8:
        out = {{"beta", std::exp(z[0])},  {"a", std::exp(z[1])},    {"b", std::exp(z[2])},
               {"theta", std::exp(z[3])}, {"alpha", std::exp(z[4])}};
        break;
    }
    return out;
  }

  std::vector<double> random_start(RandomStream& rng) const {
    auto log_uniform = [&](Box b) {
      return std::log(b.lo) + rng.uniform() * (std::log(b.hi) - std::log(b.lo));
    };
    auto uniform = [&](Box b) { return b.lo + rng.uniform() * (b.hi - b.lo); };
    std::vector<double> z;
    switch (family_) {
      case FitFamily::A1:
        z = {log_uniform(kLambdaBox), log_uniform(kBetaBox)};
        break;
      case FitFamily::A2:
      case FitFamily::A3:
        for (int i = 0; i < k_; ++i) z.push_back(log_uniform(kLambdaBox));
        for (int i = 0; i < k_; ++i) z.push_back(log_uniform(kBetaBox));
        for (int i = 0; i < k_ - 1; ++i) z.push_back(uniform(kWeightBox));
        break;
      case FitFamily::A4:
      case FitFamily::A5:
        z = {log_uniform(kBetaBox), log_uniform(kScaleBox), log_uniform(kShiftBox),
             uniform(kLogitBox)};
        break;
      case FitFamily::A6:
        z = {log_uniform(kBetaBox), log_uniform(kScaleBox), log_uniform(kShiftBox),
             log_uniform(kThetaBox)};
        break;
      case FitFamily::A7:
      case FitFamily::A8:
        z = {log_uniform(kBetaBox), log_uniform(kScaleBox), log_uniform(kShiftBox),
             log_uniform(kThetaBox), log_uniform(kAlphaBox)};
        break;
    }
    return z;
  }

  FitFamily family() const { return family_; }

 private:
  FitFamily family_;
  int k_;
  int n_;
};

struct Stage {
  std::vector<double> best_z;
  double best_cost = kInf;
  bool converged = false;
  int evaluations = 0;
  std::vector<double> restart_costs;
};

// Runs `restarts` Nelder-Mead searches; restart 0 starts from `warm` when given.
// Restarts run concurrently and are merged by minimum cost, ties to the lower index.
Stage multi_start(const Layout& layout, const EmpiricalPdf& emp, const FitConfig& cfg,
                  int restarts, std::uint64_t stream, const std::vector<double>* warm) {
  auto objective = [&](const std::vector<double>& z) {
    try {
      return cost_function(build_model(layout.family(), layout.decode(z)), emp, cfg.epsilon);
    } catch (const std::exception&) {
      return kInf;
    }
  };
  NelderMeadOptions opt;
  opt.max_iterations = cfg.max_iterations;

  std::vector<NelderMeadResult> results(static_cast<std::size_t>(restarts));
  const RandomStream root(cfg.seed, stream);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r; (r = next.fetch_add(1)) < restarts;) {
      RandomStream rng = root.substream(static_cast<std::uint64_t>(r));
      std::vector<double> z0 = (r == 0 && warm) ? *warm : layout.random_start(rng);
      results[static_cast<std::size_t>(r)] = nelder_mead(objective, std::move(z0), opt);
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(restarts));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Stage s;
  for (const auto& r : results) {
    s.restart_costs.push_back(r.f);
    s.evaluations += r.evaluations;
    if (r.f < s.best_cost || s.best_z.empty()) {
      s.best_cost = r.f;
      s.best_z = r.x;
      s.converged = r.converged;
    }
  }
  return s;
}

std::vector<int> coarse_n_grid(int lo, int hi) {
  std::vector<int> grid;
  constexpr int kPoints = 16;
  for (int i = 0; i < kPoints; ++i) {
    const double v = std::exp(std::log(lo) + i * (std::log(hi) - std::log(lo)) / (kPoints - 1));
    const int n = std::clamp(static_cast<int>(std::lround(v)), lo, hi);
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  return grid;
}

}  // namespace

std::vector<double> rescale_minmax(std::span<const double> data) {
  if (data.empty()) throw std::invalid_argument("rescale_minmax: empty data");
  const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw std::invalid_argument("rescale_minmax: degenerate data (max == min)");
  std::vector<double> out;
  out.reserve(data.size());
  for (double x : data) out.push_back((x - lo) / (hi - lo) * (2.0 / 3.0));
  return out;
}

std::vector<double> rescale_divide(std::span<const double> data, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("rescale_divide: divisor must be positive");
  std::vector<double> out;
  out.reserve(data.size());
  for (double x : data) {
    const double v = x / c;
    if (!(v > 0.0 && v < 1.0))
      throw std::out_of_range("rescale_divide: value " + std::to_string(x) +
                              " does not map into (0, 1)");
    out.push_back(v);
  }
  return out;
}

BinnedData bin_data(std::span<const double> data, int m) {
  if (m < 2) throw std::invalid_argument("bin_data: need at least two bins");
  if (data.empty()) throw std::invalid_argument("bin_data: empty data");
  BinnedData out;
  Histogram& h = out.histogram;
  h.m = m;
  h.counts.assign(static_cast<std::size_t>(m), 0);
  h.n_total = static_cast<long>(data.size());
  for (double x : data) {
    if (!(x >= 0.0 && x <= 1.0))
      throw std::domain_error("bin_data: value outside [0, 1]: " + std::to_string(x));
    const int i = std::min(static_cast<int>(x * m), m - 1);
    ++h.counts[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < m; ++i) h.centers.push_back((i + 0.5) / m);
  out.pdf.centers = h.centers;
  for (long c : h.counts)
    out.pdf.values.push_back(static_cast<double>(m) * static_cast<double>(c) /
                             static_cast<double>(h.n_total));
  return out;
}

double cost_function(const MixedKies& model, const EmpiricalPdf& emp, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("cost_function: epsilon must be positive");
  if (emp.centers.size() != emp.values.size())
    throw std::invalid_argument("cost_function: centres and values differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < emp.centers.size(); ++i) {
    const double th = mix_pdf(model, emp.centers[i]);
    acc += std::abs(std::log(emp.values[i] + epsilon) - std::log(th + epsilon));
  }
  return acc;
}

std::string_view family_code(FitFamily f) noexcept {
  static constexpr std::array kCodes = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"};
  return kCodes[static_cast<std::size_t>(f)];
}

std::string_view family_label(FitFamily f) noexcept {
  static constexpr std::array kLabels = {"original",  "bimodal",     "multimodal", "binomial",
                                         "geometric", "exponential", "gamma",      "beta"};
  return kLabels[static_cast<std::size_t>(f)];
}

std::optional<FitFamily> parse_fit_family(std::string_view s) noexcept {
  for (int i = 0; i < 8; ++i) {
    const auto f = static_cast<FitFamily>(i);
    if (s == family_code(f) || s == family_label(f)) return f;
  }
  return std::nullopt;
}

MixedKies build_model(FitFamily family, const ParameterList& params) {
  auto get = [&](const std::string& name) { return lookup(params, name); };
  auto affine_over = [&](MixingLaw inner) {
    return MixedKies(MixingLaw::affine(get("a"), get("b"), std::move(inner)), get("beta"));
  };
  switch (family) {
    case FitFamily::A1:
      return MixedKies(MixingLaw::degenerate(get("lambda")), get("beta"));
    case FitFamily::A2:
    case FitFamily::A3: {
      std::vector<double> lambdas, betas, probs;
      for (int i = 1; has(params, indexed("lambda", i)); ++i) {
        lambdas.push_back(get(indexed("lambda", i)));
        betas.push_back(get(indexed("beta", i)));
        probs.push_back(get(indexed("p", i)));
      }
      return MixedKies(MixingLaw::discrete(std::move(lambdas), std::move(probs)), std::move(betas));
    }
    case FitFamily::A4: {
      const double n = get("n");
      if (n != std::round(n) || n < 1 || n > std::numeric_limits<int>::max())
        throw std::invalid_argument("binomial n must be a positive integer");
      return affine_over(MixingLaw::binomial(static_cast<int>(n), get("p")));
    }
    case FitFamily::A5: return affine_over(MixingLaw::geometric(get("p")));
    case FitFamily::A6: return affine_over(MixingLaw::exponential(get("theta")));
    case FitFamily::A7: return affine_over(MixingLaw::gamma(get("alpha"), get("theta")));
    case FitFamily::A8: return affine_over(MixingLaw::beta(get("alpha"), get("theta")));
  }
  throw std::logic_error("build_model: unknown family");
}

FitResult fit(const EmpiricalPdf& emp, const FitConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("fit: epsilon must be positive");
  if (cfg.restarts < 1) throw std::invalid_argument("fit: restarts must be at least 1");
  if (cfg.family == FitFamily::A3 && cfg.components < 2)
    throw std::invalid_argument("fit: multimodal fit needs at least two components");

  Stage best;
  int n_best = 0;
  int evaluations = 0;

  if (cfg.family != FitFamily::A4) {
    best = multi_start(Layout(cfg.family, cfg.components, 0), emp, cfg, cfg.restarts, 0, nullptr);
    evaluations = best.evaluations;
  } else {
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min)
      throw std::invalid_argument("fit: invalid binomial n range");
    const int probe_restarts = std::max(4, cfg.restarts / 4);
    std::vector<std::pair<int, double>> tried;
    std::vector<double> warm;
    auto probe = [&](int n) {
      for (const auto& [k, c] : tried)
        if (k == n) return c;
      Stage s = multi_start(Layout(FitFamily::A4, 0, n), emp, cfg, probe_restarts,
                            static_cast<std::uint64_t>(n), warm.empty() ? nullptr : &warm);
      evaluations += s.evaluations;
      tried.emplace_back(n, s.best_cost);
      if (s.best_cost < best.best_cost || best.best_z.empty()) {
        best = s;
        n_best = n;
        warm = s.best_z;
      }
      return s.best_cost;
    };
    const std::vector<int> grid = coarse_n_grid(cfg.n_min, cfg.n_max);
    for (int n : grid) probe(n);
    // Narrow the window around the incumbent until every integer in it has been tried.
    auto pos = std::find(grid.begin(), grid.end(), n_best) - grid.begin();
    int lo = grid[static_cast<std::size_t>(std::max<long>(0, pos - 1))];
    int hi = grid[static_cast<std::size_t>(std::min<long>(grid.size() - 1, pos + 1))];
    while (hi - lo > 8) {
      for (int i = 1; i < 8; ++i) probe(lo + static_cast<int>(std::lround((hi - lo) * i / 8.0)));
      const int width = std::max(4, (hi - lo) / 4);
      lo = std::max(cfg.n_min, n_best - width);
      hi = std::min(cfg.n_max, n_best + width);
    }
    for (int n = lo; n <= hi; ++n) probe(n);
    Stage final_stage = multi_start(Layout(FitFamily::A4, 0, n_best), emp, cfg, cfg.restarts,
                                    static_cast<std::uint64_t>(n_best) + (1ULL << 32), &warm);
    evaluations += final_stage.evaluations;
    best = final_stage;
  }

  const Layout layout(cfg.family, cfg.components, n_best);
  FitResult r{cfg.family, layout.decode(best.best_z), kInf, best.converged, evaluations,
              best.restart_costs, std::nullopt};
  try {
    r.model = build_model(cfg.family, r.parameters);
    r.cost = cost_function(*r.model, emp, cfg.epsilon);
  } catch (const std::exception&) {
    r.converged = false;
  }
  return r;
}

}  // namespace kies
