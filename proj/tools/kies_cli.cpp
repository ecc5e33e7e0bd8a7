// kies: evaluate Kies mixtures, compute saturations, sample, fit and classify shapes.
//
// Exit codes: 0 success, 2 usage or input error, 3 model fails the validity conditions.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kies/fitting.hpp"
#include "kies/kies.hpp"
#include "kies/mixture.hpp"
#include "kies/sampling.hpp"
#include "kies/saturation.hpp"
#include "kies/serialization.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitModel = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --model accepts inline JSON or a path to a JSON file.
json model_document(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  const std::string text = (first != std::string::npos && arg[first] == '{') ? arg : read_file(arg);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("model is not valid JSON: ") + e.what());
  }
}

kies::MixedKies load_model(const std::string& arg) {
  return kies::mixed_kies_from_json(model_document(arg));
}

// Output sink: a file when --out is set, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw InputError("cannot write '" + path + "'");
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Single-column CSV; an optional first line that is not a number is taken as a header.
std::vector<double> read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<double> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto cut = line.find(',');
    std::string cell = line.substr(0, cut);
    const auto b = cell.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) continue;
    cell = cell.substr(b, cell.find_last_not_of(" \t\r\"") - b + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size() || !std::isfinite(v)) throw std::invalid_argument(cell);
      out.push_back(v);
    } catch (const std::exception&) {
      if (out.empty() && lineno == 1) continue;
      throw InputError(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
    }
  }
  if (out.empty()) throw InputError("'" + path + "' contains no observations");
  return out;
}

std::vector<double> preprocess(const std::vector<double>& raw, const std::string& mode) {
  if (mode == "minmax") return kies::rescale_minmax(raw);
  if (mode == "none") return raw;
  if (mode.rfind("divide:", 0) == 0) {
    double c = 0.0;
    try {
      c = std::stod(mode.substr(7));
    } catch (const std::exception&) {
      throw InputError("bad --preprocess divisor in '" + mode + "'");
    }
    return kies::rescale_divide(raw, c);
  }
  throw InputError("--preprocess must be 'minmax', 'divide:<c>' or 'none'");
}

struct EvalArgs {
  std::string model, which = "pdf", out;
  int grid = 99;
};

int cmd_eval(const EvalArgs& a) {
  const kies::MixedKies m = load_model(a.model);
  Sink sink(a.out);
  auto& os = sink.os();
  os << "# left_endpoint=" << kies::to_string(kies::left_endpoint(m)) << "\n";
  os << "# right_endpoint=" << kies::to_string(kies::right_endpoint(m)) << "\n";
  os << "t," << a.which << "\n";
  for (int k = 1; k <= a.grid; ++k) {
    const double t = static_cast<double>(k) / (a.grid + 1);
    double v = 0.0;
    if (a.which == "pdf")
      v = kies::mix_pdf(m, t);
    else if (a.which == "cdf")
      v = kies::mix_cdf(m, t);
    else
      v = kies::mix_ccdf(m, t);
    os << fmt15(t) << "," << fmt15(v) << "\n";
  }
  return kExitOk;
}

int cmd_saturation(const std::string& model, const std::string& out) {
  const kies::MixedKies m = load_model(model);
  const auto fp = kies::saturation_fixed_point(m);
  const auto a1 = kies::saturation_algorithm1(m);
  json j = kies::to_json(a1);
  j["methods_agree"] = std::abs(fp.d - a1.d) <= 1e-9;
  j["fixed_point"] = kies::to_json(fp);
  j["algorithm1"] = kies::to_json(a1);
  Sink sink(out);
  sink.os() << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_sample(const std::string& model, long n, std::uint64_t seed, const std::string& out) {
  if (n < 1) throw InputError("--n must be at least 1");
  const kies::MixedKies m = load_model(model);
  const auto batch = kies::sample(m, seed, static_cast<std::size_t>(n));
  Sink sink(out);
  auto& os = sink.os();
  os << "x\n";
  for (double v : batch.values) os << fmt15(v) << "\n";
  return kExitOk;
}

struct FitArgs {
  std::string data, family = "A1", preprocess = "none", out, table;
  int bins = 50;
  double epsilon = 0.01;
  std::uint64_t seed = 1;
  int restarts = 32;
  int components = 3;
  int n_min = 1, n_max = 2000;
  int max_iterations = 4000;
};

int cmd_fit(const FitArgs& a) {
  const auto family = kies::parse_fit_family(a.family);
  if (!family) throw InputError("unknown --family '" + a.family + "'");
  const auto data = preprocess(read_column(a.data), a.preprocess);
  const auto binned = kies::bin_data(data, a.bins);

  kies::FitConfig cfg;
  cfg.family = *family;
  cfg.epsilon = a.epsilon;
  cfg.restarts = a.restarts;
  cfg.seed = a.seed;
  cfg.components = a.components;
  cfg.n_min = a.n_min;
  cfg.n_max = a.n_max;
  cfg.max_iterations = a.max_iterations;
  const kies::FitResult r = kies::fit(binned.pdf, cfg);

  json j = kies::to_json(r);
  j["bins"] = a.bins;
  j["epsilon"] = a.epsilon;
  j["observations"] = data.size();
  Sink sink(a.out);
  sink.os() << j.dump(2) << "\n";

  std::string table = a.table;
  if (table.empty() && !a.out.empty() && a.out != "-") table = a.out + ".bins.csv";
  if (!table.empty()) {
    Sink t(table);
    t.os() << "center,l_emp,l_th\n";
    for (std::size_t i = 0; i < binned.pdf.centers.size(); ++i) {
      const double c = binned.pdf.centers[i];
      const double th = r.model ? kies::mix_pdf(*r.model, c) : std::nan("");
      t.os() << fmt15(c) << "," << fmt15(binned.pdf.values[i]) << "," << fmt15(th) << "\n";
    }
  }
  return kExitOk;
}

int cmd_shape(double lambda, double beta, const std::string& out) {
  const kies::KiesParams p(lambda, beta);
  Sink sink(out);
  json j = kies::to_json(kies::classify_shape(p));
  j["lambda"] = lambda;
  j["beta"] = beta;
  sink.os() << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& model, const std::string& out) {
  const json j = model_document(model);
  const kies::MixingLaw law = kies::mixing_law_from_json(j.at("law"));
  const json& b = j.at("beta");
  kies::BetaSpec beta = b.is_array() ? kies::BetaSpec{b.get<std::vector<double>>()}
                                     : kies::BetaSpec{b.get<double>()};
  const auto report = kies::validate(law, beta);
  Sink sink(out);
  sink.os() << kies::to_json(report).dump(2) << "\n";
  return report.valid() ? kExitOk : kExitModel;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kies distribution mixtures: evaluation, saturation, sampling and fitting"};
  app.require_subcommand(1);

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Evaluate pdf/cdf/ccdf on the grid k/(N+1)");
  c_eval->add_option("--model", eval.model, "Model JSON (inline or file path)")->required();
  c_eval->add_option("--which", eval.which, "pdf, cdf or ccdf")
      ->check(CLI::IsMember({"pdf", "cdf", "ccdf"}));
  c_eval->add_option("--grid", eval.grid, "Number of interior grid points")
      ->check(CLI::PositiveNumber);
  c_eval->add_option("--out", eval.out, "Output file (default stdout)");

  std::string sat_model, sat_out;
  auto* c_sat = app.add_subcommand("saturation", "Hausdorff saturation by both methods");
  c_sat->add_option("--model", sat_model, "Model JSON (inline or file path)")->required();
  c_sat->add_option("--out", sat_out, "Output file (default stdout)");

  std::string smp_model, smp_out;
  long smp_n = 0;
  std::uint64_t smp_seed = 1;
  auto* c_smp = app.add_subcommand("sample", "Draw from the mixture");
  c_smp->add_option("--model", smp_model, "Model JSON (inline or file path)")->required();
  c_smp->add_option("--n", smp_n, "Number of draws")->required();
  c_smp->add_option("--seed", smp_seed, "Random seed");
  c_smp->add_option("--out", smp_out, "Output CSV (default stdout)");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Calibrate a model family to a data column");
  c_fit->add_option("data", fit.data, "Single-column CSV of observations")->required();
  c_fit->add_option("--family", fit.family, "A1..A8 or original, bimodal, multimodal, binomial, "
                                            "geometric, exponential, gamma, beta");
  c_fit->add_option("--preprocess", fit.preprocess, "minmax, divide:<c> or none");
  c_fit->add_option("--bins", fit.bins, "Number of histogram bins")->check(CLI::Range(2, 100000));
  c_fit->add_option("--epsilon", fit.epsilon, "Cost-function offset")->check(CLI::PositiveNumber);
  c_fit->add_option("--seed", fit.seed, "Random seed for restarts");
  c_fit->add_option("--restarts", fit.restarts, "Number of random restarts")
      ->check(CLI::PositiveNumber);
  c_fit->add_option("--components", fit.components, "Components of the multimodal family")
      ->check(CLI::Range(2, 20));
  c_fit->add_option("--n-min", fit.n_min, "Binomial n search lower bound")->check(CLI::PositiveNumber);
  c_fit->add_option("--n-max", fit.n_max, "Binomial n search upper bound")->check(CLI::PositiveNumber);
  c_fit->add_option("--max-iterations", fit.max_iterations, "Nelder-Mead iteration budget")
      ->check(CLI::PositiveNumber);
  c_fit->add_option("--out", fit.out, "FitResult JSON (default stdout)");
  c_fit->add_option("--table", fit.table, "Comparison CSV (center, l_emp, l_th)");

  double shp_lambda = 0.0, shp_beta = 0.0;
  std::string shp_out;
  auto* c_shp = app.add_subcommand("shape", "Shape classification of the base Kies density");
  c_shp->add_option("--lambda", shp_lambda)->required();
  c_shp->add_option("--beta", shp_beta)->required();
  c_shp->add_option("--out", shp_out, "Output file (default stdout)");

  std::string val_model, val_out;
  auto* c_val = app.add_subcommand("validate", "Report the integrability conditions of a model");
  c_val->add_option("--model", val_model, "Model JSON (inline or file path)")->required();
  c_val->add_option("--out", val_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (c_eval->parsed()) return cmd_eval(eval);
    if (c_sat->parsed()) return cmd_saturation(sat_model, sat_out);
    if (c_smp->parsed()) return cmd_sample(smp_model, smp_n, smp_seed, smp_out);
    if (c_fit->parsed()) return cmd_fit(fit);
    if (c_shp->parsed()) return cmd_shape(shp_lambda, shp_beta, shp_out);
    if (c_val->parsed()) return cmd_validate(val_model, val_out);
  } catch (const kies::InvalidMixture& e) {
    std::cerr << "kies: " << e.what() << "\n";
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "kies: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
