#include "kies/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace kies {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ModelParseError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw ModelParseError(std::string("missing key '") + key + "'");
  return *it;
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw ModelParseError(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer())
    throw ModelParseError(std::string("key '") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& j) {
  if (!j.is_array()) throw ModelParseError("expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ModelParseError("expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json finite_or_string(double v) {
  if (std::isfinite(v)) return round15(v);
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

double round15(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

json to_json(const MixingLaw& law) {
  json params = std::visit(
      overloaded{
          [](const law::Degenerate& d) { return json{{"lambda", d.lambda}}; },
          [](const law::DiscreteTable& d) { return json{{"lambdas", d.lambdas}, {"probs", d.probs}}; },
          [](const law::ShiftedBinomial& b) { return json{{"n", b.n}, {"p", b.p}}; },
          [](const law::Binomial& b) { return json{{"n", b.n}, {"p", b.p}}; },
          [](const law::Geometric& g) { return json{{"p", g.p}}; },
          [](const law::Exponential& e) { return json{{"theta", e.theta}}; },
          [](const law::Gamma& g) { return json{{"alpha", g.alpha}, {"theta", g.theta}}; },
          [](const law::Beta& b) { return json{{"alpha", b.alpha}, {"theta", b.theta}}; },
          [](const law::Affine& af) {
            return json{{"a", af.a}, {"b", af.b}, {"inner", to_json(*af.inner)}};
          },
      },
      law.variant());
  return json{{"family", family_name(law.family())}, {"params", std::move(params)}};
}

MixingLaw mixing_law_from_json(const json& j) {
  const json& fam = field(j, "family");
  if (!fam.is_string()) throw ModelParseError("'family' must be a string");
  const auto family = family_from_name(fam.get<std::string>());
  if (!family) throw ModelParseError("unknown family '" + fam.get<std::string>() + "'");
  const json& p = field(j, "params");
  switch (*family) {
    case Family::Degenerate: return MixingLaw::degenerate(number(p, "lambda"));
    case Family::DiscreteTable:
      return MixingLaw::discrete(numbers(field(p, "lambdas")), numbers(field(p, "probs")));
    case Family::ShiftedBinomial:
      return MixingLaw::shifted_binomial(integer(p, "n"), number(p, "p"));
    case Family::Binomial: return MixingLaw::binomial(integer(p, "n"), number(p, "p"));
    case Family::Geometric: return MixingLaw::geometric(number(p, "p"));
    case Family::Exponential: return MixingLaw::exponential(number(p, "theta"));
    case Family::Gamma: return MixingLaw::gamma(number(p, "alpha"), number(p, "theta"));
    case Family::Beta: return MixingLaw::beta(number(p, "alpha"), number(p, "theta"));
    case Family::Affine:
      return MixingLaw::affine(number(p, "a"), number(p, "b"),
                               mixing_law_from_json(field(p, "inner")));
  }
  throw ModelParseError("unknown family");
}

json to_json(const MixedKies& m) {
  json beta = std::visit([](const auto& b) { return json(b); }, m.beta_spec());
  return json{{"law", to_json(m.law())}, {"beta", std::move(beta)}};
}

MixedKies mixed_kies_from_json(const json& j) {
  MixingLaw law = mixing_law_from_json(field(j, "law"));
  const json& b = field(j, "beta");
  if (b.is_number()) return MixedKies(std::move(law), b.get<double>());
  if (b.is_array()) return MixedKies(std::move(law), numbers(b));
  throw ModelParseError("'beta' must be a number or an array of numbers");
}

json endpoint_json(const EndpointValue& e) {
  switch (e.kind) {
    case EndpointValue::Kind::Zero: return json{{"kind", "zero"}, {"value", 0.0}};
    case EndpointValue::Kind::Finite: return json{{"kind", "finite"}, {"value", round15(e.value)}};
    case EndpointValue::Kind::Infinite: return json{{"kind", "infinite"}, {"value", "inf"}};
  }
  return nullptr;
}

json to_json(const ShapeReport& r) {
  json segs = json::array();
  for (const auto& s : r.monotone_segments)
    segs.push_back({{"lo", round15(s.lo)},
                    {"hi", round15(s.hi)},
                    {"direction", s.direction == Direction::Increasing ? "increasing" : "decreasing"}});
  json crit = json::array();
  for (double t : r.critical_points) crit.push_back(round15(t));
  return json{{"case", std::string(to_string(r.case_label))},
              {"left_value", finite_or_string(r.left_value)},
              {"critical_points", std::move(crit)},
              {"monotone_segments", std::move(segs)}};
}

json to_json(const SaturationResult& r) {
  json j{{"x_bar", round15(r.x_bar)},
         {"d", round15(r.d)},
         {"residual", round15(r.residual)},
         {"expected_exp_neg_tau", round15(r.expected_exp_neg_tau)},
         {"method", std::string(to_string(r.method))}};
  if (r.tau) {
    json tau = json::array();
    for (double v : *r.tau) tau.push_back(round15(v));
    j["tau"] = std::move(tau);
  }
  return j;
}

json to_json(const ValidityReport& r) {
  json j{{"valid", r.valid()},
         {"structure_ok", r.structure_ok},
         {"positive_support", r.positive_support},
         {"neg_moment_ok", r.neg_moment_ok},
         {"mean_ok", r.mean_ok},
         {"mean_beta_ok", r.mean_beta_ok},
         {"exponential_unit_beta", r.exponential_unit_beta},
         {"mean_lambda", finite_or_string(r.mean_lambda)},
         {"mean_lambda_beta", finite_or_string(r.mean_lambda_beta)},
         {"messages", r.messages}};
  j["neg_moment_value"] = r.neg_moment_value ? finite_or_string(*r.neg_moment_value) : json(nullptr);
  return j;
}

json to_json(const FitResult& r) {
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = round15(v);
  json costs = json::array();
  for (double c : r.restart_costs) costs.push_back(finite_or_string(c));
  json j{{"family", std::string(family_code(r.family))},
         {"label", std::string(family_label(r.family))},
         {"parameters", std::move(params)},
         {"cost", finite_or_string(r.cost)},
         {"converged", r.converged},
         {"evaluations", r.evaluations},
         {"restart_costs", std::move(costs)}};
  j["model"] = r.model ? to_json(*r.model) : json(nullptr);
  return j;
}

}  // namespace kies
