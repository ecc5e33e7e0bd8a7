#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "kies/fitting.hpp"
#include "kies/kies.hpp"
#include "kies/mixing_law.hpp"
#include "kies/mixture.hpp"
#include "kies/saturation.hpp"

namespace kies {

/// Malformed model document (missing keys, wrong types, unknown family).
class ModelParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"family": name, "params": {...}}; affine laws nest their inner law under params.inner.
nlohmann::json to_json(const MixingLaw& law);
MixingLaw mixing_law_from_json(const nlohmann::json& j);

/// {"law": {...}, "beta": number | [numbers]}
nlohmann::json to_json(const MixedKies& m);
/// Throws ModelParseError for malformed documents, std::invalid_argument for
/// out-of-range parameters and InvalidMixture when the pair fails validation.
MixedKies mixed_kies_from_json(const nlohmann::json& j);

/// Rounds to 15 significant digits so the JSON text carries at most 15.
double round15(double v);

nlohmann::json to_json(const ShapeReport& r);
nlohmann::json to_json(const SaturationResult& r);
nlohmann::json to_json(const ValidityReport& r);
nlohmann::json to_json(const FitResult& r);
nlohmann::json endpoint_json(const EndpointValue& e);

}  // namespace kies
