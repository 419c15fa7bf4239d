#pragma once

#include <map>
#include <string>

#include "qng/fit.hpp"
#include "qng/gaussian_model.hpp"

// Flat key-value configuration files ("Vx = 0.364" per line, '#' comments).

namespace qng::config {

using KeyValues = std::map<std::string, double>;

KeyValues readConfig(const std::string& path);
void writeConfig(const KeyValues& kv, const std::string& path);

/// Model parameters from keys Vx, Vp, T (or R), eta, etaH, nth, Q; missing
/// keys keep their defaults.
model::ModelParams modelParamsFrom(const KeyValues& kv);
KeyValues toKeyValues(const model::ModelParams& params);

/// Fit specification (fixed R/etaH/eta and optional bound overrides).
fit::FitSpec fitSpecFrom(const KeyValues& kv);

}  // namespace qng::config
