#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qng/estimation.hpp"
#include "qng/fit.hpp"
#include "qng/witness.hpp"

// JSON report envelope and CSV emission. Every report records the schema
// version and the fully resolved configuration for reproducibility.

namespace qng::report {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

json envelope(json config, json results);
void writeJson(const json& j, const std::string& path);
json readJson(const std::string& path);

json toJson(const est::PhotonStats& st);
json toJson(const witness::WitnessReport& rep);
json toJson(const est::MlResult& ml);
json toJson(const fit::FitResult& res);
json toJson(const model::ModelParams& params);

/// CSV with 12 significant digits per value and LF line endings.
void writeCsv(const std::string& path, const std::string& header,
              const std::vector<std::vector<double>>& rows);

}  // namespace qng::report
