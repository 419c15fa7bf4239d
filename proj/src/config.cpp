#include "qng/config.hpp"

#include <cstdio>
#include <fstream>

#include "qng/errors.hpp"
#include <stdexcept>

namespace qng::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

KeyValues readConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("readConfig: cannot open '" + path + "'");
    KeyValues kv;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError("readConfig: " + path + ":" + std::to_string(lineNo) +
                                     ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("readConfig: " + path + ":" + std::to_string(lineNo) + ": empty key");
        }
        try {
            std::size_t used = 0;
            const double v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument("trailing characters");
            kv[key] = v;
        } catch (const std::exception&) {
            throw ParseError("readConfig: " + path + ":" + std::to_string(lineNo) +
                                     ": malformed value '" + val + "'");
        }
    }
    return kv;
}

void writeConfig(const KeyValues& kv, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("writeConfig: cannot open '" + path + "' for writing");
    char buf[64];
    for (const auto& [key, value] : kv) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        out << key << " = " << buf << "\n";
    }
    if (!out) throw IoError("writeConfig: write failure on '" + path + "'");
}

model::ModelParams modelParamsFrom(const KeyValues& kv) {
    model::ModelParams p;
    auto get = [&](const char* key, double& target) {
        const auto it = kv.find(key);
        if (it != kv.end()) target = it->second;
    };
    get("Vx", p.Vx);
    get("Vp", p.Vp);
    get("T", p.T);
    if (kv.count("R")) {
        if (kv.count("T")) throw ParseError("modelParamsFrom: specify either T or R, not both");
        p.T = 1.0 - kv.at("R");
    }
    get("eta", p.eta);
    get("etaH", p.etaH);
    get("nth", p.nth);
    get("Q", p.Q);
    p.validate();
    return p;
}

KeyValues toKeyValues(const model::ModelParams& params) {
    return {{"Vx", params.Vx}, {"Vp", params.Vp}, {"T", params.T},  {"eta", params.eta},
            {"etaH", params.etaH}, {"nth", params.nth}, {"Q", params.Q}};
}

fit::FitSpec fitSpecFrom(const KeyValues& kv) {
    fit::FitSpec spec;
    auto get = [&](const char* key, double& target) {
        const auto it = kv.find(key);
        if (it != kv.end()) target = it->second;
    };
    get("R", spec.R);
    if (kv.count("T")) spec.R = 1.0 - kv.at("T");
    get("etaH", spec.etaH);
    get("eta", spec.eta);
    get("Vx_min", spec.bounds.VxLo);
    get("Vx_max", spec.bounds.VxHi);
    get("Vp_min", spec.bounds.VpLo);
    get("Vp_max", spec.bounds.VpHi);
    get("Q_min", spec.bounds.QLo);
    get("Q_max", spec.bounds.QHi);
    get("nth_min", spec.bounds.nthLo);
    get("nth_max", spec.bounds.nthHi);
    return spec;
}

}  // namespace qng::config
