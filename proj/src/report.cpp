#include "qng/report.hpp"

#include <cstdio>
#include <fstream>

#include "qng/errors.hpp"

namespace qng::report {

json envelope(json config, json results) {
    json j;
    j["spec_version"] = kVersion;
    j["config"] = std::move(config);
    j["results"] = std::move(results);
    return j;
}

void writeJson(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("writeJson: cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoError("writeJson: write failure on '" + path + "'");
}

json readJson(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("readJson: cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

json toJson(const est::PhotonStats& st) {
    json j;
    j["s"] = st.s;
    j["p0"] = st.p0;
    j["p1"] = st.p1;
    j["var_p0"] = st.var_p0;
    j["var_p1"] = st.var_p1;
    j["cov01"] = st.cov01;
    j["N"] = st.N;
    return j;
}

json toJson(const witness::WitnessReport& rep) {
    json j;
    j["params"] = {{"a", rep.params.a}, {"s", rep.params.s}};
    j["p0_est"] = rep.p0_est;
    j["p1_est"] = rep.p1_est;
    j["cov"] = {{rep.cov00, rep.cov01}, {rep.cov01, rep.cov11}};
    j["W"] = rep.W;
    j["deltaW"] = rep.deltaW;
    j["WG"] = rep.WG;
    j["Wcl"] = rep.Wcl;
    j["WR"] = rep.WR;
    j["negativity_flag"] = rep.negativity;
    return j;
}

json toJson(const est::MlResult& ml) {
    json j;
    j["p"] = ml.p;
    j["log_likelihood"] = ml.logLikelihood;
    j["iterations"] = ml.iterations;
    j["converged"] = ml.converged;
    j["floored_probability"] = ml.flooredProbability;
    return j;
}

json toJson(const model::ModelParams& params) {
    json j;
    j["Vx"] = params.Vx;
    j["Vp"] = params.Vp;
    j["T"] = params.T;
    j["eta"] = params.eta;
    j["etaH"] = params.etaH;
    j["nth"] = params.nth;
    j["Q"] = params.Q;
    return j;
}

json toJson(const fit::FitResult& res) {
    json j;
    j["params"] = toJson(res.params);
    j["objective"] = res.objective;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    return j;
}

void writeCsv(const std::string& path, const std::string& header,
              const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("writeCsv: cannot open '" + path + "' for writing");
    out << header << "\n";
    char buf[48];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12g", row[i]);
            out << buf << (i + 1 < row.size() ? "," : "\n");
        }
    }
    if (!out) throw IoError("writeCsv: write failure on '" + path + "'");
}

}  // namespace qng::report
