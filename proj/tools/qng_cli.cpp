// Command-line front end: simulate homodyne datasets, estimate photon
// probabilities and witnesses, compute boundary/threshold curves, run the
// maximum-likelihood cross-check, and fit model parameters. All commands
// emit figure-ready CSV/JSON with the resolved configuration embedded.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qng/config.hpp"
#include "qng/errors.hpp"
#include "qng/estimation.hpp"
#include "qng/fit.hpp"
#include "qng/fock.hpp"
#include "qng/gaussian_model.hpp"
#include "qng/homodyne.hpp"
#include "qng/report.hpp"
#include "qng/witness.hpp"

namespace {

using qng::report::json;

std::vector<double> parseGrid(const std::string& spec) {
    double start = 0.0, step = 0.0, stop = 0.0;
    const int matched = std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &step, &stop);
    if (matched == 1) return {start};  // single grid point
    if (matched != 3 || step <= 0.0) {
        throw qng::ParseError("grid must be start:step:stop with step > 0, got '" + spec + "'");
    }
    if (stop < start) throw qng::ParseError("empty grid '" + spec + "'");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) grid[i] = std::min(start + i * step, stop);
    return grid;
}

std::pair<double, double> parseRange(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf", &lo, &hi) != 2 || !(lo < hi)) {
        throw qng::ParseError("range must be lo:hi with lo < hi, got '" + spec + "'");
    }
    return {lo, hi};
}

qng::est::HistogramBinning parseBins(const std::string& spec) {
    qng::est::HistogramBinning b;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &b.dx, &b.xmin, &b.xmax) != 3 || b.dx <= 0.0 ||
        b.xmin > b.xmax) {
        throw qng::ParseError("bins must be dx:min:max with dx > 0, got '" + spec + "'");
    }
    return b;
}

qng::model::ModelParams loadParams(const std::string& configPath) {
    return qng::config::modelParamsFrom(qng::config::readConfig(configPath));
}

int runBoundary(const std::string& kind, double rMax, int points, const std::string& outPath) {
    if (points < 2) throw qng::ParseError("boundary: need at least 2 points");
    std::vector<std::vector<double>> rows;
    rows.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double r = rMax * i / (points - 1.0);
        const auto b = (kind == "gaussian") ? qng::witness::gaussianBoundary(r)
                                            : qng::witness::coherentBoundary(r);
        rows.push_back({b.p0, b.p1});
    }
    qng::report::writeCsv(outPath, "p0,p1", rows);
    std::cout << "wrote " << rows.size() << " boundary points to " << outPath << "\n";
    return 0;
}

int runThresholds(const std::string& rGrid, const std::string& outPath) {
    std::vector<std::vector<double>> rows;
    for (const double r : parseGrid(rGrid)) {
        if (r <= 0.0) continue;
        rows.push_back({r, qng::fock::thresholdTransmittance(r, false),
                        qng::fock::thresholdTransmittance(r, true)});
    }
    qng::report::writeCsv(outPath, "r,eta_th,eta_th_s", rows);
    std::cout << "wrote " << rows.size() << " threshold points to " << outPath << "\n";
    return 0;
}

int runPatterns(double xMax, int points, const std::string& outPath) {
    if (points < 2) throw qng::ParseError("patterns: need at least 2 points");
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < points; ++i) {
        const double x = -xMax + 2.0 * xMax * i / (points - 1.0);
        rows.push_back({x, qng::est::patternFunction(0, x), qng::est::patternFunction(1, x)});
    }
    qng::report::writeCsv(outPath, "x,f0,f1", rows);
    std::cout << "wrote " << rows.size() << " pattern-function points to " << outPath << "\n";
    return 0;
}

int runTrajectory(const std::string& kind, double r, double eta, const std::string& etaGrid,
                  const std::string& sGrid, const std::string& configPath, const std::string& outPath) {
    std::vector<std::vector<double>> rows;
    std::string header;
    if (kind == "loss") {
        header = "eta,p0,p1";
        for (const auto& pt : qng::fock::lossTrajectory(r, parseGrid(etaGrid)))
            rows.push_back({pt.eta, pt.p0, pt.p1});
    } else if (kind == "antisqueeze") {
        header = "s,p0,p1";
        for (const double s : parseGrid(sGrid)) {
            const auto p = qng::fock::antisqueezedLossProbs(r, eta, s);
            rows.push_back({s, p.p0, p.p1});
        }
    } else if (kind == "model") {
        if (configPath.empty()) throw qng::ParseError("trajectory --kind model requires --config");
        header = "s,p0,p1";
        const auto grid = parseGrid(sGrid);
        for (const auto& pt : qng::model::modelTrajectory(loadParams(configPath), grid))
            rows.push_back({pt.s, pt.p0, pt.p1});
    } else {
        throw qng::ParseError("trajectory: unknown kind '" + kind + "'");
    }
    qng::report::writeCsv(outPath, header, rows);
    std::cout << "wrote " << rows.size() << " trajectory points to " << outPath << "\n";
    return 0;
}

int runSimulate(const std::string& configPath, int K, int M, std::uint64_t seed,
                const std::string& outPath) {
    const auto params = loadParams(configPath);
    const auto state = qng::model::heraldedState(params);
    const auto ds = qng::homodyne::generateDataset(state, K, static_cast<std::size_t>(M), seed);
    qng::homodyne::writeDataset(ds, outPath);
    std::cout << "wrote " << ds.totalSamples() << " samples (K=" << K << ", M=" << M << ", seed=" << seed
              << ") to " << outPath << "\n";
    return 0;
}

json gridConfig(const std::string& dataPath, const std::vector<double>& sGrid) {
    json cfg;
    cfg["data"] = dataPath;
    cfg["s_grid"] = sGrid;
    return cfg;
}

int runEstimate(const std::string& dataPath, const std::string& sGrid, const std::string& outPath,
                const std::string& csvPath) {
    const auto ds = qng::homodyne::readDataset(dataPath);
    const auto grid = parseGrid(sGrid);
    json results = json::array();
    std::vector<std::vector<double>> rows;
    for (const double s : grid) {
        const auto st = qng::est::estimatePhotonStats(ds, s);
        results.push_back(qng::report::toJson(st));
        rows.push_back({s, st.p0, st.p1, st.var_p0, st.var_p1, st.cov01});
    }
    qng::report::writeJson(qng::report::envelope(gridConfig(dataPath, grid), results), outPath);
    if (!csvPath.empty()) qng::report::writeCsv(csvPath, "s,p0,p1,var_p0,var_p1,cov01", rows);
    std::cout << "estimated " << grid.size() << " anti-squeezing points from " << ds.totalSamples()
              << " samples -> " << outPath << "\n";
    return 0;
}

int runWitness(const std::string& dataPath, const std::string& sGrid, const std::string& aRange,
               const std::string& outPath, const std::string& csvPath) {
    const auto ds = qng::homodyne::readDataset(dataPath);
    const auto grid = parseGrid(sGrid);
    const auto [aLo, aHi] = parseRange(aRange);
    const auto reports = qng::est::scanWitness(ds, grid, aLo, aHi);
    const std::size_t best = qng::est::bestReport(reports);

    json cfg = gridConfig(dataPath, grid);
    cfg["a_range"] = {aLo, aHi};
    json results;
    results["scan"] = json::array();
    std::vector<std::vector<double>> rows;
    for (const auto& rep : reports) {
        results["scan"].push_back(qng::report::toJson(rep));
        rows.push_back({rep.params.s, rep.params.a, rep.W, rep.deltaW, rep.WG, rep.WR});
    }
    results["best"] = qng::report::toJson(reports[best]);
    qng::report::writeJson(qng::report::envelope(std::move(cfg), std::move(results)), outPath);
    if (!csvPath.empty()) qng::report::writeCsv(csvPath, "s,a_opt,W,deltaW,WG,WR", rows);

    const auto& b = reports[best];
    std::printf("best: s=%.3f a=%.4f W-WG=%.5f deltaW=%.5f WR=%.3f -> %s\n", b.params.s, b.params.a,
                b.W - b.WG, b.deltaW, b.WR, outPath.c_str());
    return 0;
}

int runMl(const std::string& dataPath, double s, const std::string& bins, int nMax,
          const std::string& outPath) {
    const auto ds = qng::homodyne::readDataset(dataPath);
    const auto binning = parseBins(bins);
    const auto hist = qng::est::buildHistogram(ds, s, binning);
    const auto povm = qng::est::povmElements(binning, nMax);
    const auto ml = qng::est::emEstimate(hist, povm);
    json cfg;
    cfg["data"] = dataPath;
    cfg["s"] = s;
    cfg["bins"] = {{"dx", binning.dx}, {"xmin", binning.xmin}, {"xmax", binning.xmax}};
    cfg["n_max"] = nMax;
    qng::report::writeJson(qng::report::envelope(std::move(cfg), qng::report::toJson(ml)), outPath);
    std::printf("ML: p0=%.5f p1=%.5f logL=%.6f iters=%d -> %s\n", ml.p[0], ml.p[1], ml.logLikelihood,
                ml.iterations, outPath.c_str());
    return 0;
}

int runFit(const std::string& estimatesPath, const std::string& configPath, std::uint64_t seed,
           const std::string& outPath, const std::string& csvPath) {
    qng::fit::FitSpec spec;
    if (!configPath.empty()) spec = qng::config::fitSpecFrom(qng::config::readConfig(configPath));
    const json est = qng::report::readJson(estimatesPath);
    if (!est.contains("results") || !est["results"].is_array()) {
        throw qng::ParseError("fit: '" + estimatesPath + "' is not an estimate report");
    }
    for (const auto& row : est["results"]) {
        spec.data.push_back({row.at("s").get<double>(), row.at("p0").get<double>(),
                             row.at("p1").get<double>(), row.at("var_p0").get<double>(),
                             row.at("var_p1").get<double>(), row.at("cov01").get<double>()});
    }
    const auto res = qng::fit::fit(spec, seed);

    json cfg;
    cfg["estimates"] = estimatesPath;
    cfg["fixed"] = {{"R", spec.R}, {"etaH", spec.etaH}, {"eta", spec.eta}};
    cfg["seed"] = seed;
    qng::report::writeJson(qng::report::envelope(std::move(cfg), qng::report::toJson(res)), outPath);

    if (!csvPath.empty()) {
        std::vector<double> sGrid;
        for (const auto& d : spec.data) sGrid.push_back(d.s);
        const auto traj = qng::model::modelTrajectory(res.params, sGrid);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < spec.data.size(); ++i) {
            rows.push_back({spec.data[i].s, spec.data[i].p0, spec.data[i].p1, traj[i].p0, traj[i].p1});
        }
        qng::report::writeCsv(csvPath, "s,p0_data,p1_data,p0_fit,p1_fit", rows);
    }
    std::printf("fit: Vx=%.4f Vp=%.4f Q=%.4f nth=%.4f obj=%.4f -> %s\n", res.params.Vx, res.params.Vp,
                res.params.Q, res.params.nth, res.objective, outPath.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum non-Gaussianity witnessing from homodyne quadrature data"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string kind = "gaussian", out, csv, data, configPath, estimates;
    std::string sGrid = "0:0.05:0.4", etaGrid = "0:0.02:1", rGrid = "0.1:0.1:1.5", aRange = "-5:0.999";
    std::string bins = "0.1:-6:6";
    double rMax = 3.0, xMax = 5.0, r = 0.5, eta = 0.4, s = 0.0;
    int points = 300, K = 40, M = 200, nMax = 20;
    std::uint64_t seed = 1;

    auto* cBoundary = app.add_subcommand("boundary", "Gaussian / coherent boundary curve as CSV");
    cBoundary->add_option("--kind", kind)->check(CLI::IsMember({"gaussian", "coherent"}));
    cBoundary->add_option("--r-max,--nbar-max", rMax, "curve parameter maximum");
    cBoundary->add_option("--points", points);
    cBoundary->add_option("--out", out)->required();

    auto* cThresh = app.add_subcommand("thresholds", "Threshold transmittances vs squeezing as CSV");
    cThresh->add_option("--r-grid", rGrid);
    cThresh->add_option("--out", out)->required();

    auto* cPat = app.add_subcommand("patterns", "Pattern functions f0, f1 as CSV");
    cPat->add_option("--x-max", xMax);
    cPat->add_option("--points", points);
    cPat->add_option("--out", out)->required();

    auto* cTraj = app.add_subcommand("trajectory", "(p0, p1) trajectories as CSV");
    cTraj->add_option("--kind", kind)->check(CLI::IsMember({"loss", "antisqueeze", "model"}));
    cTraj->add_option("--r", r, "initial squeezing (loss/antisqueeze)");
    cTraj->add_option("--eta", eta, "transmittance (antisqueeze)");
    cTraj->add_option("--eta-grid", etaGrid);
    cTraj->add_option("--s-grid", sGrid);
    cTraj->add_option("--config", configPath, "model parameter file (model)");
    cTraj->add_option("--out", out)->required();

    auto* cSim = app.add_subcommand("simulate", "Generate a homodyne dataset CSV");
    cSim->add_option("--config", configPath)->required();
    cSim->add_option("--K", K, "number of phase bins");
    cSim->add_option("--M", M, "samples per bin");
    cSim->add_option("--seed", seed);
    cSim->add_option("--out", out)->required();

    auto* cEst = app.add_subcommand("estimate", "Pattern-function estimates over an s grid");
    cEst->add_option("--data", data)->required();
    cEst->add_option("--s-grid,--s", sGrid, "grid start:step:stop, or a single value");
    cEst->add_option("--out", out)->required();
    cEst->add_option("--csv", csv, "optional scan CSV");

    auto* cWit = app.add_subcommand("witness", "Optimal witness scan over s");
    cWit->add_option("--data", data)->required();
    cWit->add_option("--s-grid", sGrid);
    cWit->add_option("--a-range", aRange);
    cWit->add_option("--out", out)->required();
    cWit->add_option("--csv", csv, "optional scan CSV");

    auto* cMl = app.add_subcommand("ml", "Maximum-likelihood photon statistics");
    cMl->add_option("--data", data)->required();
    cMl->add_option("--s", s, "anti-squeezing");
    cMl->add_option("--bins", bins, "dx:min:max");
    cMl->add_option("--n-max", nMax);
    cMl->add_option("--out", out)->required();

    auto* cFit = app.add_subcommand("fit", "Fit model parameters to estimates");
    cFit->add_option("--estimates", estimates)->required();
    cFit->add_option("--config", configPath, "fit specification file");
    cFit->add_option("--seed", seed);
    cFit->add_option("--out", out)->required();
    cFit->add_option("--csv", csv, "optional data-vs-fit CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(cBoundary)) return runBoundary(kind, rMax, points, out);
        if (app.got_subcommand(cThresh)) return runThresholds(rGrid, out);
        if (app.got_subcommand(cPat)) return runPatterns(xMax, points, out);
        if (app.got_subcommand(cTraj)) return runTrajectory(kind, r, eta, etaGrid, sGrid, configPath, out);
        if (app.got_subcommand(cSim)) return runSimulate(configPath, K, M, seed, out);
        if (app.got_subcommand(cEst)) return runEstimate(data, sGrid, out, csv);
        if (app.got_subcommand(cWit)) return runWitness(data, sGrid, aRange, out, csv);
        if (app.got_subcommand(cMl)) return runMl(data, s, bins, nMax, out);
        if (app.got_subcommand(cFit)) return runFit(estimates, configPath, seed, out, csv);
    } catch (const qng::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const qng::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
