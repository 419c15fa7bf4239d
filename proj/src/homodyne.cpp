#include "qng/homodyne.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qng/errors.hpp"
#include "qng/special.hpp"

namespace qng::homodyne {

MarginalSampler::MarginalSampler(const model::ConditionalState& state, double theta) {
    const double varI = model::marginalVariance(state.gammaI, theta);
    const double var0 = model::marginalVariance(state.gamma0, theta);
    if (!(varI > 0.0) || !(var0 > 0.0)) throw std::domain_error("MarginalSampler: non-positive marginal variance");
    sigmaI_ = std::sqrt(varI);
    sigma0_ = std::sqrt(var0);
    p0prime_ = state.P0prime;
    if (p0prime_ < 0.0 || p0prime_ >= 1.0) throw std::domain_error("MarginalSampler: P0prime must be in [0, 1)");
    ratio0_ = p0prime_ * sigmaI_ / sigma0_;
    halfDelta_ = 0.5 * (1.0 / var0 - 1.0 / varI);
    // The acceptance probability 1 - P0' g0(x)/gI(x) is smallest at x = 0
    // (sigma0 <= sigmaI for conditioned states); if it dips below zero the
    // difference density is not a probability density.
    if (halfDelta_ < -1e-12 || ratio0_ > 1.0 + 1e-12) {
        throw std::domain_error("MarginalSampler: envelope violation, state marginal is not a valid density");
    }
}

double MarginalSampler::draw(Rng& rng) {
    // Accept x ~ N(0, sigmaI^2) iff u >= ratio0 * exp(-halfDelta x^2).
    // First/second-order bounds of exp(-t) decide almost every proposal
    // without evaluating the exponential.
    for (;;) {
        ++proposals_;
        const double x = sigmaI_ * rng.normal();
        const double u = rng.uniform();
        const double t = halfDelta_ * x * x;
        const double lower = ratio0_ * (1.0 - t);           // <= ratio0 e^-t
        if (u < lower) continue;                            // certain reject
        const double upper = ratio0_ * (1.0 - t + 0.5 * t * t);  // >= ratio0 e^-t
        if (u >= upper) return x;                           // certain accept
        if (u >= ratio0_ * std::exp(-t)) return x;
    }
}

std::vector<double> sampleMarginal(const model::ConditionalState& state, double theta, std::size_t count,
                                   std::uint64_t seed) {
    MarginalSampler sampler(state, theta);
    Rng rng(seed);
    std::vector<double> out(count);
    for (auto& x : out) x = sampler.draw(rng);
    return out;
}

QuadratureDataset generateDataset(const model::ConditionalState& state, int K, std::size_t mPerBin,
                                  std::uint64_t seed) {
    if (K < 1) throw std::domain_error("generateDataset: K must be >= 1");
    QuadratureDataset ds;
    ds.K = K;
    ds.seed = seed;
    ds.thetas.resize(K);
    ds.samples.assign(K, {});
    const double pi = std::acos(-1.0);
    for (int k = 0; k < K; ++k) ds.thetas[k] = (k + 1) * pi / K;

    auto fillBin = [&](int k) {
        MarginalSampler sampler(state, ds.thetas[k]);
        Rng rng(seed, static_cast<std::uint64_t>(k) + 1);
        auto& bin = ds.samples[k];
        bin.resize(mPerBin);
        for (auto& x : bin) x = sampler.draw(rng);
    };

    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(K));
    if (workers > 1 && mPerBin * static_cast<std::size_t>(K) >= 4096) {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < K; k = next.fetch_add(1)) fillBin(k);
            });
        }
        for (auto& t : pool) t.join();
    } else {
        for (int k = 0; k < K; ++k) fillBin(k);
    }
    return ds;
}

double marginalCdf(const model::ConditionalState& state, double theta, double x) {
    const double sI = std::sqrt(model::marginalVariance(state.gammaI, theta));
    const double s0 = std::sqrt(model::marginalVariance(state.gamma0, theta));
    const double p = state.P0prime;
    return (normalCdf(x, sI) - p * normalCdf(x, s0)) / (1.0 - p);
}

double marginalMoment2(const model::ConditionalState& state, double theta) {
    const double vI = model::marginalVariance(state.gammaI, theta);
    const double v0 = model::marginalVariance(state.gamma0, theta);
    const double p = state.P0prime;
    return (vI - p * v0) / (1.0 - p);
}

double marginalMoment4(const model::ConditionalState& state, double theta) {
    const double vI = model::marginalVariance(state.gammaI, theta);
    const double v0 = model::marginalVariance(state.gamma0, theta);
    const double p = state.P0prime;
    return 3.0 * (vI * vI - p * v0 * v0) / (1.0 - p);
}

void writeDataset(const QuadratureDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!out) throw IoError("writeDataset: cannot open '" + path + "' for writing");
    out << "bin,theta,x\n";
    char buf[80];
    for (int k = 0; k < ds.K; ++k) {
        for (const double x : ds.samples[k]) {
            std::snprintf(buf, sizeof buf, "%d,%.15g,%.17g\n", k + 1, ds.thetas[k], x);
            out << buf;
        }
    }
    if (!out) throw IoError("writeDataset: write failure on '" + path + "'");
}

QuadratureDataset readDataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("readDataset: cannot open '" + path + "'");
    std::string line;
    std::size_t lineNo = 0;

    auto fail = [&](const std::string& msg) {
        throw ParseError("readDataset: " + path + ":" + std::to_string(lineNo) + ": " + msg);
    };

    if (!std::getline(in, line)) throw ParseError("readDataset: empty file '" + path + "'");
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "bin,theta,x") fail("expected header 'bin,theta,x'");

    const double pi = std::acos(-1.0);
    struct Bin {
        double theta;
        std::vector<double> xs;
    };
    std::vector<Bin> bins;

    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t c1 = line.find(',');
        std::size_t c2 = (c1 == std::string::npos) ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) fail("expected three comma-separated fields");
        int bin = 0;
        double theta = 0.0, x = 0.0;
        try {
            std::size_t used = 0;
            bin = std::stoi(line.substr(0, c1), &used);
            if (used != c1) fail("malformed bin index");
            std::string f2 = line.substr(c1 + 1, c2 - c1 - 1);
            theta = std::stod(f2, &used);
            if (used != f2.size()) fail("malformed theta");
            std::string f3 = line.substr(c2 + 1);
            x = std::stod(f3, &used);
            if (used != f3.size()) fail("malformed quadrature value");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            fail("malformed numeric field");
        }
        if (bin < 1) fail("bin index must be >= 1");
        if (!(theta > 0.0) || theta > pi + 1e-9) fail("theta outside (0, pi]");
        if (!std::isfinite(x)) fail("non-finite quadrature value");
        if (static_cast<std::size_t>(bin) > bins.size()) bins.resize(bin, {0.0, {}});
        Bin& b = bins[bin - 1];
        if (b.xs.empty()) {
            b.theta = theta;
        } else if (std::abs(b.theta - theta) > 1e-9) {
            fail("inconsistent theta within bin " + std::to_string(bin));
        }
        b.xs.push_back(x);
    }

    QuadratureDataset ds;
    ds.K = static_cast<int>(bins.size());
    if (ds.K == 0) throw ParseError("readDataset: '" + path + "' contains a header but no samples");
    ds.thetas.resize(ds.K);
    ds.samples.resize(ds.K);
    for (int k = 0; k < ds.K; ++k) {
        ds.thetas[k] = bins[k].theta;
        ds.samples[k] = std::move(bins[k].xs);
    }
    return ds;
}

}  // namespace qng::homodyne
