#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qng/gaussian_model.hpp"
#include "qng/rng.hpp"

// Seeded Monte Carlo generation of phase-binned homodyne quadrature data
// from the heralded state's marginal distributions, and the dataset file
// format consumed by the estimators.

namespace qng::homodyne {

struct QuadratureDataset {
    int K = 0;                                 // number of phase bins
    std::vector<double> thetas;                // theta_k = k pi / K, k = 1..K
    std::vector<std::vector<double>> samples;  // per-bin quadrature values
    std::uint64_t seed = 0;                    // generation metadata (not persisted)

    std::size_t totalSamples() const {
        std::size_t n = 0;
        for (const auto& bin : samples) n += bin.size();
        return n;
    }
};

// Rejection sampler for the heralded-state marginal at a fixed phase:
// w(x) = [gI(x) - P0' g0(x)] / (1 - P0'), proposals from gI, acceptance
// probability 1 - P0' g0(x)/gI(x). The overall acceptance rate is 1 - P0'.
class MarginalSampler {
  public:
    MarginalSampler(const model::ConditionalState& state, double theta);

    double draw(Rng& rng);

    double sigmaI() const { return sigmaI_; }
    double sigma0() const { return sigma0_; }
    double p0prime() const { return p0prime_; }
    std::uint64_t proposals() const { return proposals_; }

  private:
    double sigmaI_;
    double sigma0_;
    double p0prime_;
    double ratio0_;     // P0' * sigmaI / sigma0, the acceptance deficit at x = 0
    double halfDelta_;  // (1/sigma0^2 - 1/sigmaI^2) / 2
    std::uint64_t proposals_ = 0;
};

std::vector<double> sampleMarginal(const model::ConditionalState& state, double theta, std::size_t count,
                                   std::uint64_t seed);

/// K phase bins at theta_k = k pi / K with mPerBin samples each, drawn from
/// independent substreams of (seed, k); deterministic given the seed and
/// independent of threading.
QuadratureDataset generateDataset(const model::ConditionalState& state, int K, std::size_t mPerBin,
                                  std::uint64_t seed);

/// Analytic CDF of the marginal w(x; theta) (for tests and diagnostics).
double marginalCdf(const model::ConditionalState& state, double theta, double x);

/// Second and fourth moments of the marginal in closed form.
double marginalMoment2(const model::ConditionalState& state, double theta);
double marginalMoment4(const model::ConditionalState& state, double theta);

/// Dataset file: CSV with header "bin,theta,x", one row per sample, LF line
/// endings. Throws with a line number on malformed input.
void writeDataset(const QuadratureDataset& ds, const std::string& path);
QuadratureDataset readDataset(const std::string& path);

}  // namespace qng::homodyne
