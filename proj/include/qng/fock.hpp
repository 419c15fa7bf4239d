#pragma once

#include <span>
#include <vector>

// Truncated Fock-space engine, independent of the covariance-matrix model:
// exact photon statistics of squeezed states, loss channels and heralded
// photon subtraction, plus the threshold transmittances at which a lossy
// squeezed single photon stops being detectable as quantum non-Gaussian.

namespace qng::fock {

constexpr double kTailBound = 1e-10;

struct FockState {
    std::vector<double> amplitudes;     // empty for mixed states
    std::vector<double> probabilities;  // always populated, n = 0..nMax
    bool pure = false;
    double tailBound = kTailBound;

    int nMax() const { return static_cast<int>(probabilities.size()) - 1; }
    double p(int n) const {
        return (n >= 0 && n < static_cast<int>(probabilities.size())) ? probabilities[n] : 0.0;
    }
};

struct PhotonPair {
    double p0 = 0.0;
    double p1 = 0.0;
};

struct LossPoint {
    double eta;
    double p0;
    double p1;
};

/// S(r)|n> for n in {0, 1}, where S(r) squeezes the x quadrature for r > 0
/// (variance scaled by exp(-2r)). nMax = 0 requests automatic sizing: start
/// at 60 and double until the tail mass is below kTailBound. An explicit
/// nMax throws if the tail bound is violated.
FockState squeezedFock(double r, int n, int nMax = 0);

/// Columns m = 0..dim-1 of the squeeze operator in the Fock basis, each
/// truncated to length dim; column m approximates S(r)|m>.
std::vector<std::vector<double>> squeezeMatrix(double r, int dim);

/// Pure loss channel of transmittance eta acting on the photon-number
/// distribution (binomial damping).
FockState applyLoss(const FockState& state, double eta);

/// Heralded single-photon subtraction: squeezed vacuum S(r)|0> mixed with
/// vacuum on a beam splitter of transmittance T, conditioned on at least one
/// photon in the reflected mode. Returns the diagonal Fock distribution of
/// the kept mode. Throws if the click probability is below 1e-14.
FockState subtractPhoton(double r, double T, int nMax = 0);

/// Probability that an on/off detector of efficiency eta clicks on the
/// tapped mode of the photon-subtraction setup.
double clickProbability(double r, double T, double eta, int nMax = 0);

/// (p0(s), p1(s)) of a squeezed single photon S(r)|1> sent through a loss
/// channel of transmittance eta and then anti-squeezed by s (probabilities
/// in the squeezed Fock basis S(s)|n>).
PhotonPair antisqueezedLossProbs(double r, double eta, double s);

/// (eta, p0, p1) of the lossy squeezed single photon along an eta grid.
std::vector<LossPoint> lossTrajectory(double r, std::span<const double> etaGrid);

/// Smallest transmittance at which the lossy squeezed single photon is still
/// detected as quantum non-Gaussian, optionally maximizing over the
/// anti-squeezing degree s in [0, 2]. Bisection on eta to 1e-4.
double thresholdTransmittance(double r, bool withAntisqueezing);

}  // namespace qng::fock
