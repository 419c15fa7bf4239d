#pragma once

#include <span>
#include <vector>

#include "qng/linalg.hpp"

// Covariance-matrix model of heralded photon subtraction from a mixed
// squeezed vacuum: tap-off beam splitter, detection inefficiency and noise,
// conditioning on an on/off detector click, mode-overlap dilution, and
// anti-squeezing. The heralded state is a weighted difference of two
// zero-mean Gaussians with covariance matrices gammaI and gamma0 and weight
// P0prime, from which p0 and p1 follow in closed form.

namespace qng::model {

struct ModelParams {
    double Vx = 0.5;   // squeezed quadrature variance (vacuum = 1/2)
    double Vp = 0.5;   // anti-squeezed quadrature variance
    double T = 1.0;    // tap-off beam-splitter intensity transmittance, (0, 1]
    double eta = 1.0;  // single-photon detector efficiency, [0, 1]
    double etaH = 1.0; // homodyne efficiency, [0, 1]
    double nth = 0.0;  // mean thermal photons of homodyne electronic noise
    double Q = 1.0;    // effective mode overlap, [0, 1]

    void validate() const;
};

struct ConditionalState {
    Mat2 gammaI;        // unconditional reduced state
    Mat2 gamma0;        // no-click conditional state
    double P0prime = 0; // effective no-click probability
};

struct PhotonPair {
    double p0 = 0.0;
    double p1 = 0.0;
};

struct TrajectoryPoint {
    double s;
    double p0;
    double p1;
};

/// Input covariance matrix diag(2Vx, 2Vp). Throws if Vx*Vp < 1/4.
Mat2 inputCm(const ModelParams& params);

/// Two-mode state after mixing mode A with vacuum on a beam splitter of
/// intensity transmittance T.
Mat4 beamsplitterCm(const Mat2& gammaA, double T);

/// Detection inefficiency and noise: mode A (homodyne) sees efficiency etaH
/// and thermal noise nth, mode B (photon detector) sees efficiency eta.
Mat4 detectionNoiseCm(const Mat4& gammaAB, double etaH, double nth, double eta);

/// Heralded state of mode A conditioned on a click of the on/off detector on
/// mode B. P0prime is initialized to the raw no-click probability.
ConditionalState conditionOnClick(const Mat4& gammaABprime);

/// Replace the no-click probability by its mode-overlap-corrected version
/// P0' = Q P0 / (1 - P0 (1 - Q)).
double modeOverlap(double P0, double Q);

/// Anti-squeeze both Gaussian constituents: gamma -> S gamma S^T with
/// S = diag(e^s, e^-s), i.e. positive s stretches the squeezed x axis back
/// toward vacuum. P0prime is unchanged.
ConditionalState antisqueezeState(const ConditionalState& state, double s);

/// Vacuum and single-photon probabilities of the heralded state, in closed
/// form from the constituent determinants. Throws if P0prime = 1 (zero
/// heralding rate).
PhotonPair photonProbs(const ConditionalState& state);

/// Variance of the rotated quadrature x cos(theta) + p sin(theta).
double marginalVariance(const Mat2& gamma, double theta);

/// Full pipeline up to the heralded (not yet anti-squeezed) state.
ConditionalState heraldedState(const ModelParams& params);

/// (s, p0(s), p1(s)) along an anti-squeezing grid.
std::vector<TrajectoryPoint> modelTrajectory(const ModelParams& params, std::span<const double> sGrid);

}  // namespace qng::model
