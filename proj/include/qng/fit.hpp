#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qng/gaussian_model.hpp"

// Fit of the free model parameters (Vx, Vp, Q, nth) to estimated
// (p0(s), p1(s)) trajectories, with the tap-off reflectance and the detector
// efficiencies held fixed. Loss: covariance-weighted least squares.

namespace qng::fit {

struct FitDataPoint {
    double s;
    double p0, p1;
    double var_p0 = 1.0, var_p1 = 1.0, cov01 = 0.0;
};

struct Bounds {
    double VxLo = 1e-6, VxHi = 0.5;
    double VpLo = 0.5, VpHi = 5.0;
    double QLo = 0.0, QHi = 1.0;
    double nthLo = 0.0, nthHi = 0.5;
};

struct FitSpec {
    double R = 0.077;    // fixed tap-off reflectance (T = 1 - R)
    double etaH = 0.80;  // fixed homodyne efficiency
    double eta = 0.08;   // fixed single-photon efficiency
    Bounds bounds;
    std::vector<FitDataPoint> data;
};

struct FitResult {
    model::ModelParams params;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Sum over data points of the Mahalanobis distance between the model
/// (p0(s), p1(s)) and the data point under its 2x2 covariance. Out-of-bounds
/// or uncertainty-violating parameters get a large penalty.
double objective(const model::ModelParams& params, const FitSpec& spec);

/// Bounded derivative-free fit: Nelder-Mead restarted from `restarts` random
/// interior points; deterministic given the seed. Ties broken by restart
/// index.
FitResult fit(const FitSpec& spec, std::uint64_t seed = 1, int restarts = 20);

}  // namespace qng::fit
