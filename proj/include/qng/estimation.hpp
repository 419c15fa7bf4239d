#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qng/homodyne.hpp"
#include "qng/witness.hpp"

// Estimation of p0(s), p1(s) and the witness from homodyne data: unbiased
// linear pattern-function estimators with exact error propagation, the data
// anti-squeezing reparametrization, and a maximum-likelihood (EM) cross-check
// on the phase-averaged quadrature histogram.

namespace qng::est {

struct AntiSqueezedSample {
    double vartheta;  // effective phase in (0, pi]
    double g;         // quadrature scaling factor

    double weight() const { return 1.0 / (g * g); }  // dvartheta/dtheta
    double xScaled(double x) const { return x / g; }
};

struct PhotonStats {
    double p0 = 0.0;
    double p1 = 0.0;
    double var_p0 = 0.0;
    double var_p1 = 0.0;
    double cov01 = 0.0;
    double s = 0.0;
    std::size_t N = 0;
};

struct HistogramBinning {
    double dx = 0.1;
    double xmin = -6.0;
    double xmax = 6.0;
};

struct Histogram {
    HistogramBinning binning;
    std::vector<double> counts;  // weighted interior counters C_j
    double underflow = 0.0;
    double overflow = 0.0;
    int jMin = 0;  // index of the first interior bin (bin centers at j*dx)

    std::size_t nBins() const { return counts.size(); }
};

struct HistogramPovm {
    HistogramBinning binning;
    int nMaxFock = 0;
    // rows: interior bins, then underflow, then overflow; columns: n = 0..nMaxFock
    std::vector<std::vector<double>> pi;
};

struct MlResult {
    std::vector<double> p;
    double logLikelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    bool flooredProbability = false;
    double worstLikelihoodDrop = 0.0;  // most negative per-step log-likelihood gain
};

/// Pattern functions f0, f1 whose phase-averaged quadrature mean equals p_n.
/// Bounded, even, and vanishing at large |x|.
double patternFunction(int n, double x);

/// Effective phase and scaling of the data anti-squeezing: a quadrature
/// sample (x, theta) of the raw state is a sample (x/g, vartheta) of the
/// anti-squeezed state, with weight 1/g^2 = dvartheta/dtheta.
AntiSqueezedSample antisqueezeMap(double theta, double s);

/// Joint pattern-function estimate of (p0, p1) with variances and covariance,
/// at data anti-squeezing s (s = 0 is the plain estimator).
PhotonStats estimatePhotonStats(const homodyne::QuadratureDataset& ds, double s = 0.0);

/// Single-scalar estimate of W(a, s) via f_W = a f0 + f1, so deltaW includes
/// the p0-p1 correlation exactly. Fills the Gaussian and classical bounds.
witness::WitnessReport estimateWitness(const homodyne::QuadratureDataset& ds, double a, double s);

/// For each s: estimate (p0, p1, cov), maximize the relative witness over a,
/// and report the witness at the optimum.
std::vector<witness::WitnessReport> scanWitness(const homodyne::QuadratureDataset& ds,
                                                std::span<const double> sGrid, double aMin = -5.0,
                                                double aMax = 0.999);

/// Index of the report with the largest relative witness.
std::size_t bestReport(const std::vector<witness::WitnessReport>& reports);

/// Phase-averaged histogram with anti-squeezing weights: each sample adds
/// 1/(g_k^2 M_k) to the bin j = round(x / (g_k dx)).
Histogram buildHistogram(const homodyne::QuadratureDataset& ds, double s, const HistogramBinning& binning);

/// POVM elements Pi_{j,n} = \int_bin |psi_n(x)|^2 dx for the phase-averaged
/// histogram, with analytic tail mass in the two overflow rows.
HistogramPovm povmElements(const HistogramBinning& binning, int nMaxFock);

/// Expectation-maximization estimate of the photon-number distribution from
/// histogram counters; the log-likelihood is non-decreasing per iteration.
/// init overrides the uniform starting distribution when non-empty.
MlResult emEstimate(const Histogram& hist, const HistogramPovm& povm, int maxIter = 20000, double tol = 1e-10,
                    std::vector<double> init = {});

}  // namespace qng::est
