#pragma once

// Closed-form boundaries and witnesses for quantum non-Gaussianity and
// non-classicality in the (p0, p1) plane, plus optimal-witness search.
//
// A state with vacuum/single-photon probabilities (p0, p1) lying strictly
// above the Gaussian boundary curve cannot be a mixture of Gaussian states.
// The witness W(a) = a*p0 + p1 with a < 1 certifies this whenever
// W(a) > WG(a), the maximum of W over all Gaussian mixtures.

namespace qng::witness {

struct BoundaryPoint {
    double r;   // curve parameter: squeezing constant (or mean photon number)
    double p0;  // vacuum probability
    double p1;  // single-photon probability
};

struct WitnessParams {
    double a = 0.0;  // witness slope, must be < 1
    double s = 0.0;  // anti-squeezing parameter
};

struct WitnessReport {
    WitnessParams params;
    double p0_est = 0.0;
    double p1_est = 0.0;
    double cov00 = 0.0, cov01 = 0.0, cov11 = 0.0;  // covariance of (p0_est, p1_est)
    double W = 0.0;       // a*p0 + p1
    double deltaW = 0.0;  // standard deviation of W
    double WG = 0.0;      // Gaussian bound at a
    double Wcl = 0.0;     // coherent-mixture bound at a
    double WR = 0.0;      // (W - WG) / deltaW
    bool negativity = false;
};

struct GaussianBound {
    double WG;  // max of W(a) over Gaussian mixtures
    double r0;  // squeezing at which the maximum is attained
};

struct OptimalWitness {
    double a;
    double WR;
};

/// Gaussian-mixture boundary: maximum p1 for given p0, parametrized by the
/// squeezing constant r >= 0.
BoundaryPoint gaussianBoundary(double r);

/// Coherent-mixture (classicality) boundary: Poissonian (p0, p1) at mean
/// photon number nbar >= 0.
BoundaryPoint coherentBoundary(double nbar);

/// Boundary p1 as a function of p0 in (0, 1], by inverting the parametric
/// curve (p0 is strictly decreasing in r).
double gaussianBoundaryP1(double p0);

/// Maximum of W(a) = a*p0 + p1 over Gaussian mixtures, with the optimizing r.
GaussianBound gaussianBound(double a);

/// Maximum of W(a) over mixtures of coherent states: exp(a - 1).
double classicalBound(double a);

double witnessValue(double p0, double p1, double a);

/// True iff p1 of the (anti-squeezed) state exceeds 1/2, which implies a
/// negative Wigner function at the phase-space origin.
bool negativityFlag(double p1s);

/// Maximize the relative witness WR(a) = (a*p0 + p1 - WG(a)) / deltaW(a)
/// over a in [aMin, aMax]; deltaW(a)^2 = a^2 c00 + 2a c01 + c11.
/// Coarse 2000-point grid followed by golden-section refinement.
OptimalWitness optimalRelativeWitness(double p0, double p1, double cov00, double cov01, double cov11,
                                      double aMin = -5.0, double aMax = 0.999);

}  // namespace qng::witness
