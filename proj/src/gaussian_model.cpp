#include "qng/gaussian_model.hpp"

#include <cmath>
#include <stdexcept>

namespace qng::model {

void ModelParams::validate() const {
    if (!(Vx > 0.0) || !(Vp > 0.0) || !std::isfinite(Vx) || !std::isfinite(Vp))
        throw std::domain_error("ModelParams: quadrature variances must be positive and finite");
    if (Vx * Vp < 0.25 - 1e-12)
        throw std::domain_error("ModelParams: uncertainty relation Vx*Vp >= 1/4 violated");
    if (!(T > 0.0) || T > 1.0) throw std::domain_error("ModelParams: T must be in (0, 1]");
    if (eta < 0.0 || eta > 1.0) throw std::domain_error("ModelParams: eta must be in [0, 1]");
    if (etaH < 0.0 || etaH > 1.0) throw std::domain_error("ModelParams: etaH must be in [0, 1]");
    if (nth < 0.0) throw std::domain_error("ModelParams: nth must be >= 0");
    if (Q < 0.0 || Q > 1.0) throw std::domain_error("ModelParams: Q must be in [0, 1]");
}

Mat2 inputCm(const ModelParams& params) {
    params.validate();
    return Mat2::diag(2.0 * params.Vx, 2.0 * params.Vp);
}

Mat4 beamsplitterCm(const Mat2& gammaA, double T) {
    if (!(T > 0.0) || T > 1.0) throw std::domain_error("beamsplitterCm: T must be in (0, 1]");
    const double R = 1.0 - T;
    const double c = std::sqrt(R * T);
    const Mat2 vac = Mat2::identity();
    Mat4 g;
    g.setBlock(0, 0, T * gammaA + R * vac);
    g.setBlock(1, 1, R * gammaA + T * vac);
    const Mat2 off = c * (gammaA - vac);
    g.setBlock(0, 1, off);
    g.setBlock(1, 0, off.transposed());
    return g;
}

Mat4 detectionNoiseCm(const Mat4& gammaAB, double etaH, double nth, double eta) {
    if (etaH < 0.0 || etaH > 1.0 || eta < 0.0 || eta > 1.0)
        throw std::domain_error("detectionNoiseCm: efficiencies must be in [0, 1]");
    if (nth < 0.0) throw std::domain_error("detectionNoiseCm: nth must be >= 0");
    const double mA = std::sqrt(etaH);
    const double mB = std::sqrt(eta);
    const double gA = 1.0 - etaH + 2.0 * nth;
    const double gB = 1.0 - eta;
    Mat4 out;
    const double m[4] = {mA, mA, mB, mB};
    const double add[4] = {gA, gA, gB, gB};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = m[i] * gammaAB(i, j) * m[j];
    for (int i = 0; i < 4; ++i) out(i, i) += add[i];
    return out;
}

ConditionalState conditionOnClick(const Mat4& gammaABprime) {
    const Mat2 gA = gammaABprime.block(0, 0);
    const Mat2 gB = gammaABprime.block(1, 1);
    const Mat2 gC = gammaABprime.block(0, 1);
    const Mat2 gBp1 = gB + Mat2::identity();
    const double d = gBp1.det();
    if (d < 1e-12) throw std::domain_error("conditionOnClick: GammaB + I is singular");
    ConditionalState st;
    st.gammaI = gA;
    st.gamma0 = gA - gC * gBp1.inverse() * gC.transposed();
    st.P0prime = 2.0 / std::sqrt(d);
    return st;
}

double modeOverlap(double P0, double Q) {
    if (P0 < 0.0 || P0 > 1.0) throw std::domain_error("modeOverlap: P0 must be in [0, 1]");
    if (Q < 0.0 || Q > 1.0) throw std::domain_error("modeOverlap: Q must be in [0, 1]");
    const double denom = 1.0 - P0 * (1.0 - Q);
    if (denom <= 0.0) return 0.0;  // only reachable at P0 = 1, Q = 0
    return Q * P0 / denom;
}

ConditionalState antisqueezeState(const ConditionalState& state, double s) {
    if (s == 0.0) return state;
    const double ex = std::exp(s);
    const Mat2 sq = Mat2::diag(ex, 1.0 / ex);
    return {sq * state.gammaI * sq, sq * state.gamma0 * sq, state.P0prime};
}

namespace {

// Overlap of a zero-mean Gaussian with vacuum and single-photon states.
double vacuumOverlap(const Mat2& g) { return 1.0 / std::sqrt((g + Mat2::identity()).det()); }

double singlePhotonOverlap(const Mat2& g) {
    const double d = (g + Mat2::identity()).det();
    return (g.det() - 1.0) / (d * std::sqrt(d));
}

}  // namespace

PhotonPair photonProbs(const ConditionalState& state) {
    const double P0p = state.P0prime;
    if (P0p < 0.0 || P0p > 1.0) throw std::domain_error("photonProbs: P0prime must be in [0, 1]");
    if (1.0 - P0p < 1e-14) throw std::domain_error("photonProbs: zero heralding probability (P0prime = 1)");
    const double norm = 2.0 / (1.0 - P0p);
    PhotonPair out;
    out.p0 = norm * (vacuumOverlap(state.gammaI) - P0p * vacuumOverlap(state.gamma0));
    out.p1 = norm * (singlePhotonOverlap(state.gammaI) - P0p * singlePhotonOverlap(state.gamma0));
    return out;
}

double marginalVariance(const Mat2& gamma, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return 0.5 * (c * (gamma.m00 * c + gamma.m01 * s) + s * (gamma.m10 * c + gamma.m11 * s));
}

ConditionalState heraldedState(const ModelParams& params) {
    const Mat2 gIn = inputCm(params);
    const Mat4 gAB = beamsplitterCm(gIn, params.T);
    const Mat4 gABp = detectionNoiseCm(gAB, params.etaH, params.nth, params.eta);
    ConditionalState st = conditionOnClick(gABp);
    st.P0prime = modeOverlap(st.P0prime, params.Q);
    return st;
}

std::vector<TrajectoryPoint> modelTrajectory(const ModelParams& params, std::span<const double> sGrid) {
    const ConditionalState st = heraldedState(params);
    std::vector<TrajectoryPoint> out;
    out.reserve(sGrid.size());
    for (const double s : sGrid) {
        const PhotonPair p = photonProbs(antisqueezeState(st, s));
        out.push_back({s, p.p0, p.p1});
    }
    return out;
}

}  // namespace qng::model
