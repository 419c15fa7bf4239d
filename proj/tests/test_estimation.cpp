#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qng/estimation.hpp"
#include "qng/homodyne.hpp"

using namespace qng;
using namespace qng::est;

namespace {

homodyne::QuadratureDataset vacuumDataset(int K, std::size_t M, std::uint64_t seed) {
    model::ConditionalState vac;
    vac.gammaI = vac.gamma0 = Mat2::identity();
    vac.P0prime = 0.0;
    return homodyne::generateDataset(vac, K, M, seed);
}

// Phase-averaged pattern-function mean over a zero-mean Gaussian state with
// diagonal covariance, by two-dimensional quadrature: the estimator's
// continuum limit, evaluated independently of the estimator code.
double phaseAveragedMean(int n, const Mat2& gamma) {
    const double pi = std::acos(-1.0);
    const int nTheta = 256;  // trapezoid on a periodic integrand: spectral accuracy
    double acc = 0.0;
    for (int k = 0; k < nTheta; ++k) {
        const double theta = (k + 1.0) * pi / nTheta;
        const double var = model::marginalVariance(gamma, theta);
        const double sd = std::sqrt(var);
        const double inner = testutil::simpson(
            [&](double x) {
                const double rho = std::exp(-0.5 * x * x / var) / (sd * std::sqrt(2.0 * pi));
                return rho * patternFunction(n, x);
            },
            -12.0 * sd, 12.0 * sd, 1e-12);
        acc += inner;
    }
    return acc / nTheta;
}

}  // namespace

TEST_CASE("pattern-function phase average reproduces Gaussian photon statistics") {
    // Squeezed thermal state: p_n from the closed-form determinant overlaps.
    const Mat2 gamma = Mat2::diag(0.9, 1.7);
    const double d = (gamma + Mat2::identity()).det();
    const double p0 = 2.0 / std::sqrt(d);
    const double p1 = 2.0 * (gamma.det() - 1.0) / std::pow(d, 1.5);
    CHECK(phaseAveragedMean(0, gamma) == doctest::Approx(p0).epsilon(1e-8));
    CHECK(phaseAveragedMean(1, gamma) == doctest::Approx(p1).epsilon(1e-7));
}

TEST_CASE("anti-squeeze map basics") {
    const double pi = std::acos(-1.0);
    for (const double theta : {0.1, 1.0, pi / 2, 3.0, pi}) {
        const auto m = antisqueezeMap(theta, 0.0);
        CHECK(m.vartheta == theta);
        CHECK(m.g == 1.0);
    }
    const double s = 0.31;
    CHECK(antisqueezeMap(1e-300, s).g == doctest::Approx(std::exp(-s)).epsilon(1e-12));
    CHECK(antisqueezeMap(pi / 2, s).g == doctest::Approx(std::exp(s)).epsilon(1e-12));

    // g^2 = e^{-2s} cos^2 + e^{2s} sin^2 and tan(vartheta) = e^{2s} tan(theta).
    for (const double theta : {0.3, 1.2, 2.0, 2.9}) {
        const auto m = antisqueezeMap(theta, s);
        const double c = std::cos(theta), sn = std::sin(theta);
        CHECK(m.g * m.g ==
              doctest::Approx(std::exp(-2.0 * s) * c * c + std::exp(2.0 * s) * sn * sn).epsilon(1e-13));
        CHECK(std::tan(m.vartheta) == doctest::Approx(std::exp(2.0 * s) * std::tan(theta)).epsilon(1e-10));
    }
}

TEST_CASE("anti-squeeze map: weight integrates to pi and vartheta is a reparametrization") {
    const double pi = std::acos(-1.0);
    for (const double s : {0.1, 0.25, 0.5, 1.0}) {
        const double integral = testutil::simpson(
            [&](double theta) {
                const double g = antisqueezeMap(theta, s).g;
                return 1.0 / (g * g);
            },
            0.0, pi, 1e-10);
        CHECK(integral == doctest::Approx(pi).epsilon(1e-8));

        // vartheta increases continuously from (0, pi] as theta does.
        double prev = 0.0;
        for (int i = 1; i <= 400; ++i) {
            const double theta = pi * i / 400.0;
            const double vt = antisqueezeMap(theta, s).vartheta;
            CHECK(vt > prev);
            CHECK(vt <= pi + 1e-12);
            prev = vt;
        }
        CHECK(prev == doctest::Approx(pi).epsilon(1e-12));
    }
}

TEST_CASE("vacuum calibration of the estimators") {
    const auto ds = vacuumDataset(20, 5000, 21);  // N = 1e5
    const PhotonStats st = estimatePhotonStats(ds);
    CHECK(st.N == 100000);
    CHECK(std::abs(st.p0 - 1.0) < 3.0 * std::sqrt(st.var_p0));
    CHECK(std::abs(st.p1) < 3.0 * std::sqrt(st.var_p1));
    CHECK(st.var_p0 > 0.0);
    CHECK(st.var_p1 > 0.0);
    // Covariance matrix PSD.
    CHECK(st.var_p0 * st.var_p1 - st.cov01 * st.cov01 >= -1e-12);
}

TEST_CASE("estimator matches the model across anti-squeezing (sign anchor)") {
    // Data simulated from the heralded state, anti-squeezed in software, must
    // statistically match the model state anti-squeezed in phase space. This
    // single test pins the s conventions of the model and the estimator to
    // each other.
    const auto params = testutil::friendlyParams();
    const auto st = model::heraldedState(params);
    const auto ds = homodyne::generateDataset(st, 40, 10000, 33);  // N = 4e5
    for (const double s : {0.0, 0.2, 0.35}) {
        const PhotonStats e = estimatePhotonStats(ds, s);
        const auto m = model::photonProbs(model::antisqueezeState(st, s));
        CHECK(std::abs(e.p0 - m.p0) < 4.0 * std::sqrt(e.var_p0));
        CHECK(std::abs(e.p1 - m.p1) < 4.0 * std::sqrt(e.var_p1));
    }
}

TEST_CASE("unbiasedness and variance calibration over replications") {
    const auto params = testutil::friendlyParams();
    const auto st = model::heraldedState(params);
    const int reps = 200;
    for (const double s : {0.0, 0.15, 0.3}) {
        const auto truth = model::photonProbs(model::antisqueezeState(st, s));
        std::vector<double> p0s, p1s, v0s, v1s;
        for (int rep = 0; rep < reps; ++rep) {
            const auto ds = homodyne::generateDataset(st, 40, 200, 5000 + rep);
            const PhotonStats e = estimatePhotonStats(ds, s);
            p0s.push_back(e.p0);
            p1s.push_back(e.p1);
            v0s.push_back(e.var_p0);
            v1s.push_back(e.var_p1);
        }
        const double se0 = std::sqrt(testutil::variance(p0s) / reps);
        const double se1 = std::sqrt(testutil::variance(p1s) / reps);
        CHECK(std::abs(testutil::mean(p0s) - truth.p0) < 3.0 * se0);
        CHECK(std::abs(testutil::mean(p1s) - truth.p1) < 3.0 * se1);

        // Reported variance is calibrated to the empirical scatter.
        CHECK(testutil::variance(p0s) == doctest::Approx(testutil::mean(v0s)).epsilon(0.25));
        CHECK(testutil::variance(p1s) == doctest::Approx(testutil::mean(v1s)).epsilon(0.25));
    }
}

TEST_CASE("variance scales as 1/N") {
    const auto st = model::heraldedState(testutil::friendlyParams());
    std::vector<double> logN, logV;
    for (const std::size_t M : {100, 200, 400, 800}) {
        const auto ds = homodyne::generateDataset(st, 40, M, 77);
        const PhotonStats e = estimatePhotonStats(ds);
        logN.push_back(std::log(static_cast<double>(e.N)));
        logV.push_back(std::log(e.var_p1));
    }
    // Least-squares slope of log V against log N.
    const double mx = testutil::mean(logN), my = testutil::mean(logV);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < logN.size(); ++i) {
        sxx += (logN[i] - mx) * (logN[i] - mx);
        sxy += (logN[i] - mx) * (logV[i] - my);
    }
    CHECK(sxy / sxx == doctest::Approx(-1.0).epsilon(0.15));
}

TEST_CASE("witness estimator identities") {
    const auto st = model::heraldedState(testutil::friendlyParams());
    const auto ds = homodyne::generateDataset(st, 40, 200, 4);
    for (const double s : {0.0, 0.2}) {
        const PhotonStats e = estimatePhotonStats(ds, s);
        for (const double a : {-1.5, 0.0, 0.7}) {
            const auto rep = estimateWitness(ds, a, s);
            CHECK(rep.W == doctest::Approx(a * e.p0 + e.p1).epsilon(1e-12));
            const double propagated = a * a * e.var_p0 + 2.0 * a * e.cov01 + e.var_p1;
            CHECK(rep.deltaW * rep.deltaW == doctest::Approx(propagated).epsilon(1e-12));
            CHECK(rep.WG == doctest::Approx(witness::gaussianBound(a).WG).epsilon(1e-14));
            CHECK(rep.Wcl == doctest::Approx(std::exp(a - 1.0)).epsilon(1e-14));
            if (a == 0.0) CHECK(rep.W == doctest::Approx(e.p1).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(estimateWitness(ds, 1.0, 0.0), std::domain_error);
}

TEST_CASE("empty bin rejected") {
    homodyne::QuadratureDataset ds;
    ds.K = 2;
    ds.thetas = {1.0, 2.0};
    ds.samples = {{0.1, 0.2}, {}};
    CHECK_THROWS_WITH_AS(estimatePhotonStats(ds), doctest::Contains("empty"), std::domain_error);
}

TEST_CASE("witness scan: single point, null model, and experiment regime") {
    const auto st = model::heraldedState(testutil::friendlyParams());
    const auto ds = homodyne::generateDataset(st, 40, 200, 10);

    // Single-s grid reduces to the plain analysis at that s.
    const std::vector<double> s0 = {0.0};
    const auto scan0 = scanWitness(ds, s0);
    REQUIRE(scan0.size() == 1);
    const PhotonStats e = estimatePhotonStats(ds, 0.0);
    const auto opt = witness::optimalRelativeWitness(e.p0, e.p1, e.var_p0, e.cov01, e.var_p1);
    CHECK(scan0[0].params.a == doctest::Approx(opt.a).epsilon(1e-12));
    CHECK(scan0[0].WR == doctest::Approx(opt.WR).epsilon(1e-10));

    // Gaussian data (Q = 0) shows no significant violation.
    model::ModelParams null = testutil::experimentParams();
    null.Q = 0.0;
    const auto nullDs = homodyne::generateDataset(model::heraldedState(null), 40, 2500, 61);  // N = 1e5
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(0.05 * i);
    const auto nullScan = scanWitness(nullDs, grid);
    CHECK(nullScan[bestReport(nullScan)].WR < 3.0);
}

TEST_CASE("histogram accumulation") {
    const auto st = model::heraldedState(testutil::friendlyParams());
    const auto ds = homodyne::generateDataset(st, 10, 500, 8);
    const HistogramBinning binning{0.1, -6.0, 6.0};

    const Histogram h0 = buildHistogram(ds, 0.0, binning);
    double total = h0.underflow + h0.overflow;
    for (const double c : h0.counts) total += c;
    CHECK(total == doctest::Approx(static_cast<double>(ds.K)).epsilon(1e-12));

    const double s = 0.25;
    const Histogram hs = buildHistogram(ds, s, binning);
    double expected = 0.0;
    for (int k = 0; k < ds.K; ++k) {
        const double g = antisqueezeMap(ds.thetas[k], s).g;
        expected += 1.0 / (g * g);
    }
    double totalS = hs.underflow + hs.overflow;
    for (const double c : hs.counts) totalS += c;
    CHECK(totalS == doctest::Approx(expected).epsilon(1e-12));

    // A single sample at x = 0 lands in the central bin.
    homodyne::QuadratureDataset one;
    one.K = 1;
    one.thetas = {1.0};
    one.samples = {{0.0}};
    const Histogram h1 = buildHistogram(one, 0.0, binning);
    CHECK(h1.counts[-h1.jMin] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(buildHistogram(ds, 0.0, HistogramBinning{0.0, -6.0, 6.0}), std::domain_error);
}

TEST_CASE("POVM elements: completeness and limits") {
    const HistogramBinning binning{0.1, -6.0, 6.0};
    const HistogramPovm povm = povmElements(binning, 20);
    REQUIRE(povm.pi.size() == 121 + 2);
    for (int n = 0; n <= 20; ++n) {
        double sum = 0.0;
        for (const auto& row : povm.pi) {
            CHECK(row[n] >= -1e-14);
            sum += row[n];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    }

    // One huge bin swallows everything.
    const HistogramPovm whole = povmElements(HistogramBinning{100.0, 0.0, 0.0}, 5);
    for (int n = 0; n <= 5; ++n) CHECK(whole.pi[0][n] == doctest::Approx(1.0).epsilon(1e-10));

    // Narrow central bin: the single-photon element vanishes faster than the
    // vacuum element (psi_1(0) = 0).
    const HistogramPovm wide = povmElements(HistogramBinning{0.2, 0.0, 0.0}, 2);
    const HistogramPovm narrow = povmElements(HistogramBinning{0.02, 0.0, 0.0}, 2);
    const double ratioWide = wide.pi[0][1] / wide.pi[0][0];
    const double ratioNarrow = narrow.pi[0][1] / narrow.pi[0][0];
    CHECK(ratioNarrow < 0.02 * ratioWide);

    CHECK_THROWS_AS(povmElements(binning, 0), std::domain_error);
}

TEST_CASE("EM estimation: vacuum data, monotonicity, initialization independence") {
    const auto ds = vacuumDataset(10, 2000, 14);  // N = 2e4
    const HistogramBinning binning{0.1, -6.0, 6.0};
    const Histogram hist = buildHistogram(ds, 0.0, binning);
    const HistogramPovm povm = povmElements(binning, 10);

    const MlResult ml = emEstimate(hist, povm);
    CHECK(ml.converged);
    CHECK(ml.p[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(ml.worstLikelihoodDrop >= -1e-12);
    double sum = 0.0;
    for (const double p : ml.p) {
        CHECK(p >= 0.0);
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));

    // Vacuum-weighted initialization reaches the same fixed point.
    std::vector<double> init(11, 0.02);
    init[0] = 0.8;
    const MlResult ml2 = emEstimate(hist, povm, 20000, 1e-10, init);
    for (int n = 0; n <= 10; ++n) CHECK(ml.p[n] == doctest::Approx(ml2.p[n]).scale(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(emEstimate(Histogram{binning, std::vector<double>(121, 0.0), 0.0, 0.0, -60},
                               povm),
                    std::domain_error);
}

TEST_CASE("EM floors vanishing bin probabilities and flags it") {
    // A count parked at x = 40 where every |psi_n(x)|^2 underflows to zero.
    const HistogramBinning binning{1.0, -40.0, 40.0};
    const HistogramPovm povm = povmElements(binning, 3);
    homodyne::QuadratureDataset ds;
    ds.K = 1;
    ds.thetas = {1.0};
    ds.samples = {{0.0, 0.1, -0.2, 40.0}};
    const Histogram hist = buildHistogram(ds, 0.0, binning);
    const MlResult ml = emEstimate(hist, povm, 500);
    CHECK(ml.flooredProbability);
    double sum = 0.0;
    for (const double p : ml.p) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("s = 0 estimation path is bit-identical to a plain estimator") {
    const auto st = model::heraldedState(testutil::friendlyParams());
    const auto ds = homodyne::generateDataset(st, 15, 300, 55);

    // Plain estimator written out directly, without the anti-squeezing
    // machinery, in the same accumulation order.
    double p0 = 0.0, p1 = 0.0;
    for (int k = 0; k < ds.K; ++k) {
        double s0 = 0.0, s1 = 0.0;
        for (const double x : ds.samples[k]) {
            s0 += patternFunction(0, x);
            s1 += patternFunction(1, x);
        }
        const double m = static_cast<double>(ds.samples[k].size());
        p0 += s0 / m;
        p1 += s1 / m;
    }
    p0 /= ds.K;
    p1 /= ds.K;

    const PhotonStats e = estimatePhotonStats(ds, 0.0);
    CHECK(e.p0 == p0);
    CHECK(e.p1 == p1);

    const auto m = antisqueezeMap(1.3, 0.4);
    CHECK(m.weight() == doctest::Approx(1.0 / (m.g * m.g)).epsilon(1e-15));
    CHECK(m.xScaled(2.0) == doctest::Approx(2.0 / m.g).epsilon(1e-15));
}
