#include "qng/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qng/special.hpp"

namespace qng::est {

namespace {

struct PatternPair {
    double f0;
    double f1;
};

// Both pattern functions from a single Dawson evaluation.
PatternPair patternPair(double x) {
    const double d = dawson(x);
    const double x2 = x * x;
    return {2.0 - 4.0 * x * d, 2.0 * (2.0 * x2 - 1.0) + 8.0 * x * (1.0 - x2) * d};
}

void checkDataset(const homodyne::QuadratureDataset& ds) {
    if (ds.K < 1) throw std::domain_error("estimation: dataset must have K >= 1 phase bins");
    for (int k = 0; k < ds.K; ++k) {
        if (ds.samples[k].empty())
            throw std::domain_error("estimation: empty phase bin " + std::to_string(k + 1));
    }
}

}  // namespace

double patternFunction(int n, double x) {
    if (!std::isfinite(x)) throw std::domain_error("patternFunction: non-finite x");
    const PatternPair p = patternPair(x);
    if (n == 0) return p.f0;
    if (n == 1) return p.f1;
    throw std::domain_error("patternFunction: n must be 0 or 1");
}

AntiSqueezedSample antisqueezeMap(double theta, double s) {
    if (s == 0.0) return {theta, 1.0};
    const double e2s = std::exp(2.0 * s);
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    const double g = std::sqrt(c * c / e2s + e2s * sn * sn);
    double vartheta = std::atan2(e2s * sn, c);
    if (vartheta <= 0.0) vartheta += std::acos(-1.0);  // keep the (0, pi] branch
    return {vartheta, g};
}

PhotonStats estimatePhotonStats(const homodyne::QuadratureDataset& ds, double s) {
    checkDataset(ds);
    const double K = static_cast<double>(ds.K);
    PhotonStats st;
    st.s = s;
    for (int k = 0; k < ds.K; ++k) {
        const double g = antisqueezeMap(ds.thetas[k], s).g;
        const double w = 1.0 / (g * g);
        double s0 = 0.0, s1 = 0.0, q00 = 0.0, q11 = 0.0, q01 = 0.0;
        for (const double x : ds.samples[k]) {
            const PatternPair p = patternPair(x / g);
            const double f0 = w * p.f0;
            const double f1 = w * p.f1;
            s0 += f0;
            s1 += f1;
            q00 += f0 * f0;
            q11 += f1 * f1;
            q01 += f0 * f1;
        }
        const double m = static_cast<double>(ds.samples[k].size());
        st.N += ds.samples[k].size();
        st.p0 += s0 / m;
        st.p1 += s1 / m;
        st.var_p0 += q00 / (m * m) - s0 * s0 / (m * m * m);
        st.var_p1 += q11 / (m * m) - s1 * s1 / (m * m * m);
        st.cov01 += q01 / (m * m) - s0 * s1 / (m * m * m);
    }
    st.p0 /= K;
    st.p1 /= K;
    st.var_p0 /= K * K;
    st.var_p1 /= K * K;
    st.cov01 /= K * K;
    return st;
}

witness::WitnessReport estimateWitness(const homodyne::QuadratureDataset& ds, double a, double s) {
    if (a >= 1.0) throw std::domain_error("estimateWitness: a must be < 1");
    checkDataset(ds);
    const double K = static_cast<double>(ds.K);

    // Single-scalar estimator f_W = a f0 + f1, so the reported deltaW carries
    // the p0-p1 correlation without any extra propagation step.
    double W = 0.0, varW = 0.0;
    for (int k = 0; k < ds.K; ++k) {
        const double g = antisqueezeMap(ds.thetas[k], s).g;
        const double w = 1.0 / (g * g);
        double sw = 0.0, qww = 0.0;
        for (const double x : ds.samples[k]) {
            const PatternPair p = patternPair(x / g);
            const double fw = w * (a * p.f0 + p.f1);
            sw += fw;
            qww += fw * fw;
        }
        const double m = static_cast<double>(ds.samples[k].size());
        W += sw / m;
        varW += qww / (m * m) - sw * sw / (m * m * m);
    }
    W /= K;
    varW /= K * K;

    const PhotonStats st = estimatePhotonStats(ds, s);
    witness::WitnessReport rep;
    rep.params = {a, s};
    rep.p0_est = st.p0;
    rep.p1_est = st.p1;
    rep.cov00 = st.var_p0;
    rep.cov01 = st.cov01;
    rep.cov11 = st.var_p1;
    rep.W = W;
    rep.deltaW = varW > 0.0 ? std::sqrt(varW) : 0.0;
    rep.WG = witness::gaussianBound(a).WG;
    rep.Wcl = witness::classicalBound(a);
    rep.WR = rep.deltaW > 0.0 ? (rep.W - rep.WG) / rep.deltaW : 0.0;
    rep.negativity = witness::negativityFlag(std::clamp(st.p1, 0.0, 1.0));
    return rep;
}

std::vector<witness::WitnessReport> scanWitness(const homodyne::QuadratureDataset& ds,
                                                std::span<const double> sGrid, double aMin, double aMax) {
    std::vector<witness::WitnessReport> out;
    out.reserve(sGrid.size());
    for (const double s : sGrid) {
        const PhotonStats st = estimatePhotonStats(ds, s);
        const witness::OptimalWitness opt =
            witness::optimalRelativeWitness(st.p0, st.p1, st.var_p0, st.cov01, st.var_p1, aMin, aMax);
        out.push_back(estimateWitness(ds, opt.a, s));
    }
    return out;
}

std::size_t bestReport(const std::vector<witness::WitnessReport>& reports) {
    if (reports.empty()) throw std::domain_error("bestReport: empty report list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (reports[i].WR > reports[best].WR) best = i;
    }
    return best;
}

Histogram buildHistogram(const homodyne::QuadratureDataset& ds, double s, const HistogramBinning& binning) {
    if (!(binning.dx > 0.0)) throw std::domain_error("buildHistogram: bin width must be positive");
    if (binning.xmin > binning.xmax) throw std::domain_error("buildHistogram: xmin must be <= xmax");
    checkDataset(ds);
    Histogram h;
    h.binning = binning;
    h.jMin = static_cast<int>(std::llround(binning.xmin / binning.dx));
    const int jMax = static_cast<int>(std::llround(binning.xmax / binning.dx));
    h.counts.assign(jMax - h.jMin + 1, 0.0);
    for (int k = 0; k < ds.K; ++k) {
        const double g = antisqueezeMap(ds.thetas[k], s).g;
        const double w = 1.0 / (g * g * static_cast<double>(ds.samples[k].size()));
        for (const double x : ds.samples[k]) {
            const int j = static_cast<int>(std::llround(x / (g * binning.dx)));
            if (j < h.jMin)
                h.underflow += w;
            else if (j > jMax)
                h.overflow += w;
            else
                h.counts[j - h.jMin] += w;
        }
    }
    return h;
}

namespace {

// Gauss-Legendre nodes/weights, order 10, on [-1, 1].
constexpr double kGlNode[5] = {0.14887433898163121, 0.43339539412924719, 0.67940956829902441,
                               0.86506336668898451, 0.97390652851717172};
constexpr double kGlWeight[5] = {0.29552422471475287, 0.26926671930999635, 0.21908636251598204,
                                 0.14945134915058059, 0.066671344308688138};

// Integrates |psi_n|^2 for all n at once over [a, b] with adaptive halving.
void integrateBin(double a, double b, int nMax, std::vector<double>& acc, int depth) {
    const double mid = 0.5 * (a + b);
    const double halfLen = 0.5 * (b - a);
    std::vector<double> whole(nMax + 1, 0.0);
    for (int i = 0; i < 5; ++i) {
        for (const double sign : {-1.0, 1.0}) {
            const double x = mid + sign * halfLen * kGlNode[i];
            const std::vector<double> psi = hermiteFunctions(nMax, x);
            for (int n = 0; n <= nMax; ++n) whole[n] += kGlWeight[i] * halfLen * psi[n] * psi[n];
        }
    }
    if (depth >= 24) {
        for (int n = 0; n <= nMax; ++n) acc[n] += whole[n];
        return;
    }
    std::vector<double> halves(nMax + 1, 0.0);
    for (const auto& [lo, hi] : {std::pair{a, mid}, std::pair{mid, b}}) {
        const double m2 = 0.5 * (lo + hi);
        const double h2 = 0.5 * (hi - lo);
        for (int i = 0; i < 5; ++i) {
            for (const double sign : {-1.0, 1.0}) {
                const double x = m2 + sign * h2 * kGlNode[i];
                const std::vector<double> psi = hermiteFunctions(nMax, x);
                for (int n = 0; n <= nMax; ++n) halves[n] += kGlWeight[i] * h2 * psi[n] * psi[n];
            }
        }
    }
    double maxDiff = 0.0;
    for (int n = 0; n <= nMax; ++n) maxDiff = std::max(maxDiff, std::abs(halves[n] - whole[n]));
    if (maxDiff < 1e-12) {
        for (int n = 0; n <= nMax; ++n) acc[n] += halves[n];
        return;
    }
    integrateBin(a, mid, nMax, acc, depth + 1);
    integrateBin(mid, b, nMax, acc, depth + 1);
}

// Upper tail \int_t^inf |psi_n|^2 dx for all n, via the exact recursion
// T_{n+1}(t) = T_n(t) + psi_n(t) psi_{n+1}(t) / sqrt(2(n+1)).
std::vector<double> upperTails(double t, int nMax) {
    std::vector<double> tails(nMax + 1);
    const std::vector<double> psi = hermiteFunctions(nMax, t);
    tails[0] = 0.5 * std::erfc(t);
    for (int n = 0; n < nMax; ++n) {
        tails[n + 1] = tails[n] + psi[n] * psi[n + 1] / std::sqrt(2.0 * (n + 1.0));
    }
    return tails;
}

}  // namespace

HistogramPovm povmElements(const HistogramBinning& binning, int nMaxFock) {
    if (nMaxFock < 1) throw std::domain_error("povmElements: nMaxFock must be >= 1");
    if (!(binning.dx > 0.0)) throw std::domain_error("povmElements: bin width must be positive");
    const int jMin = static_cast<int>(std::llround(binning.xmin / binning.dx));
    const int jMax = static_cast<int>(std::llround(binning.xmax / binning.dx));
    HistogramPovm povm;
    povm.binning = binning;
    povm.nMaxFock = nMaxFock;
    povm.pi.reserve(jMax - jMin + 3);
    for (int j = jMin; j <= jMax; ++j) {
        std::vector<double> row(nMaxFock + 1, 0.0);
        integrateBin((j - 0.5) * binning.dx, (j + 0.5) * binning.dx, nMaxFock, row, 0);
        povm.pi.push_back(std::move(row));
    }
    // Underflow (-inf, (jMin - 1/2) dx] by evenness, then overflow.
    povm.pi.push_back(upperTails(-(jMin - 0.5) * binning.dx, nMaxFock));
    povm.pi.push_back(upperTails((jMax + 0.5) * binning.dx, nMaxFock));
    return povm;
}

MlResult emEstimate(const Histogram& hist, const HistogramPovm& povm, int maxIter, double tol,
                    std::vector<double> init) {
    const std::size_t nRows = hist.counts.size() + 2;
    if (povm.pi.size() != nRows) throw std::domain_error("emEstimate: histogram and POVM bin counts differ");
    std::vector<double> counts(hist.counts);
    counts.push_back(hist.underflow);
    counts.push_back(hist.overflow);
    double total = 0.0;
    for (const double c : counts) {
        if (c < 0.0) throw std::domain_error("emEstimate: negative counter");
        total += c;
    }
    if (total <= 0.0) throw std::domain_error("emEstimate: all counters are zero");

    const int nMax = povm.nMaxFock;
    MlResult res;
    if (init.empty()) {
        res.p.assign(nMax + 1, 1.0 / (nMax + 1.0));
    } else {
        if (static_cast<int>(init.size()) != nMax + 1)
            throw std::domain_error("emEstimate: init size must be nMaxFock + 1");
        double norm = 0.0;
        for (const double v : init) {
            if (v < 0.0) throw std::domain_error("emEstimate: negative init probability");
            norm += v;
        }
        if (norm <= 0.0) throw std::domain_error("emEstimate: init must have positive mass");
        res.p = std::move(init);
        for (auto& v : res.p) v /= norm;
    }

    auto logLik = [&](const std::vector<double>& p, bool& floored) {
        double ll = 0.0;
        for (std::size_t j = 0; j < nRows; ++j) {
            if (counts[j] == 0.0) continue;
            double pj = 0.0;
            for (int n = 0; n <= nMax; ++n) pj += povm.pi[j][n] * p[n];
            if (pj <= 0.0) {
                pj = 1e-300;
                floored = true;
            }
            ll += counts[j] * std::log(pj);
        }
        return ll;
    };

    res.logLikelihood = logLik(res.p, res.flooredProbability);
    for (res.iterations = 0; res.iterations < maxIter; ++res.iterations) {
        std::vector<double> r(nMax + 1, 0.0);
        for (std::size_t j = 0; j < nRows; ++j) {
            if (counts[j] == 0.0) continue;
            double pj = 0.0;
            for (int n = 0; n <= nMax; ++n) pj += povm.pi[j][n] * res.p[n];
            if (pj <= 0.0) {
                pj = 1e-300;
                res.flooredProbability = true;
            }
            const double ratio = counts[j] / pj;
            for (int n = 0; n <= nMax; ++n) r[n] += ratio * povm.pi[j][n];
        }
        double norm = 0.0;
        for (int n = 0; n <= nMax; ++n) {
            res.p[n] *= r[n] / total;
            norm += res.p[n];
        }
        for (int n = 0; n <= nMax; ++n) res.p[n] /= norm;

        const double ll = logLik(res.p, res.flooredProbability);
        const double gain = ll - res.logLikelihood;
        res.worstLikelihoodDrop = std::min(res.worstLikelihoodDrop, gain);
        res.logLikelihood = ll;
        if (std::abs(gain) < tol) {
            res.converged = true;
            ++res.iterations;
            break;
        }
    }
    return res;
}

}  // namespace qng::est
