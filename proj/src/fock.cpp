#include "qng/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qng/witness.hpp"

namespace qng::fock {

namespace {

constexpr int kDefaultStart = 60;
constexpr int kDimCap = 8192;

// Squeezed-vacuum amplitudes by downward-magnitude two-term ratio recursion:
// c_{m+1} = -tanh(r) sqrt(m/(m+1)) c_{m-1}, c_0 = 1/sqrt(cosh r).
std::vector<double> squeezedVacuumAmps(double r, int dim) {
    std::vector<double> c(dim, 0.0);
    const double th = std::tanh(r);
    c[0] = 1.0 / std::sqrt(std::cosh(r));
    for (int m = 1; m + 1 < dim; m += 2) {
        c[m + 1] = -th * std::sqrt(m / (m + 1.0)) * c[m - 1];
    }
    return c;
}

// One rung of the squeeze-operator column recursion:
// S|n+1> = (cosh(r) a^dag + sinh(r) a) S|n> / sqrt(n+1).
std::vector<double> nextColumn(const std::vector<double>& col, int n, double r) {
    const int dim = static_cast<int>(col.size());
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    std::vector<double> out(dim, 0.0);
    for (int m = 0; m < dim; ++m) {
        double v = 0.0;
        if (m > 0) v += ch * std::sqrt(static_cast<double>(m)) * col[m - 1];
        if (m + 1 < dim) v += sh * std::sqrt(m + 1.0) * col[m + 1];
        out[m] = v / std::sqrt(n + 1.0);
    }
    return out;
}

// Truncation defect |1 - norm|. The recursion-built columns can overshoot
// unit norm when the parent column's tail is cut, so the sign is not
// informative on its own.
double normDefect(const std::vector<double>& amps) {
    double norm = 0.0;
    for (const double a : amps) norm += a * a;
    return std::abs(1.0 - norm);
}

std::vector<double> squeezedFockAmps(double r, int n, int dim) {
    std::vector<double> col = squeezedVacuumAmps(r, dim);
    if (n == 1) col = nextColumn(col, 0, r);
    return col;
}

int autoDim(double r, int n) {
    for (int dim = kDefaultStart; dim <= kDimCap; dim *= 2) {
        if (normDefect(squeezedFockAmps(r, n, dim)) < kTailBound) return dim;
    }
    throw std::domain_error("squeezedFock: truncation cap exceeded (squeezing too strong)");
}

double binomialPmf(int n, int m, double eta) {
    if (eta <= 0.0) return m == 0 ? 1.0 : 0.0;
    if (eta >= 1.0) return m == n ? 1.0 : 0.0;
    const double logC = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
    return std::exp(logC + m * std::log(eta) + (n - m) * std::log1p(-eta));
}

// Kraus branches of the loss channel applied to a pure state:
// v_k[m] = sqrt(C(m+k, k) (1-eta)^k eta^m) psi[m+k].
std::vector<std::vector<double>> lossBranches(const std::vector<double>& psi, double eta) {
    const int dim = static_cast<int>(psi.size());
    std::vector<std::vector<double>> branches;
    if (eta >= 1.0) {
        branches.push_back(psi);
        return branches;
    }
    for (int k = 0; k < dim; ++k) {
        std::vector<double> v(dim, 0.0);
        double maxAbs = 0.0;
        for (int m = 0; m + k < dim; ++m) {
            const double w2 = binomialPmf(m + k, m, eta);
            v[m] = std::sqrt(w2) * psi[m + k];
            maxAbs = std::max(maxAbs, std::abs(v[m]));
        }
        if (maxAbs < 1e-16 && k > 0) break;  // remaining branches negligible
        branches.push_back(std::move(v));
    }
    return branches;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = std::min(a.size(), b.size());
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

FockState squeezedFock(double r, int n, int nMax) {
    if (!std::isfinite(r)) throw std::domain_error("squeezedFock: non-finite r");
    if (n != 0 && n != 1) throw std::domain_error("squeezedFock: n must be 0 or 1");
    const int dim = (nMax <= 0) ? autoDim(r, n) : nMax + 1;
    std::vector<double> amps = squeezedFockAmps(r, n, dim);
    if (normDefect(amps) > kTailBound) throw std::domain_error("squeezedFock: truncation tail bound violated");
    FockState st;
    st.pure = true;
    st.amplitudes = std::move(amps);
    st.probabilities.resize(dim);
    for (int m = 0; m < dim; ++m) st.probabilities[m] = st.amplitudes[m] * st.amplitudes[m];
    st.tailBound = kTailBound;
    return st;
}

namespace {

// <m|S(r)|n> for r > 0 from the normal-ordered decomposition
// S = exp(-tau/2 a^dag^2) sech^(a^dag a + 1/2) exp(tau/2 a^2), tau = tanh r:
// a finite alternating sum over the number k of photons surviving both
// ladder factors, accumulated by a downward ratio recursion. Unlike the
// column recursion, this is stable for every column.
double squeezeElement(double r, int m, int n) {
    if ((m ^ n) & 1) return 0.0;  // parity conservation
    const double tau = std::tanh(r);
    const double sech = 1.0 / std::cosh(r);
    const int kMax = std::min(m, n);
    const int a0 = (n - kMax) / 2;
    const int b0 = (m - kMax) / 2;
    const double logMag = 0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) - std::lgamma(kMax + 1.0) -
                          std::lgamma(a0 + 1.0) - std::lgamma(b0 + 1.0) +
                          (a0 + b0) * std::log(tau / 2.0) + (kMax + 0.5) * std::log(sech);
    double term = ((b0 & 1) ? -1.0 : 1.0) * std::exp(logMag);
    double sum = term;
    int a = a0, b = b0;
    for (int k = kMax; k - 2 >= 0; k -= 2) {
        term *= -(tau * tau / 4.0) * k * (k - 1.0) / (sech * sech * (a + 1.0) * (b + 1.0));
        sum += term;
        ++a;
        ++b;
    }
    return sum;
}

}  // namespace

std::vector<std::vector<double>> squeezeMatrix(double r, int dim) {
    if (dim <= 0) throw std::domain_error("squeezeMatrix: dim must be positive");
    std::vector<std::vector<double>> cols(dim, std::vector<double>(dim, 0.0));
    if (r == 0.0) {
        for (int n = 0; n < dim; ++n) cols[n][n] = 1.0;
        return cols;
    }
    // S(-r) = S(r)^T, so negative squeezing swaps the element indices.
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            cols[n][m] = (r > 0.0) ? squeezeElement(r, m, n) : squeezeElement(-r, n, m);
        }
    }
    return cols;
}

FockState applyLoss(const FockState& state, double eta) {
    if (eta < 0.0 || eta > 1.0) throw std::domain_error("applyLoss: eta must be in [0, 1]");
    const int dim = static_cast<int>(state.probabilities.size());
    FockState out;
    out.pure = false;
    out.tailBound = state.tailBound;
    out.probabilities.assign(dim, 0.0);
    if (eta >= 1.0) {
        out.probabilities = state.probabilities;
        return out;
    }
    for (int n = 0; n < dim; ++n) {
        const double pn = state.probabilities[n];
        if (pn == 0.0) continue;
        for (int m = 0; m <= n; ++m) {
            out.probabilities[m] += pn * binomialPmf(n, m, eta);
        }
    }
    return out;
}

FockState subtractPhoton(double r, double T, int nMax) {
    if (!(T > 0.0) || !(T < 1.0)) throw std::domain_error("subtractPhoton: T must be in (0, 1)");
    const int dim = (nMax <= 0) ? autoDim(r, 0) : nMax + 1;
    const std::vector<double> sv = squeezedVacuumAmps(r, dim);
    if (normDefect(sv) > kTailBound) throw std::domain_error("subtractPhoton: truncation tail bound violated");
    const double R = 1.0 - T;

    // Joint coefficients after the beam splitter: |c_{m,n}|^2 =
    // sv_{m+n}^2 C(m+n, n) T^m R^n, with n photons in the tapped mode.
    double noClick = 0.0;
    for (int j = 0; j < dim; ++j) noClick += sv[j] * sv[j] * std::pow(T, j);
    const double clickProb = 1.0 - noClick;
    if (clickProb < 1e-14) throw std::domain_error("subtractPhoton: zero heralding probability");

    FockState out;
    out.pure = false;
    out.tailBound = kTailBound;
    out.probabilities.assign(dim, 0.0);
    for (int m = 0; m < dim; ++m) {
        double acc = 0.0;
        for (int n = 1; m + n < dim; ++n) {
            const double a2 = sv[m + n] * sv[m + n];
            if (a2 == 0.0) continue;
            acc += a2 * binomialPmf(m + n, n, R);  // C(m+n,n) R^n T^m
        }
        out.probabilities[m] = acc / clickProb;
    }
    return out;
}

double clickProbability(double r, double T, double eta, int nMax) {
    if (!(T > 0.0) || T > 1.0) throw std::domain_error("clickProbability: T must be in (0, 1]");
    if (eta < 0.0 || eta > 1.0) throw std::domain_error("clickProbability: eta must be in [0, 1]");
    const int dim = (nMax <= 0) ? autoDim(r, 0) : nMax + 1;
    const std::vector<double> sv = squeezedVacuumAmps(r, dim);
    // No-click probability: sum_j sv_j^2 (T + R(1-eta))^j = sum_j sv_j^2 (1 - R eta)^j.
    const double base = 1.0 - (1.0 - T) * eta;
    double noClick = 0.0;
    for (int j = 0; j < dim; ++j) noClick += sv[j] * sv[j] * std::pow(base, j);
    return 1.0 - noClick;
}

PhotonPair antisqueezedLossProbs(double r, double eta, double s) {
    if (eta < 0.0 || eta > 1.0) throw std::domain_error("antisqueezedLossProbs: eta must be in [0, 1]");
    const int dimR = autoDim(r, 1);
    const int dimS = (s == 0.0) ? 2 : autoDim(s, 1);
    const int dim = std::max(dimR, dimS);

    std::vector<double> psi = squeezedFockAmps(r, 1, dim);
    const auto branches = lossBranches(psi, eta);

    std::vector<double> phi0, phi1;
    if (s == 0.0) {
        phi0.assign(dim, 0.0);
        phi0[0] = 1.0;
        phi1.assign(dim, 0.0);
        phi1[1] = 1.0;
    } else {
        phi0 = squeezedFockAmps(s, 0, dim);
        phi1 = squeezedFockAmps(s, 1, dim);
    }

    PhotonPair out;
    for (const auto& v : branches) {
        const double o0 = dot(phi0, v);
        const double o1 = dot(phi1, v);
        out.p0 += o0 * o0;
        out.p1 += o1 * o1;
    }
    return out;
}

std::vector<LossPoint> lossTrajectory(double r, std::span<const double> etaGrid) {
    const FockState psi = squeezedFock(r, 1);
    std::vector<LossPoint> out;
    out.reserve(etaGrid.size());
    for (const double eta : etaGrid) {
        const FockState lossy = applyLoss(psi, eta);
        out.push_back({eta, lossy.p(0), lossy.p(1)});
    }
    return out;
}

namespace {

// Margin above the Gaussian boundary; positive means detected.
double boundaryMargin(double p0, double p1) {
    if (p0 <= 1e-12) return p1;
    if (p0 > 1.0) p0 = 1.0;
    return p1 - witness::gaussianBoundaryP1(p0);
}

double detectionMargin(double r, double eta, bool withAntisqueezing) {
    if (!withAntisqueezing) {
        const PhotonPair p = antisqueezedLossProbs(r, eta, 0.0);
        return boundaryMargin(p.p0, p.p1);
    }
    // Single-peaked in s; golden-section maximization on [0, 2].
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = 2.0;
    auto margin = [&](double s) {
        const PhotonPair p = antisqueezedLossProbs(r, eta, s);
        return boundaryMargin(p.p0, p.p1);
    };
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = margin(x1), f2 = margin(x2);
    while (b - a > 1e-3) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = margin(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = margin(x1);
        }
    }
    return std::max({f1, f2, margin(0.0)});
}

}  // namespace

double thresholdTransmittance(double r, bool withAntisqueezing) {
    if (!(r > 0.0)) throw std::domain_error("thresholdTransmittance: r must be > 0");
    double lo = 0.0, hi = 1.0;
    if (!(detectionMargin(r, hi, withAntisqueezing) > 0.0)) {
        throw std::domain_error("thresholdTransmittance: state not detected even without loss");
    }
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if (detectionMargin(r, mid, withAntisqueezing) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace qng::fock
