#include "qng/special.hpp"

#include <cmath>
#include <stdexcept>

namespace qng {

namespace {

constexpr double kSqrtPiInv = 0.56418958354775628695;  // 1/sqrt(pi)

// Maclaurin series D(x) = sum_k (-2)^k x^(2k+1) / (2k+1)!!.
// Terms decrease monotonically for |x| <= 1; no cancellation issues there.
double dawsonSeries(double x) {
    double term = x;
    double sum = x;
    const double x2 = x * x;
    for (int k = 1; k < 40; ++k) {
        term *= -2.0 * x2 / (2.0 * k + 1.0);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Rybicki's sampling expansion: D(x) ~ (1/sqrt(pi)) sum_{n odd} exp(-(x-nh)^2)/n
// with error O(exp(-(pi/2h)^2)); h = 0.2 gives ~1e-27, far below double eps.
double dawsonRybicki(double x) {
    const double h = 0.2;
    const double ax = std::abs(x);
    // Nearest odd multiple of h below/above the window |x - nh| <= 8.6
    // (exp(-74) ~ 1e-33, negligible).
    int nLo = static_cast<int>(std::floor((ax - 8.6) / h));
    if ((nLo & 1) == 0) ++nLo;  // first odd index in the window (n = 0 never hit)
    const int nHi = static_cast<int>(std::ceil((ax + 8.6) / h));
    double sum = 0.0;
    for (int n = nLo; n <= nHi; n += 2) {
        const double d = ax - n * h;
        sum += std::exp(-d * d) / n;
    }
    const double v = kSqrtPiInv * sum;
    return x < 0.0 ? -v : v;
}

// Asymptotic series D(x) ~ 1/(2x) sum_k (2k-1)!!/(2x^2)^k, truncated at the
// smallest term; for |x| >= 7 the truncation error is < 1e-16 relative.
double dawsonAsymptotic(double x) {
    const double ix2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double next = term * (2.0 * k - 1.0) * ix2;
        if (std::abs(next) >= std::abs(term)) break;  // divergence onset
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / (2.0 * x);
}

}  // namespace

double dawson(double x) {
    if (std::isnan(x)) return x;
    const double ax = std::abs(x);
    if (ax <= 1.0) return dawsonSeries(x);
    if (ax <= 7.0) return dawsonRybicki(x);
    if (std::isinf(x)) return x > 0.0 ? 0.0 : -0.0;
    return dawsonAsymptotic(x);
}

double normalCdf(double x, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("normalCdf: sigma must be positive");
    return 0.5 * (1.0 + std::erf(x / (sigma * std::sqrt(2.0))));
}

std::vector<double> hermiteFunctions(int nMax, double x) {
    if (nMax < 0) throw std::domain_error("hermiteFunctions: nMax must be >= 0");
    std::vector<double> psi(nMax + 1);
    psi[0] = std::sqrt(kSqrtPiInv) * std::exp(-0.5 * x * x);
    if (nMax == 0) return psi;
    psi[1] = std::sqrt(2.0) * x * psi[0];
    for (int n = 1; n < nMax; ++n) {
        psi[n + 1] = std::sqrt(2.0 / (n + 1.0)) * x * psi[n] - std::sqrt(n / (n + 1.0)) * psi[n - 1];
    }
    return psi;
}

}  // namespace qng
