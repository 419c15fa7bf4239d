#include "qng/witness.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace qng::witness {

namespace {

void requireFinite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": non-finite argument");
}

// Golden-section maximization of a unimodal function on [lo, hi].
double goldenMax(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

BoundaryPoint gaussianBoundary(double r) {
    requireFinite(r, "gaussianBoundary");
    if (r < 0.0) throw std::domain_error("gaussianBoundary: r must be >= 0");
    // exp(r)*sinh(r) = (exp(2r) - 1)/2, written with expm1 for small r.
    const double es = 0.5 * std::expm1(2.0 * r);
    const double ch = std::cosh(r);
    const double p0 = std::exp(-es) / ch;
    const double p1 = 0.25 * std::expm1(4.0 * r) * std::exp(-es) / (ch * ch * ch);
    return {r, p0, p1};
}

BoundaryPoint coherentBoundary(double nbar) {
    requireFinite(nbar, "coherentBoundary");
    if (nbar < 0.0) throw std::domain_error("coherentBoundary: nbar must be >= 0");
    const double e = std::exp(-nbar);
    return {nbar, e, nbar * e};
}

double gaussianBoundaryP1(double p0) {
    if (!(p0 > 0.0) || p0 > 1.0) throw std::domain_error("gaussianBoundaryP1: p0 must be in (0, 1]");
    if (p0 == 1.0) return 0.0;
    // p0(r) decreases strictly from 1; bracket then bisect.
    double lo = 0.0, hi = 1.0;
    while (gaussianBoundary(hi).p0 > p0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) throw std::domain_error("gaussianBoundaryP1: p0 below curve range");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (gaussianBoundary(mid).p0 > p0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * (1.0 + hi)) break;
    }
    return gaussianBoundary(0.5 * (lo + hi)).p1;
}

GaussianBound gaussianBound(double a) {
    requireFinite(a, "gaussianBound");
    if (a >= 1.0) throw std::domain_error("gaussianBound: a must be < 1");
    const double disc = a * a - 10.0 * a + 9.0;  // = (1-a)(9-a) > 0 for a < 1
    const double r0 = 0.5 * std::log(0.5 * (3.0 - a + std::sqrt(disc)));
    const double ch = std::cosh(r0);
    const double es = 0.5 * std::expm1(2.0 * r0);
    const double wg = (a + 0.25 * std::expm1(4.0 * r0) / (ch * ch)) * std::exp(-es) / ch;
    return {wg, r0};
}

double classicalBound(double a) {
    requireFinite(a, "classicalBound");
    if (a >= 1.0) throw std::domain_error("classicalBound: a must be < 1");
    return std::exp(a - 1.0);
}

double witnessValue(double p0, double p1, double a) {
    requireFinite(p0, "witnessValue");
    requireFinite(p1, "witnessValue");
    return a * p0 + p1;
}

bool negativityFlag(double p1s) {
    if (p1s < 0.0 || p1s > 1.0) throw std::domain_error("negativityFlag: p1 must be in [0, 1]");
    return p1s > 0.5;
}

OptimalWitness optimalRelativeWitness(double p0, double p1, double cov00, double cov01, double cov11,
                                      double aMin, double aMax) {
    requireFinite(p0, "optimalRelativeWitness");
    requireFinite(p1, "optimalRelativeWitness");
    if (cov00 < 0.0 || cov11 < 0.0 || cov00 * cov11 - cov01 * cov01 < -1e-12 * (1.0 + cov00 * cov11)) {
        throw std::domain_error("optimalRelativeWitness: covariance not positive semidefinite");
    }
    if (!(aMin < aMax) || aMax >= 1.0) throw std::domain_error("optimalRelativeWitness: need aMin < aMax < 1");
    const auto relWitness = [&](double a) {
        const double var = a * a * cov00 + 2.0 * a * cov01 + cov11;
        if (var <= 0.0) throw std::domain_error("optimalRelativeWitness: degenerate covariance, deltaW = 0");
        return (a * p0 + p1 - gaussianBound(a).WG) / std::sqrt(var);
    };

    const int n = 2000;
    int best = 0;
    double bestVal = relWitness(aMin);
    for (int i = 1; i < n; ++i) {
        const double a = aMin + (aMax - aMin) * i / (n - 1.0);
        const double v = relWitness(a);
        if (v > bestVal) {
            bestVal = v;
            best = i;
        }
    }
    const double step = (aMax - aMin) / (n - 1.0);
    const double lo = std::max(aMin, aMin + (best - 1) * step);
    const double hi = std::min(aMax, aMin + (best + 1) * step);
    const double aOpt = goldenMax(relWitness, lo, hi, 1e-10);
    return {aOpt, relWitness(aOpt)};
}

}  // namespace qng::witness
