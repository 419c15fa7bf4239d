#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "qng/gaussian_model.hpp"
#include "qng/linalg.hpp"

// Shared fixtures and independent numerical oracles for the test suites.
// Oracles here deliberately avoid the library's own code paths.

namespace testutil {

inline qng::model::ModelParams experimentParams() {
    qng::model::ModelParams p;
    p.Vx = 0.364;
    p.Vp = 0.705;
    p.T = 1.0 - 0.077;
    p.eta = 0.08;
    p.etaH = 0.80;
    p.nth = 0.0;
    p.Q = 0.625;
    return p;
}

// Higher heralding rate than the experiment, for fast Monte Carlo tests.
inline qng::model::ModelParams friendlyParams() {
    qng::model::ModelParams p;
    p.Vx = 0.30;
    p.Vp = 0.95;
    p.T = 0.70;
    p.eta = 0.90;
    p.etaH = 0.85;
    p.nth = 0.01;
    p.Q = 0.90;
    return p;
}

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double acc = 0.0;
    for (const double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size() - 1);
}

// Adaptive Simpson quadrature, an oracle independent of the library.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 0) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double left = (m - a) / 6.0 * (fa + 4.0 * f(lm) + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * f(rm) + fb);
    if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, 0.5 * tol, depth + 1) + simpson(f, m, b, 0.5 * tol, depth + 1);
}

// Jacobi eigenvalue iteration for small real symmetric matrices.
inline std::vector<double> symmetricEigenvalues(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a[i][i];
    return eig;
}

// Minimum eigenvalue of the Hermitian matrix gamma + i*Omega via the real
// embedding [[A, -B], [B, A]] of A + iB.
inline double minEigGammaPlusIOmega(const qng::Mat4& gamma) {
    // Omega for (xA, pA, xB, pB): antisymmetric with [x, p] pairs.
    double omega[4][4] = {};
    omega[0][1] = 1.0;
    omega[1][0] = -1.0;
    omega[2][3] = 1.0;
    omega[3][2] = -1.0;
    std::vector<std::vector<double>> m(8, std::vector<double>(8, 0.0));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m[i][j] = gamma(i, j);
            m[i + 4][j + 4] = gamma(i, j);
            m[i][j + 4] = -omega[i][j];
            m[i + 4][j] = omega[i][j];
        }
    }
    const auto eig = symmetricEigenvalues(std::move(m));
    double lo = eig[0];
    for (const double e : eig) lo = std::min(lo, e);
    return lo;
}

inline double minEigGammaPlusIOmega(const qng::Mat2& gamma) {
    const double omega[2][2] = {{0.0, 1.0}, {-1.0, 0.0}};
    const double g[2][2] = {{gamma.m00, gamma.m01}, {gamma.m10, gamma.m11}};
    std::vector<std::vector<double>> m(4, std::vector<double>(4, 0.0));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m[i][j] = g[i][j];
            m[i + 2][j + 2] = g[i][j];
            m[i][j + 2] = -omega[i][j];
            m[i + 2][j] = omega[i][j];
        }
    }
    const auto eig = symmetricEigenvalues(std::move(m));
    double lo = eig[0];
    for (const double e : eig) lo = std::min(lo, e);
    return lo;
}

// Beam-splitter symplectic conjugation oracle: S (gammaA (+) I) S^T.
inline qng::Mat4 beamsplitterConjugationOracle(const qng::Mat2& gammaA, double T) {
    const double t = std::sqrt(T);
    const double r = std::sqrt(1.0 - T);
    qng::Mat4 s;
    s.setBlock(0, 0, t * qng::Mat2::identity());
    s.setBlock(0, 1, -r * qng::Mat2::identity());
    s.setBlock(1, 0, r * qng::Mat2::identity());
    s.setBlock(1, 1, t * qng::Mat2::identity());
    qng::Mat4 g;
    g.setBlock(0, 0, gammaA);
    g.setBlock(1, 1, qng::Mat2::identity());
    return s * g * s.transposed();
}

inline double maxAbsDiff(const qng::Mat4& a, const qng::Mat4& b) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

// Kolmogorov-Smirnov statistic of sorted samples against a CDF.
inline double ksStatistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - i / n));
        d = std::max(d, std::abs(f - (i + 1) / n));
    }
    return d;
}

}  // namespace testutil
