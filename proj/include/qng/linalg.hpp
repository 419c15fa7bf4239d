#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

// Small fixed-size matrices for single- and two-mode quadrature covariance
// algebra. Convention: vacuum covariance matrix is the identity, i.e. entries
// are twice the quadrature variances, ordering (x, p) per mode.

namespace qng {

struct Mat2 {
    double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(double d0, double d1) { return {d0, 0.0, 0.0, d1}; }

    double det() const { return m00 * m11 - m01 * m10; }
    double trace() const { return m00 + m11; }

    Mat2 transposed() const { return {m00, m10, m01, m11}; }

    Mat2 inverse() const {
        const double d = det();
        if (std::abs(d) < 1e-300) {
            throw std::domain_error("Mat2::inverse: singular matrix");
        }
        return {m11 / d, -m01 / d, -m10 / d, m00 / d};
    }

    bool isSymmetric(double tol = 1e-12) const { return std::abs(m01 - m10) <= tol; }

    Mat2 operator+(const Mat2& o) const { return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11}; }
    Mat2 operator-(const Mat2& o) const { return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11}; }
    Mat2 operator*(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    Mat2 operator*(double c) const { return {c * m00, c * m01, c * m10, c * m11}; }
};

inline Mat2 operator*(double c, const Mat2& m) { return m * c; }

struct Mat4 {
    std::array<std::array<double, 4>, 4> m{};

    static Mat4 identity() {
        Mat4 r;
        for (int i = 0; i < 4; ++i) r.m[i][i] = 1.0;
        return r;
    }

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    Mat4 operator*(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) {
                const double a = m[i][k];
                for (int j = 0; j < 4; ++j) r.m[i][j] += a * o.m[k][j];
            }
        return r;
    }

    Mat4 transposed() const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    Mat2 block(int bi, int bj) const {
        return {m[2 * bi][2 * bj], m[2 * bi][2 * bj + 1], m[2 * bi + 1][2 * bj], m[2 * bi + 1][2 * bj + 1]};
    }

    void setBlock(int bi, int bj, const Mat2& b) {
        m[2 * bi][2 * bj] = b.m00;
        m[2 * bi][2 * bj + 1] = b.m01;
        m[2 * bi + 1][2 * bj] = b.m10;
        m[2 * bi + 1][2 * bj + 1] = b.m11;
    }

    double det() const {
        // Laplace expansion along the first row.
        auto minor3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
            return m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) -
                   m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0]) +
                   m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0]);
        };
        return m[0][0] * minor3(1, 2, 3, 1, 2, 3) - m[0][1] * minor3(1, 2, 3, 0, 2, 3) +
               m[0][2] * minor3(1, 2, 3, 0, 1, 3) - m[0][3] * minor3(1, 2, 3, 0, 1, 2);
    }

    bool isSymmetric(double tol = 1e-12) const {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (std::abs(m[i][j] - m[j][i]) > tol) return false;
        return true;
    }
};

// Symplectic eigenvalues. A covariance matrix is physical iff every
// symplectic eigenvalue is >= 1 (uncertainty relation gamma + i*Omega >= 0).

inline double symplecticEigMin(const Mat2& g) {
    const double d = g.det();
    return d > 0.0 ? std::sqrt(d) : 0.0;
}

inline std::array<double, 2> symplecticEigs(const Mat4& g) {
    const Mat2 a = g.block(0, 0);
    const Mat2 b = g.block(1, 1);
    const Mat2 c = g.block(0, 1);
    const double delta = a.det() + b.det() + 2.0 * c.det();
    const double d4 = g.det();
    double disc = delta * delta - 4.0 * d4;
    if (disc < 0.0) disc = 0.0;  // roundoff near degeneracy
    const double root = std::sqrt(disc);
    const double lo = 0.5 * (delta - root);
    const double hi = 0.5 * (delta + root);
    return {lo > 0.0 ? std::sqrt(lo) : 0.0, hi > 0.0 ? std::sqrt(hi) : 0.0};
}

inline bool isPhysical(const Mat2& g, double tol = 1e-10) {
    return g.isSymmetric(1e-9) && g.m00 > 0.0 && g.m11 > 0.0 && symplecticEigMin(g) >= 1.0 - tol;
}

inline bool isPhysical(const Mat4& g, double tol = 1e-10) {
    if (!g.isSymmetric(1e-9)) return false;
    for (int i = 0; i < 4; ++i)
        if (g(i, i) <= 0.0) return false;
    return symplecticEigs(g)[0] >= 1.0 - tol;
}

// Positive semidefiniteness of a symmetric 2x2 matrix.
inline bool isPsd(const Mat2& g, double tol = 1e-10) {
    return g.m00 >= -tol && g.m11 >= -tol && g.det() >= -tol * (1.0 + g.trace() * g.trace());
}

}  // namespace qng
