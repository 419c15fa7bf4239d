#pragma once

#include <vector>

namespace qng {

/// Dawson integral D(x) = exp(-x^2) * \int_0^x exp(t^2) dt.
/// Absolute accuracy better than 1e-13 over the full real line.
double dawson(double x);

/// CDF of a zero-mean normal with standard deviation sigma.
double normalCdf(double x, double sigma);

/// Orthonormal Hermite-Gaussian wavefunctions psi_n(x) for n = 0..nMax,
/// normalized so |psi_0(x)|^2 = exp(-x^2)/sqrt(pi) (quadrature variance 1/2).
std::vector<double> hermiteFunctions(int nMax, double x);

}  // namespace qng
