#include "qng/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qng/rng.hpp"

namespace qng::fit {

namespace {

constexpr double kPenalty = 1e30;

using Point = std::array<double, 4>;  // (Vx, Vp, Q, nth)

model::ModelParams makeParams(const Point& x, const FitSpec& spec) {
    model::ModelParams p;
    p.Vx = x[0];
    p.Vp = x[1];
    p.Q = x[2];
    p.nth = x[3];
    p.T = 1.0 - spec.R;
    p.eta = spec.eta;
    p.etaH = spec.etaH;
    return p;
}

bool inBounds(const Point& x, const Bounds& b) {
    return x[0] > b.VxLo && x[0] <= b.VxHi && x[1] >= b.VpLo && x[1] <= b.VpHi && x[2] >= b.QLo &&
           x[2] <= b.QHi && x[3] >= b.nthLo && x[3] <= b.nthHi && x[0] * x[1] >= 0.25;
}

double objectiveAt(const Point& x, const FitSpec& spec) {
    if (!inBounds(x, spec.bounds)) {
        // Distance-graded penalty keeps the simplex ordered outside the box.
        double excess = 0.0;
        excess += std::max(0.0, spec.bounds.VxLo - x[0]) + std::max(0.0, x[0] - spec.bounds.VxHi);
        excess += std::max(0.0, spec.bounds.VpLo - x[1]) + std::max(0.0, x[1] - spec.bounds.VpHi);
        excess += std::max(0.0, spec.bounds.QLo - x[2]) + std::max(0.0, x[2] - spec.bounds.QHi);
        excess += std::max(0.0, spec.bounds.nthLo - x[3]) + std::max(0.0, x[3] - spec.bounds.nthHi);
        excess += std::max(0.0, 0.25 - x[0] * x[1]);
        return kPenalty * (1.0 + excess);
    }
    return objective(makeParams(x, spec), spec);
}

struct NmOutcome {
    Point x;
    double f;
    int iterations;
    bool converged;
};

// Standard Nelder-Mead on 4 parameters with reflection/expansion/contraction
// coefficients 1, 2, 1/2 and shrink 1/2.
NmOutcome nelderMead(const Point& start, const FitSpec& spec, int maxIter, double fTol, double xTol) {
    constexpr int n = 4;
    std::array<Point, n + 1> simplex;
    std::array<double, n + 1> fv;
    simplex[0] = start;
    for (int i = 0; i < n; ++i) {
        simplex[i + 1] = start;
        const double scale = std::max(0.05 * std::abs(start[i]), 0.02);
        simplex[i + 1][i] += scale;
    }
    for (int i = 0; i <= n; ++i) fv[i] = objectiveAt(simplex[i], spec);

    auto order = [&] {
        std::array<int, n + 1> idx;
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        std::array<Point, n + 1> sp;
        std::array<double, n + 1> sf;
        for (int i = 0; i <= n; ++i) {
            sp[i] = simplex[idx[i]];
            sf[i] = fv[idx[i]];
        }
        simplex = sp;
        fv = sf;
    };

    int iter = 0;
    for (; iter < maxIter; ++iter) {
        order();
        double spread = 0.0;
        for (int i = 0; i < n; ++i)
            spread = std::max(spread, std::abs(simplex[n][i] - simplex[0][i]));
        if (std::abs(fv[n] - fv[0]) < fTol && spread < xTol) {
            return {simplex[0], fv[0], iter, true};
        }

        Point centroid{};
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
        }
        auto blend = [&](double coef) {
            Point p;
            for (int j = 0; j < n; ++j) p[j] = centroid[j] + coef * (simplex[n][j] - centroid[j]);
            return p;
        };

        const Point refl = blend(-1.0);
        const double fRefl = objectiveAt(refl, spec);
        if (fRefl < fv[0]) {
            const Point exp2 = blend(-2.0);
            const double fExp = objectiveAt(exp2, spec);
            if (fExp < fRefl) {
                simplex[n] = exp2;
                fv[n] = fExp;
            } else {
                simplex[n] = refl;
                fv[n] = fRefl;
            }
        } else if (fRefl < fv[n - 1]) {
            simplex[n] = refl;
            fv[n] = fRefl;
        } else {
            const Point contr = blend(fRefl < fv[n] ? -0.5 : 0.5);
            const double fContr = objectiveAt(contr, spec);
            if (fContr < std::min(fRefl, fv[n])) {
                simplex[n] = contr;
                fv[n] = fContr;
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    fv[i] = objectiveAt(simplex[i], spec);
                }
            }
        }
    }
    order();
    return {simplex[0], fv[0], iter, false};
}

}  // namespace

double objective(const model::ModelParams& params, const FitSpec& spec) {
    if (spec.data.empty()) throw std::domain_error("fit::objective: no data points");
    std::vector<double> sGrid(spec.data.size());
    for (std::size_t i = 0; i < spec.data.size(); ++i) sGrid[i] = spec.data[i].s;
    const auto traj = model::modelTrajectory(params, sGrid);
    double obj = 0.0;
    for (std::size_t i = 0; i < spec.data.size(); ++i) {
        const FitDataPoint& d = spec.data[i];
        const double r0 = traj[i].p0 - d.p0;
        const double r1 = traj[i].p1 - d.p1;
        const double det = d.var_p0 * d.var_p1 - d.cov01 * d.cov01;
        if (!(det > 0.0) || !(d.var_p0 > 0.0)) {
            throw std::domain_error("fit::objective: data covariance not positive definite");
        }
        obj += (r0 * r0 * d.var_p1 - 2.0 * r0 * r1 * d.cov01 + r1 * r1 * d.var_p0) / det;
    }
    return obj;
}

FitResult fit(const FitSpec& spec, std::uint64_t seed, int restarts) {
    if (spec.data.size() < 4) throw std::domain_error("fit: need at least 4 data points for 4 parameters");
    Rng rng(seed);
    const Bounds& b = spec.bounds;

    NmOutcome best{};
    best.f = std::numeric_limits<double>::infinity();
    int totalIter = 0;
    for (int r = 0; r < restarts; ++r) {
        Point start;
        do {
            start[0] = b.VxLo + (b.VxHi - b.VxLo) * (0.1 + 0.8 * rng.uniform());
            start[1] = b.VpLo + (b.VpHi - b.VpLo) * (0.1 + 0.8 * rng.uniform());
            start[2] = b.QLo + (b.QHi - b.QLo) * (0.1 + 0.8 * rng.uniform());
            start[3] = b.nthLo + (b.nthHi - b.nthLo) * (0.1 + 0.8 * rng.uniform());
        } while (!inBounds(start, b));
        NmOutcome out = nelderMead(start, spec, 4000, 1e-14, 1e-9);
        // Polish from the incumbent to tighten boundary solutions.
        out = nelderMead(out.x, spec, 4000, 1e-15, 1e-10);
        totalIter += out.iterations;
        if (out.f < best.f) best = out;
    }

    FitResult res;
    res.params = makeParams(best.x, spec);
    res.objective = best.f;
    res.iterations = totalIter;
    res.converged = best.converged && best.f < kPenalty;
    return res;
}

}  // namespace qng::fit
