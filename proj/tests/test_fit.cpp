#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "qng/estimation.hpp"
#include "qng/fit.hpp"
#include "qng/homodyne.hpp"
#include "qng/rng.hpp"

using namespace qng;
using namespace qng::fit;

namespace {

std::vector<double> standardGrid() {
    std::vector<double> g;
    for (int i = 0; i <= 8; ++i) g.push_back(0.05 * i);
    return g;
}

FitSpec noiselessSpec(const model::ModelParams& truth) {
    FitSpec spec;
    spec.R = 1.0 - truth.T;
    spec.etaH = truth.etaH;
    spec.eta = truth.eta;
    for (const auto& pt : model::modelTrajectory(truth, standardGrid())) {
        spec.data.push_back({pt.s, pt.p0, pt.p1, 1.0, 1.0, 0.0});
    }
    return spec;
}

}  // namespace

TEST_CASE("objective: zero at truth, strictly positive under perturbation") {
    const auto truth = testutil::experimentParams();
    const FitSpec spec = noiselessSpec(truth);
    CHECK(objective(truth, spec) == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));

    model::ModelParams bumped = truth;
    bumped.Vx += 0.01;
    CHECK(objective(bumped, spec) > 0.0);

    // Invariant under reordering of the grid points.
    FitSpec shuffled = spec;
    std::reverse(shuffled.data.begin(), shuffled.data.end());
    CHECK(objective(bumped, shuffled) == doctest::Approx(objective(bumped, spec)).epsilon(1e-12));

    FitSpec bad = spec;
    bad.data[0].var_p0 = 0.0;
    CHECK_THROWS_AS(objective(truth, bad), std::domain_error);
    FitSpec empty = spec;
    empty.data.clear();
    CHECK_THROWS_AS(objective(truth, empty), std::domain_error);
}

TEST_CASE("noiseless round trip recovers the generating parameters") {
    const auto truth = testutil::experimentParams();
    const FitResult res = qng::fit::fit(noiselessSpec(truth), 11);
    CHECK(res.converged);
    CHECK(std::abs(res.params.Vx - truth.Vx) < 1e-4);
    CHECK(std::abs(res.params.Vp - truth.Vp) < 1e-4);
    CHECK(std::abs(res.params.Q - truth.Q) < 1e-4);
    CHECK(std::abs(res.params.nth - truth.nth) < 1e-4);
    CHECK(res.params.nth >= 0.0);  // boundary respected
    CHECK(res.objective < 1e-12);
}

TEST_CASE("noiseless round trip on random interior parameter draws") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        model::ModelParams gen;
        do {
            gen.Vx = 0.28 + 0.20 * rng.uniform();
            gen.Vp = 0.60 + 2.00 * rng.uniform();
            gen.Q = 0.10 + 0.85 * rng.uniform();
            gen.nth = 0.30 * rng.uniform();
        } while (gen.Vx * gen.Vp < 0.26);
        gen.T = 1.0 - 0.077;
        gen.eta = 0.08;
        gen.etaH = 0.80;
        const FitResult res = qng::fit::fit(noiselessSpec(gen), 17 + trial);
        CHECK(std::abs(res.params.Vx - gen.Vx) < 1e-4);
        CHECK(std::abs(res.params.Vp - gen.Vp) < 1e-4);
        CHECK(std::abs(res.params.Q - gen.Q) < 1e-4);
        CHECK(std::abs(res.params.nth - gen.nth) < 1e-4);
    }
}

TEST_CASE("restart determinism") {
    const FitSpec spec = noiselessSpec(testutil::friendlyParams());
    const FitResult a = qng::fit::fit(spec, 42);
    const FitResult b = qng::fit::fit(spec, 42);
    CHECK(a.params.Vx == b.params.Vx);
    CHECK(a.params.Vp == b.params.Vp);
    CHECK(a.params.Q == b.params.Q);
    CHECK(a.params.nth == b.params.nth);
    CHECK(a.objective == b.objective);
}

TEST_CASE("noisy fit stays at the nth >= 0 boundary for a noiseless-nth model") {
    // Simulated data at the experiment scale: nth generated at its bound.
    const auto truth = testutil::experimentParams();
    const auto st = model::heraldedState(truth);
    const auto ds = homodyne::generateDataset(st, 40, 200, 314);
    FitSpec spec;
    for (const double s : standardGrid()) {
        const auto e = est::estimatePhotonStats(ds, s);
        spec.data.push_back({s, e.p0, e.p1, e.var_p0, e.var_p1, e.cov01});
    }
    const FitResult res = qng::fit::fit(spec, 7);
    CHECK(res.params.nth >= 0.0);
    CHECK(res.params.nth <= 0.5);
    CHECK(res.params.Vx * res.params.Vp >= 0.25 - 1e-12);
    CHECK(res.objective >= 0.0);
    CHECK_THROWS_AS(qng::fit::fit(FitSpec{}, 1), std::domain_error);  // fewer than 4 points
}
