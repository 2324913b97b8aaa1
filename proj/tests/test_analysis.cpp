#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "mipt/analysis.hpp"

using namespace mipt;

TEST_CASE("plateau: constants and the spec'd literal sequence") {
    const std::vector<double> flat(12, 0.7);
    const PlateauResult pr = plateau_height(flat);
    CHECK(pr.window_found);
    CHECK(pr.H == doctest::Approx(0.7).epsilon(1e-15));

    const std::vector<double> seq = {0.9, 0.5, 0.30, 0.299, 0.298, 0.2985, 0.298, 0.2978, 0.2975};
    PlateauConfig cfg;
    cfg.window = 4;
    cfg.delta = 1e-3;
    const PlateauResult pr2 = plateau_height(seq, cfg);
    CHECK(pr2.window_found);
    CHECK(pr2.n_start == 3);  // skips the initial drop
    CHECK(pr2.H == doctest::Approx(0.299).epsilon(2e-3));
}

TEST_CASE("plateau: detected-at-once series from tau = 0") {
    std::vector<double> r(10, 0.0);
    const PlateauResult pr = plateau_height(r);
    CHECK(pr.window_found);
    CHECK(pr.H == 0.0);
}

TEST_CASE("plateau: fallback flags and reports the flattest step") {
    // strictly relaxing curve, never flat to delta
    std::vector<double> r;
    for (int n = 1; n <= 12; ++n) r.push_back(1.0 / n);
    PlateauConfig cfg;
    cfg.delta = 1e-4;
    const PlateauResult pr = plateau_height(r, cfg);
    CHECK_FALSE(pr.window_found);
    CHECK(pr.n_start == 11);  // |dR| shrinks monotonically
    CHECK(pr.H == doctest::Approx(1.0 / 11).epsilon(1e-12));
}

TEST_CASE("plateau: first-window rule is stable under appended data") {
    std::vector<double> r = {0.9, 0.6, 0.500, 0.5001, 0.5002, 0.5001, 0.5};
    PlateauConfig cfg;
    cfg.window = 4;
    const PlateauResult a = plateau_height(r, cfg);
    std::vector<double> longer = r;
    for (int i = 0; i < 30; ++i) longer.push_back(0.4 - 0.01 * i);
    const PlateauResult b = plateau_height(longer, cfg);
    CHECK(a.window_found);
    CHECK(a.H == b.H);
    CHECK(a.n_start == b.n_start);
}

TEST_CASE("plateau: input validation") {
    std::vector<double> r = {1.0, 0.9};
    CHECK_THROWS_AS(plateau_height(r), std::invalid_argument);
    std::vector<double> ok(10, 0.5);
    PlateauConfig bad;
    bad.window = 1;
    CHECK_THROWS_AS(plateau_height(ok, bad), std::invalid_argument);
}

TEST_CASE("two-point derivative on exact data") {
    const std::vector<double> xs = {0.0, 0.1, 0.2};
    const std::vector<double> lin = {0.0, 0.2, 0.4};
    const DerivativeSeries d1 = two_point_derivative(xs, lin);
    CHECK(d1.slope[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d1.slope[1] == doctest::Approx(2.0).epsilon(1e-15));

    const std::vector<double> sq = {0.0, 0.01, 0.04};  // x^2 on the grid
    const DerivativeSeries d2 = two_point_derivative(xs, sq);
    CHECK(d2.x[0] == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(d2.x[1] == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(d2.slope[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(d2.slope[1] == doctest::Approx(0.3).epsilon(1e-12));

    const std::vector<double> cst = {1.0, 1.0, 1.0};
    for (double s : two_point_derivative(xs, cst).slope) CHECK(s == 0.0);

    const std::vector<double> dup = {0.0, 0.1, 0.1};
    CHECK_THROWS_AS(two_point_derivative(dup, lin), std::invalid_argument);
}

TEST_CASE("peak location") {
    const std::vector<double> xs = {0.1, 0.2, 0.3};
    const std::vector<double> sl = {1.0, 5.0, 2.0};
    const PeakResult pk = peak_location(xs, sl);
    CHECK(pk.x_peak == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(pk.slope_peak == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_FALSE(pk.boundary);

    const std::vector<double> mono = {1.0, 2.0, 3.0};
    CHECK(peak_location(xs, mono).boundary);

    const std::vector<double> tie = {5.0, 1.0, 5.0};
    CHECK(peak_location(xs, tie).x_peak == doctest::Approx(0.1).epsilon(1e-15));

    // argmax is invariant under positive rescaling
    std::vector<double> scaled = sl;
    for (double& v : scaled) v *= 7.3;
    CHECK(peak_location(xs, scaled).x_peak == peak_location(xs, sl).x_peak);

    // parabolic refinement moves off-grid, stays inside the bracket
    const PeakResult refined = peak_location(xs, sl, true);
    CHECK(refined.x_peak > 0.2);
    CHECK(refined.x_peak < 0.3);
}

TEST_CASE("sigma collapse: identical curves collapse exactly") {
    CurveXY c;
    for (int i = 0; i <= 30; ++i) {
        const double tau = 0.02 + 0.01 * i;
        c.x.push_back(tau);
        c.y.push_back(1.0 / (1.0 + std::exp(-(tau * 10 - 1.5))));
    }
    const SigmaCollapseResult r = sigma_collapse({{100, c}, {100, c}});
    CHECK(r.peak_spread == 0.0);
    CHECK(r.quality == 0.0);
}

TEST_CASE("sigma collapse: synthetic logistic in sigma has matching peaks") {
    // H depends on tau and L only through sigma = tau sqrt(L): peaks must align
    auto make = [](int L, int points) {
        CurveXY c;
        for (int i = 0; i <= points; ++i) {
            const double sigma = 0.2 + (3.0 - 0.2) * i / points;
            c.x.push_back(sigma / std::sqrt(static_cast<double>(L)));
            c.y.push_back(1.0 / (1.0 + std::exp(-4.0 * (sigma - 1.0))));
        }
        return c;
    };
    const SigmaCollapseResult coarse =
        sigma_collapse({{100, make(100, 40)}, {400, make(400, 40)}});
    CHECK(coarse.peak_spread <= 0.05);
    for (double p : coarse.sigma_peak) CHECK(std::abs(p - 1.0) <= 0.1);

    const SigmaCollapseResult fine =
        sigma_collapse({{100, make(100, 160)}, {400, make(400, 160)}});
    CHECK(fine.peak_spread <= coarse.peak_spread + 1e-12);
    CHECK(fine.quality <= coarse.quality + 1e-9);
}

TEST_CASE("sigma collapse: disjoint sigma ranges are rejected") {
    CurveXY a, b;
    for (int i = 0; i <= 10; ++i) {
        a.x.push_back(0.01 + 0.001 * i);
        a.y.push_back(0.1 * i);
        b.x.push_back(0.5 + 0.001 * i);
        b.y.push_back(0.1 * i);
    }
    CHECK_THROWS_AS(sigma_collapse({{4, a}, {10000, b}}), std::invalid_argument);
}

TEST_CASE("entanglement collapse basics") {
    CurveXY c;
    for (int i = 0; i <= 20; ++i) {
        const double tau = 0.05 + 0.025 * i;
        c.x.push_back(tau);
        c.y.push_back(std::tanh(3.0 * tau));
    }
    // single curve passes through the origin at tau_c
    const EntanglementCollapseResult single = entanglement_collapse({{12, c}}, 0.2, 0.3);
    bool found_zero = false;
    for (std::size_t i = 0; i < single.shifted[0].x.size(); ++i)
        if (std::abs(single.shifted[0].x[i]) <= 1e-12)
            found_zero = std::abs(single.shifted[0].y[i]) <= 1e-12;
    CHECK(found_zero);
    CHECK_FALSE(single.interpolated);

    // mu = 0 leaves the abscissa independent of L
    const EntanglementCollapseResult mu0 = entanglement_collapse({{12, c}, {20, c}}, 0.2, 0.0);
    for (std::size_t i = 0; i < mu0.shifted[0].x.size(); ++i)
        CHECK(mu0.shifted[0].x[i] == doctest::Approx(mu0.shifted[1].x[i]).epsilon(1e-15));

    // off-grid tau_c is interpolated and flagged
    const EntanglementCollapseResult off = entanglement_collapse({{12, c}}, 0.21, 0.3);
    CHECK(off.interpolated);

    CHECK_THROWS_AS(entanglement_collapse({{12, c}}, 0.9, 0.3), std::invalid_argument);
}

TEST_CASE("log decay fit") {
    std::vector<double> r;
    for (int n = 1; n <= 500; ++n) r.push_back(1.0 - 0.01 * std::log(static_cast<double>(n)));
    const LogFitResult fit = log_decay_fit(r, 10, 500);
    CHECK(fit.b == doctest::Approx(0.01).epsilon(1e-10));
    CHECK(fit.a == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> cst(300, 0.42);
    const LogFitResult fc = log_decay_fit(cst, 10, 300);
    CHECK(std::abs(fc.b) <= 1e-14);
    CHECK(fc.r_squared == 1.0);

    std::vector<double> bad = {0.5, 0.0, -0.1, 0.2};
    CHECK_THROWS_AS(log_decay_fit(bad, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(log_decay_fit(cst, 200, 100), std::invalid_argument);
}
