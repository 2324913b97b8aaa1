#include <doctest.h>

#include <cmath>

#include "mipt/analysis.hpp"
#include "mipt/errors.hpp"
#include "mipt/freefermion.hpp"
#include "mipt/protocol.hpp"
#include "oracles.hpp"

using namespace mipt;

TEST_CASE("tau = 0: the unchanged state is detected with certainty") {
    const ModelParams params(4, 0.5, 0.0);
    const ChebyshevPlan plan = make_plan(params, 1e-12);
    const StateVector after = measurement_step(plan, initial_state(params));
    CHECK(squared_norm(after) == 0.0);

    const ProtocolRun run = run_protocol(params, 5);
    for (double r : run.survival) CHECK(r == 0.0);
    CHECK(run.first_detection[0] == 1.0);
    for (std::size_t i = 1; i < run.first_detection.size(); ++i)
        CHECK(run.first_detection[i] == 0.0);
}

TEST_CASE("one step: R_1 = 1 - |f_1|^2") {
    const ModelParams params(6, 0.8, 0.35);
    const Complex f1 = oracle::dense_return_amplitude(params, 1);
    const ProtocolRun run = run_protocol(params, 1);
    CHECK(run.survival[0] == doctest::Approx(1.0 - std::norm(f1)).epsilon(1e-12));
}

TEST_CASE("L=4, h=0, tau=0.3 closed form") {
    const double tau = 0.3;
    const ModelParams params(4, 0.0, tau);
    const double f1 = 1.0 - std::pow(std::sin(2.0 * tau), 2) / 2.0;  // Gamma = 0 mode product
    const double expected = 1.0 - f1 * f1;
    const ProtocolRun run = run_protocol(params, 1);
    CHECK(run.survival[0] == doctest::Approx(expected).epsilon(1e-10));
    const StateVector psi1 = oracle::dense_evolve(params, initial_state(params));
    const double r1_dense = 1.0 - std::norm(psi1[0]);
    CHECK(run.survival[0] == doctest::Approx(r1_dense).epsilon(1e-10));
}

TEST_CASE("projection leaves exactly zero amplitude on |I>") {
    const ModelParams params(6, 1.5, 0.4);
    run_protocol_observed(params, 8, {}, [](int, const StateVector& psi, double) {
        CHECK(psi[0] == Complex(0.0, 0.0));
    });
}

TEST_CASE("series invariants and engine equivalence on the small-L grid") {
    for (const int L : {4, 6, 8}) {
        for (const double h : {0.5, 1.5}) {
            for (const double tau : {0.05, 0.2, 0.5}) {
                const ModelParams params(L, h, tau);
                const ProtocolRun sv = run_protocol(params, 100);
                const auto ff = survival_large_L(params, 100);

                double prev = 1.0, psum = 0.0, worst = 0.0;
                for (int n = 0; n < 100; ++n) {
                    const double r = sv.survival[static_cast<std::size_t>(n)];
                    CHECK(r >= 0.0);
                    CHECK(r <= 1.0 + 1e-12);
                    CHECK(r <= prev + 1e-12);
                    psum += sv.first_detection[static_cast<std::size_t>(n)];
                    CHECK(std::abs(1.0 - r - psum) <= 1e-12);
                    prev = r;
                    worst = std::max(worst, std::abs(r - ff[static_cast<std::size_t>(n)]));
                }
                CHECK(worst <= 1e-8);
            }
        }
    }
}

TEST_CASE("high-tau curves saturate near one, more so with size") {
    const PlateauConfig knobs{1, 2, 2e-2};
    // desk scale: survival starts at ~1 and the first plateau rises with L
    double prev_h = 0.0;
    for (const int L : {16, 20}) {
        const ModelParams params(L, 0.5, 0.8);
        const ProtocolRun run = run_protocol(params, 12);
        CHECK(run.survival[0] >= 0.99);
        const PlateauResult pr = plateau_height(run.survival, knobs);
        CHECK(pr.H >= 0.75);
        CHECK(pr.H > prev_h);
        prev_h = pr.H;
    }
    // at the chain size of the high-tau figure the plateau sits near one
    const auto r28 = survival_large_L(ModelParams(28, 0.5, 0.8), 12);
    CHECK(plateau_height(r28, knobs).H >= 0.95);
}

TEST_CASE("state-vector cap") {
    ProtocolOptions opts;
    opts.max_L = 10;
    CHECK_THROWS_AS(run_protocol(ModelParams(12, 0.5, 0.2), 3, opts), std::invalid_argument);
}

TEST_CASE("kept states are normalized") {
    const ModelParams params(6, 0.5, 0.3);
    ProtocolOptions opts;
    opts.keep = KeepStates::Normalized;
    const ProtocolRun run = run_protocol(params, 10, opts);
    REQUIRE(run.states.size() == 10);
    for (const auto& s : run.states)
        CHECK(std::abs(squared_norm(s) - 1.0) <= 1e-12);
}
