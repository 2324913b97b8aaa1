#include "mipt/validate.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "mipt/entanglement.hpp"
#include "mipt/freefermion.hpp"
#include "mipt/io.hpp"
#include "mipt/model.hpp"
#include "mipt/propagator.hpp"
#include "mipt/protocol.hpp"

namespace mipt {

namespace {

StateVector random_state(int L, std::mt19937_64& rng) {
    StateVector v(state_dimension(L));
    for (auto& a : v) {
        const double re = static_cast<double>(rng()) / static_cast<double>(UINT64_MAX) - 0.5;
        const double im = static_cast<double>(rng()) / static_cast<double>(UINT64_MAX) - 0.5;
        a = Complex(re, im);
    }
    const double inv = 1.0 / std::sqrt(squared_norm(v));
    for (auto& a : v) a *= inv;
    return v;
}

StateVector dense_evolve(const ModelParams& params, const StateVector& v) {
    const Eigen::MatrixXcd H = build_dense_hamiltonian(params);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    const Eigen::VectorXd w = es.eigenvalues();
    const Eigen::MatrixXcd& V = es.eigenvectors();
    Eigen::Map<const Eigen::VectorXcd> vin(v.data(), static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXcd coeff = V.adjoint() * vin;
    for (Eigen::Index i = 0; i < coeff.size(); ++i)
        coeff(i) *= std::exp(Complex(0.0, -w(i) * params.tau));
    const Eigen::VectorXcd res = V * coeff;
    return StateVector(res.data(), res.data() + res.size());
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

ValidationReport run_validation(std::uint64_t seed) {
    ValidationReport report;
    std::mt19937_64 rng(seed);
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        report.checks.push_back({name, pass, detail});
    };

    const std::vector<int> Ls = {4, 6, 8, 10};
    const std::vector<double> hs = {0.5, 1.5};
    const std::vector<double> taus = {0.05, 0.2, 0.5};
    const int n_steps = 100;

    // cross-engine survival equality + series invariants on the same grid
    double worst_cross = 0.0, worst_mono = 0.0, worst_closure = 0.0, worst_fmag = 0.0;
    bool f0_exact = true;
    try {
        for (int L : Ls)
            for (double h : hs)
                for (double tau : taus) {
                    const ModelParams params(L, h, tau);
                    const ProtocolRun sv = run_protocol(params, n_steps);
                    const FreeFermionRun ff = run_freefermion(params, n_steps);
                    double prev = 1.0;
                    double psum = 0.0;
                    for (int n = 0; n < n_steps; ++n) {
                        worst_cross = std::max(
                            worst_cross, std::abs(sv.survival[static_cast<std::size_t>(n)] -
                                                  ff.survival[static_cast<std::size_t>(n)]));
                        worst_mono =
                            std::max(worst_mono, sv.survival[static_cast<std::size_t>(n)] - prev);
                        prev = sv.survival[static_cast<std::size_t>(n)];
                        psum += sv.first_detection[static_cast<std::size_t>(n)];
                        worst_closure = std::max(
                            worst_closure,
                            std::abs(1.0 - sv.survival[static_cast<std::size_t>(n)] - psum));
                    }
                    f0_exact = f0_exact && ff.series.f[0] == Complex(1.0, 0.0);
                    for (const Complex& fj : ff.series.f)
                        worst_fmag = std::max(worst_fmag, std::abs(fj));
                }
        add("cross_engine_survival", worst_cross <= 1e-8,
            "max |R_sv - R_ff| = " + format_double(worst_cross));
        add("survival_monotone", worst_mono <= 1e-12,
            "max increase = " + format_double(worst_mono));
        add("probability_closure", worst_closure <= 1e-12,
            "max |1 - R_n - sum p| = " + format_double(worst_closure));
        add("overlap_bounds", f0_exact && worst_fmag <= 1.0 + 1e-12,
            "f_0 exact, max |f_j| = " + format_double(worst_fmag));
    } catch (const std::exception& e) {
        add("cross_engine_survival", false, std::string("exception: ") + e.what());
    }

    // propagator vs dense exponential
    try {
        double worst = 0.0;
        for (double tau : {0.1, 1.0}) {
            const ModelParams params(8, 0.5, tau);
            const StateVector v = random_state(8, rng);
            const ChebyshevPlan plan = make_plan(params, 1e-12);
            worst = std::max(worst, max_abs_diff(evolve(plan, v), dense_evolve(params, v)));
        }
        add("propagator_dense_oracle", worst <= 1e-10, "max error = " + format_double(worst));
    } catch (const std::exception& e) {
        add("propagator_dense_oracle", false, std::string("exception: ") + e.what());
    }

    // closed-form anchors of the recursion
    try {
        const ModelParams params(8, 0.5, 0.2);
        const FreeFermionRun run = run_freefermion(params, 3);
        const Complex f1 = run.series.f[1], f2 = run.series.f[2];
        const Complex c1 = run.series.c[1], c2 = run.series.c[2];
        const double e1 = std::abs(c1 + f1);
        const double e2 = std::abs(c2 - (f1 * f1 - f2));
        const double e3 = std::abs(run.survival[0] - (1.0 - std::norm(f1)));
        add("closed_form_anchors", e1 <= 1e-15 && e2 <= 1e-14 && e3 <= 1e-12,
            "|c1+f1| = " + format_double(e1) + ", |c2-(f1^2-f2)| = " + format_double(e2) +
                ", |R1-(1-|f1|^2)| = " + format_double(e3));
    } catch (const std::exception& e) {
        add("closed_form_anchors", false, std::string("exception: ") + e.what());
    }

    // projection orthogonality: amplitude on |I> is exactly zero
    try {
        const ModelParams params(8, 1.5, 0.3);
        bool exact = true;
        ProtocolOptions opts;
        run_protocol_observed(params, 10, opts, [&](int, const StateVector& psi, double) {
            exact = exact && psi[0] == Complex(0.0, 0.0);
        });
        add("projection_orthogonality", exact, exact ? "amp(I) == 0 every step" : "nonzero residue");
    } catch (const std::exception& e) {
        add("projection_orthogonality", false, std::string("exception: ") + e.what());
    }

    // entanglement invariants on a mid-run protocol state
    try {
        const ModelParams params(8, 0.5, 0.3);
        ProtocolOptions opts;
        opts.keep = KeepStates::Normalized;
        const ProtocolRun run = run_protocol(params, 6, opts);
        const StateVector& psi = run.states.back();
        double worst_sym = 0.0;
        for (int ell = 1; ell < params.L; ++ell)
            worst_sym = std::max(worst_sym, std::abs(entropy(psi, params.L, ell) -
                                                     entropy(psi, params.L, params.L - ell)));
        const double g = ggm(psi, params.L);
        const auto recs = sag_series(run, {2});
        double worst_dom = 0.0;
        for (const auto& r : recs)
            worst_dom = std::max(worst_dom,
                                 r.S_G - run.survival[static_cast<std::size_t>(r.n - 1)]);
        add("entanglement_invariants",
            worst_sym <= 1e-9 && g >= 0.0 && g <= 0.5 + 1e-12 && worst_dom <= 1e-12,
            "max |S(l)-S(L-l)| = " + format_double(worst_sym) + ", G = " + format_double(g) +
                ", max (S_G - R_n) = " + format_double(worst_dom));
    } catch (const std::exception& e) {
        add("entanglement_invariants", false, std::string("exception: ") + e.what());
    }

    report.all_pass = true;
    for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
    return report;
}

std::string report_to_json(const ValidationReport& report) {
    nlohmann::json j;
    j["all_pass"] = report.all_pass;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = std::move(checks);
    return j.dump(2) + "\n";
}

}  // namespace mipt
