#include "mipt/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "mipt/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mipt {

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::Statevector: return "statevector";
        case Engine::FreeFermion: return "freefermion";
        case Engine::Both: return "both";
    }
    return "?";
}

namespace {

void check_grid(const SweepGrid& grid) {
    if (grid.Ls.empty()) throw std::invalid_argument("sweep: empty L list");
    if (grid.taus.empty()) throw std::invalid_argument("sweep: empty tau grid");
    for (std::size_t i = 1; i < grid.taus.size(); ++i)
        if (!(grid.taus[i] > grid.taus[i - 1]))
            throw std::invalid_argument("sweep: tau grid must be strictly increasing");
    if (grid.n_steps < 1) throw std::invalid_argument("sweep: n_steps must be >= 1");
}

SurvivalCurve run_point(Engine engine, int L, double h, double tau, int n_steps,
                        const EngineOptions& opts) {
    SurvivalCurve curve;
    curve.engine = engine_name(engine);
    curve.L = L;
    curve.h = h;
    curve.tau = tau;
    const ModelParams params(L, h, tau);
    if (engine == Engine::Statevector) {
        ProtocolOptions popts;
        popts.plan_tolerance = opts.plan_tolerance;
        popts.tighten_bounds = opts.tighten_bounds;
        popts.max_L = opts.max_L_statevector;
        ProtocolRun run = run_protocol(params, n_steps, popts);
        curve.R = std::move(run.survival);
        curve.p = std::move(run.first_detection);
    } else {
        FreeFermionOptions fopts;
        fopts.precision = opts.precision;
        fopts.max_steps = opts.max_steps_freefermion;
        FreeFermionRun run = run_freefermion(params, n_steps, fopts);
        curve.R = std::move(run.survival);
        curve.p = std::move(run.first_detection);
    }
    return curve;
}

}  // namespace

std::vector<SurvivalCurve> run_survival_sweep(const SweepGrid& grid, Engine engine,
                                              const EngineOptions& opts) {
    check_grid(grid);
    std::vector<Engine> engines;
    if (engine == Engine::Both)
        engines = {Engine::Statevector, Engine::FreeFermion};
    else
        engines = {engine};

    struct Point {
        Engine e;
        int L;
        double tau;
    };
    std::vector<Point> points;
    for (Engine e : engines)
        for (int L : grid.Ls)
            for (double tau : grid.taus) points.push_back({e, L, tau});

    std::vector<SurvivalCurve> out(points.size());
    std::exception_ptr first_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (points.size() > 1)
#endif
    for (long long i = 0; i < static_cast<long long>(points.size()); ++i) {
        try {
            const Point& pt = points[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(i)] =
                run_point(pt.e, pt.L, grid.h, pt.tau, grid.n_steps, opts);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

std::vector<TransitionCurve> run_transition_sweep(const SweepGrid& grid, Engine engine,
                                                  const EngineOptions& opts,
                                                  const PlateauConfig& plateau) {
    if (engine == Engine::Both)
        throw std::invalid_argument("run_transition_sweep: pick one engine");
    const std::vector<SurvivalCurve> curves = run_survival_sweep(grid, engine, opts);

    std::vector<TransitionCurve> out;
    out.reserve(grid.Ls.size());
    std::size_t idx = 0;
    for (int L : grid.Ls) {
        TransitionCurve tc;
        tc.L = L;
        tc.h = grid.h;
        for (double tau : grid.taus) {
            const SurvivalCurve& c = curves[idx++];
            const PlateauResult pr = plateau_height(c.R, plateau);
            tc.tau.push_back(tau);
            tc.H.push_back(pr.H);
            tc.window_found.push_back(pr.window_found);
        }
        tc.dH_dtau = two_point_derivative(tc.tau, tc.H);
        tc.peak = peak_location(tc.dH_dtau.x, tc.dH_dtau.slope);
        out.push_back(std::move(tc));
    }
    return out;
}

std::vector<EntanglementPoint> run_entanglement_sweep(const SweepGrid& grid,
                                                      const std::vector<int>& ells,
                                                      const EngineOptions& opts,
                                                      SplitSet splits) {
    check_grid(grid);
    struct Point {
        int L;
        double tau;
    };
    std::vector<Point> points;
    for (int L : grid.Ls)
        for (double tau : grid.taus) points.push_back({L, tau});

    std::vector<EntanglementPoint> out(points.size());
    std::exception_ptr first_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (points.size() > 1)
#endif
    for (long long i = 0; i < static_cast<long long>(points.size()); ++i) {
        try {
            const Point& pt = points[static_cast<std::size_t>(i)];
            EntanglementPoint ep;
            ep.L = pt.L;
            ep.h = grid.h;
            ep.tau = pt.tau;
            ep.ells = ells.empty() ? std::vector<int>{std::max(1, pt.L / 4)} : ells;

            ProtocolOptions popts;
            popts.plan_tolerance = opts.plan_tolerance;
            popts.tighten_bounds = opts.tighten_bounds;
            popts.max_L = opts.max_L_statevector;

            const ModelParams params(pt.L, grid.h, pt.tau);
            double sg_sum = 0.0;
            StateVector scratch;
            auto observer = [&](int n, const StateVector& psi, double r) {
                if (r <= 1e-280) return;  // fully detected, series ends
                scratch = psi;
                const double inv = 1.0 / std::sqrt(r);
                for (auto& a : scratch) a *= inv;
                EntanglementRecord rec;
                rec.n = n;
                for (int ell : ep.ells) rec.S.push_back(entropy(scratch, pt.L, ell));
                rec.G = ggm(scratch, pt.L, splits);
                rec.S_G = r * rec.G;
                sg_sum += rec.S_G;
                rec.G_cum = sg_sum / n;
                ep.records.push_back(std::move(rec));
            };
            run_protocol_observed(params, grid.n_steps, popts, observer);
            out[static_cast<std::size_t>(i)] = std::move(ep);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

double entropy_snapshot(const ModelParams& params, int n_snapshot, int ell,
                        const EngineOptions& opts) {
    ProtocolOptions popts;
    popts.plan_tolerance = opts.plan_tolerance;
    popts.tighten_bounds = opts.tighten_bounds;
    popts.max_L = opts.max_L_statevector;
    double result = -1.0;
    auto observer = [&](int n, const StateVector& psi, double r) {
        if (n != n_snapshot) return;
        if (r <= 1e-280)
            throw precision_error("entropy_snapshot: state fully detected before snapshot", n);
        StateVector copy = psi;
        const double inv = 1.0 / std::sqrt(r);
        for (auto& a : copy) a *= inv;
        result = entropy(copy, params.L, ell);
    };
    run_protocol_observed(params, n_snapshot, popts, observer);
    return result;
}

std::vector<std::pair<int, CurveXY>> plateau_curves(const std::vector<TransitionCurve>& runs) {
    std::vector<std::pair<int, CurveXY>> out;
    out.reserve(runs.size());
    for (const TransitionCurve& tc : runs) out.emplace_back(tc.L, CurveXY{tc.tau, tc.H});
    return out;
}

}  // namespace mipt
