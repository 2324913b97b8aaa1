#include "mipt/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mipt/errors.hpp"

namespace mipt {

StateVector measurement_step(const ChebyshevPlan& plan, const StateVector& psi) {
    StateVector next = evolve(plan, psi);
    next[0] = Complex(0.0, 0.0);
    return next;
}

ProtocolRun run_protocol_observed(const ModelParams& params, int n_steps,
                                  const ProtocolOptions& opts, const StepObserver& observer) {
    params.validate();
    if (n_steps < 1) throw std::invalid_argument("run_protocol: n_steps must be >= 1");
    if (params.L > opts.max_L)
        throw std::invalid_argument("run_protocol: L = " + std::to_string(params.L) +
                                    " exceeds the state-vector cap " + std::to_string(opts.max_L));

    const ChebyshevPlan plan = make_plan(params, opts.plan_tolerance, opts.tighten_bounds);

    ProtocolRun run;
    run.params = params;
    run.survival.reserve(static_cast<std::size_t>(n_steps));
    run.first_detection.reserve(static_cast<std::size_t>(n_steps));

    StateVector psi = initial_state(params);
    double r_prev = 1.0;
    for (int n = 1; n <= n_steps; ++n) {
        psi = measurement_step(plan, psi);
        const double r = squared_norm(psi);
        if (!std::isfinite(r))
            throw precision_error("run_protocol: non-finite amplitudes", n);
        run.survival.push_back(r);
        run.first_detection.push_back(r_prev - r);
        r_prev = r;
        if (opts.keep == KeepStates::Normalized) {
            if (r > 1e-280) {
                StateVector normalized = psi;
                const double inv = 1.0 / std::sqrt(r);
                for (auto& a : normalized) a *= inv;
                run.states.push_back(std::move(normalized));
            }
            // fully detected: nothing left to normalize, stop retaining
        }
        if (observer) observer(n, psi, r);
    }
    return run;
}

ProtocolRun run_protocol(const ModelParams& params, int n_steps, const ProtocolOptions& opts) {
    return run_protocol_observed(params, n_steps, opts, nullptr);
}

}  // namespace mipt
