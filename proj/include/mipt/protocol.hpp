#pragma once

#include <functional>
#include <vector>

#include "mipt/model.hpp"
#include "mipt/propagator.hpp"

namespace mipt {

enum class KeepStates { None, Normalized };

struct ProtocolOptions {
    double plan_tolerance = 1e-12;
    bool tighten_bounds = false;
    int max_L = 22;  // 2^22 complex amplitudes = 64 MB
    KeepStates keep = KeepStates::None;
};

/// One run of the measurement protocol from |I>. States are unnormalized
/// through the run (squared norm = survival probability); survival[n-1] = R_n
/// and first_detection[n-1] = p_n = R_{n-1} - R_n. When states are kept they
/// are normalized copies |psi_n>/sqrt(R_n) for the entanglement layer;
/// states[n-1] corresponds to step n.
struct ProtocolRun {
    ModelParams params;
    std::vector<double> survival;
    std::vector<double> first_detection;
    std::vector<StateVector> states;
};

/// Evolve for tau, then project out |I>: psi' = exp(-iH tau) psi minus its
/// amplitude on |I>. In this basis that is exactly zeroing amplitude 0, which
/// keeps <I|psi_n> = 0 without rounding residue.
StateVector measurement_step(const ChebyshevPlan& plan, const StateVector& psi);

ProtocolRun run_protocol(const ModelParams& params, int n_steps,
                         const ProtocolOptions& opts = {});

/// Per-step observer variant: observer(n, psi_unnormalized, R_n) is called
/// after each projection. Lets callers compute entanglement snapshots without
/// retaining every state.
using StepObserver = std::function<void(int, const StateVector&, double)>;
ProtocolRun run_protocol_observed(const ModelParams& params, int n_steps,
                                  const ProtocolOptions& opts, const StepObserver& observer);

}  // namespace mipt
