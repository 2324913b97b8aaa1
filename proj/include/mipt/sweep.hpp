#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mipt/analysis.hpp"
#include "mipt/entanglement.hpp"
#include "mipt/freefermion.hpp"
#include "mipt/model.hpp"
#include "mipt/protocol.hpp"

namespace mipt {

enum class Engine { Statevector, FreeFermion, Both };

std::string engine_name(Engine e);

struct EngineOptions {
    double plan_tolerance = 1e-12;
    bool tighten_bounds = false;
    int max_L_statevector = 22;
    Precision precision = Precision::Compensated;
    int max_steps_freefermion = 10000;
};

struct SweepGrid {
    std::vector<int> Ls;
    double h = 0.5;
    std::vector<double> taus;
    int n_steps = 100;
};

/// One survival series per (engine, L, tau) grid point. Points run on a
/// worker pool; results come back in deterministic grid order regardless of
/// scheduling.
struct SurvivalCurve {
    std::string engine;
    int L = 0;
    double h = 0.0;
    double tau = 0.0;
    std::vector<double> R;
    std::vector<double> p;
};
std::vector<SurvivalCurve> run_survival_sweep(const SweepGrid& grid, Engine engine,
                                              const EngineOptions& opts);

/// Plateau heights, two-point derivatives and the dH/dtau peak per L.
struct TransitionCurve {
    int L = 0;
    double h = 0.0;
    std::vector<double> tau;
    std::vector<double> H;
    std::vector<bool> window_found;
    DerivativeSeries dH_dtau;
    PeakResult peak;
};
std::vector<TransitionCurve> run_transition_sweep(const SweepGrid& grid, Engine engine,
                                                  const EngineOptions& opts,
                                                  const PlateauConfig& plateau);

/// Per-step entanglement records over a (L, tau) grid, state-vector engine.
/// States are normalized and measured step by step; nothing is retained.
struct EntanglementPoint {
    int L = 0;
    double h = 0.0;
    double tau = 0.0;
    std::vector<int> ells;
    std::vector<EntanglementRecord> records;
};
std::vector<EntanglementPoint> run_entanglement_sweep(const SweepGrid& grid,
                                                      const std::vector<int>& ells,
                                                      const EngineOptions& opts,
                                                      SplitSet splits = SplitSet::ContiguousPrefix);

/// S(ell) on the normalized state after n_snapshot steps.
double entropy_snapshot(const ModelParams& params, int n_snapshot, int ell,
                        const EngineOptions& opts);

/// H(tau) curves keyed by L, ready for sigma_collapse / entanglement_collapse.
std::vector<std::pair<int, CurveXY>> plateau_curves(const std::vector<TransitionCurve>& runs);

}  // namespace mipt
