#pragma once

#include <span>
#include <utility>
#include <vector>

namespace mipt {

/// First-plateau detector for survival series. A window of `window` values
/// starting at step n >= n_min qualifies when every consecutive change is
/// below `delta`; H is the window mean. With no qualifying window, H falls
/// back to R at the step of smallest |dR| and the result is flagged.
///
/// The defaults suit the large-L / small-tau sweeps where curves flatten to
/// ~1e-4 per step. Desk-scale chains (L <= 28) relax for many steps with
/// |dR| of a few 1e-3, so sweeps there want wider tolerances, e.g.
/// {n_min 1, window 2, delta 2e-2}; all three knobs are exposed on the CLI.
struct PlateauConfig {
    int n_min = 2;
    int window = 5;
    double delta = 1e-3;
};

struct PlateauResult {
    double H = 0.0;
    bool window_found = false;
    int n_start = 0;  // 1-based step: window start, or the min-|dR| step of the fallback
};

PlateauResult plateau_height(std::span<const double> survival, const PlateauConfig& cfg = {});

/// Two-point slopes (y_{i+1}-y_i)/(x_{i+1}-x_i) reported at interval midpoints.
struct DerivativeSeries {
    std::vector<double> x;
    std::vector<double> slope;
};
DerivativeSeries two_point_derivative(std::span<const double> xs, std::span<const double> ys);

/// Argmax of a slope curve. Ties break toward smaller x (the transition
/// recedes toward zero with system size). Boundary peaks are flagged.
/// Optional parabolic refinement fits the three points around the discrete
/// peak; off by default so the answer stays on the grid.
struct PeakResult {
    double x_peak = 0.0;
    double slope_peak = 0.0;
    bool boundary = false;
};
PeakResult peak_location(std::span<const double> xs, std::span<const double> slopes,
                         bool parabolic_refine = false);

struct CurveXY {
    std::vector<double> x;
    std::vector<double> y;
};

/// dH/dsigma curves on the scaled axis sigma = tau sqrt(L), resampled onto a
/// common grid over the overlap of all curves, with per-curve peak positions,
/// the largest pairwise relative peak spread and a collapse-quality scalar
/// (mean pairwise mean-squared distance of the resampled curves).
struct SigmaCollapseResult {
    std::vector<int> L;
    std::vector<CurveXY> dH_dsigma;       // raw midpoint curves per L
    std::vector<CurveXY> resampled;       // on the common grid
    std::vector<double> sigma_peak;       // per L
    double peak_spread = 0.0;             // max pairwise |a-b| / mean(a,b)
    double quality = 0.0;
};
SigmaCollapseResult sigma_collapse(const std::vector<std::pair<int, CurveXY>>& H_of_tau_by_L,
                                   int resample_points = 101);

/// Shifted entanglement curves S(tau) - S(tau_c) against (tau - tau_c) L^mu.
/// S(tau_c) is linearly interpolated when tau_c is off the grid (flagged).
struct EntanglementCollapseResult {
    std::vector<int> L;
    std::vector<CurveXY> shifted;
    double quality = 0.0;
    bool interpolated = false;
};
EntanglementCollapseResult entanglement_collapse(
    const std::vector<std::pair<int, CurveXY>>& S_of_tau_by_L, double tau_c, double mu,
    int resample_points = 101);

/// Least-squares fit R_n ~ a - b ln n on steps [n_lo, n_hi] (1-based,
/// inclusive). r_squared is 1 - SS_res/SS_tot, defined as 1 for constant data.
struct LogFitResult {
    double a = 0.0;
    double b = 0.0;
    double r_squared = 0.0;
};
LogFitResult log_decay_fit(std::span<const double> survival, int n_lo, int n_hi);

}  // namespace mipt
