#pragma once

#include <complex>
#include <vector>

#include "mipt/model.hpp"

namespace mipt {

/// H*v without materializing H. Per basis index: diagonal -h*(L - 2*popcount),
/// plus -1 times the amplitude at each two-bit bond flip. This is the
/// performance-critical kernel; it parallelizes over disjoint index ranges.
StateVector apply_hamiltonian(const ModelParams& params, const StateVector& v);
void apply_hamiltonian(const ModelParams& params, const StateVector& v, StateVector& out);

/// Expansion of exp(-i H tau) in Chebyshev polynomials of the rescaled
/// Hamiltonian (H - center)/half_width, with Bessel-function coefficients
/// c_m = (2 - delta_m0) (-i)^m J_m(half_width * tau). The plan is built once
/// per (params, tolerance) and reused across every step of a run.
struct ChebyshevPlan {
    ModelParams params;
    double e_min = 0.0;
    double e_max = 0.0;
    int order = 0;
    std::vector<Complex> coeffs;  // size order + 1
    Complex phase{1.0, 0.0};      // exp(-i * center * tau)

    double half_width() const { return 0.5 * (e_max - e_min); }
    double center() const { return 0.5 * (e_max + e_min); }
};

/// Crude spectral bounds +-L(1+h) are always valid. With tighten_bounds the
/// half-width is estimated by power iteration and padded; that is purely a
/// performance knob (fewer expansion terms), never a correctness one.
ChebyshevPlan make_plan(const ModelParams& params, double tolerance = 1e-12,
                        bool tighten_bounds = false);

/// exp(-i H tau) * v via the three-term Chebyshev recurrence.
StateVector evolve(const ChebyshevPlan& plan, const StateVector& v);

/// Power-iteration estimate of the spectral radius of H (deterministic seed).
double estimate_spectral_radius(const ModelParams& params, int max_iters = 200,
                                double rel_tol = 1e-4);

}  // namespace mipt
