#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mipt/model.hpp"
#include "mipt/summation.hpp"

namespace mipt {

/// One momentum mode of the fermionized chain. The k-grid is anti-periodic,
/// k = (2m+1)pi/L for m = 0..L/2-1; lambda_k = 2 sqrt(h^2 + 1 + 2h cos k) is
/// the pair energy and cos(2 theta_k) = 2(h + cos k)/lambda_k the Bogoliubov
/// angle entering the return amplitude. Only the even-occupation sector of
/// each (k, -k) pair contributes to dynamics started from |I>.
struct FermionMode {
    double k = 0.0;
    double lambda = 0.0;
    double cos2theta = 0.0;
};

struct FermionModeSet {
    int L = 0;
    double h = 0.0;
    std::vector<FermionMode> modes;  // L/2 entries
};

double mode_lambda(double h, double k);

FermionModeSet build_modes(const ModelParams& params);

/// Return amplitude f_n = <I| exp(-i H tau n) |I>
///                      = prod_k [ cos(lambda_k n tau) + i sin(lambda_k n tau) cos(2 theta_k) ].
/// f_0 = 1 exactly; |f_n| <= 1. Negative n is evaluated as conj(f_|n|).
Complex overlap_f(const FermionModeSet& modes, double tau, std::int64_t n);

/// f_j for j = 0..n_max plus the projection-coefficient seeds c_j = C_0^(j);
/// C_m^(n) = c[n-m] reconstructs every coefficient in the expansion
/// |psi_n> = sum_m C_m^(n) |phi_m>.
struct OverlapSeries {
    std::vector<Complex> f;
    std::vector<Complex> c;
};

std::vector<Complex> build_f_table(const FermionModeSet& modes, double tau, int n_max);

/// c[n+1] = -sum_{m=0}^{n} c[n-m] f[m+1], c[0] = 1. Inner sums run through
/// the selected accumulator (compensated by default).
std::vector<Complex> recursion_coefficients(const std::vector<Complex>& f, int n_max,
                                            Precision precision = Precision::Compensated);

struct FreeFermionOptions {
    Precision precision = Precision::Compensated;
    int max_steps = 10000;
};

/// Survival series R_1..R_n from the coefficient recursion, via incremental
/// update of the Gram double sum R_n = sum_{m1,m2} conj(C_m1) C_m2 f_{m2-m1}.
/// Sentinels reject non-finite values, imaginary residue beyond 1e-9 and
/// range violations beyond 1e-9 (then clamp to [0,1]): precision failures
/// raise, never leak garbage.
std::vector<double> survival_large_L(const ModelParams& params, int n_steps,
                                     const FreeFermionOptions& opts = {});

/// Series variant that also returns f, c and p_n (for the CLI and tests).
struct FreeFermionRun {
    ModelParams params;
    OverlapSeries series;
    std::vector<double> survival;
    std::vector<double> first_detection;
};
FreeFermionRun run_freefermion(const ModelParams& params, int n_steps,
                               const FreeFermionOptions& opts = {});

/// Polar pieces of f_n = rho_n exp(i Phi_n). rho from the log-sum form,
/// Phi accumulated branch-continuously per mode (not principal values), so
/// Phi_n tracks the unwrapped phase and Phi_n ~ mu n for small tau.
struct RhoPhi {
    double rho = 0.0;
    double phi = 0.0;
};
RhoPhi rho_phi(const FermionModeSet& modes, double tau, std::int64_t n);

/// Decay-rate constant of the complementary-question protocol:
/// alpha = -(1/(L tau^2)) sum_k log[1 - (2 sin k sin(lambda_k tau)/lambda_k)^2],
/// on the same k-grid as build_modes. Relates to the return amplitude through
/// exp(-alpha L tau^2) = rho_1^2.
double alpha(const ModelParams& params);

}  // namespace mipt
