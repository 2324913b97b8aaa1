#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace mipt {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

/// Physical configuration of the periodically measured transverse-field
/// Ising chain
///
///   H = -J sum_j s^x_j s^x_{j+1} - Gamma sum_j s^z_j,   s_{L+1} = s_1,
///
/// with Pauli operators (eigenvalues +-1), J fixed to 1 and h = Gamma/J.
/// tau is the duration of one unitary stretch between measurements, in
/// units of hbar/J.
struct ModelParams {
    int L = 4;
    double h = 0.5;
    double tau = 0.2;

    ModelParams() = default;
    ModelParams(int L_, double h_, double tau_) : L(L_), h(h_), tau(tau_) { validate(); }

    // L must be even and >= 4 (L = 2 would double-count the periodic bond).
    // tau = 0 is legal so trivial cases stay testable; protocol runs want tau > 0.
    void validate() const;
};

/// Basis convention: bit j of a basis index is the z-eigenvalue of site j+1,
/// bit value 0 meaning spin up. Index 0 is the all-up state |I>.
inline std::uint64_t state_dimension(int L) { return std::uint64_t{1} << L; }

/// |I> = |00...0>: amplitude 1 at index 0.
StateVector initial_state(const ModelParams& params);

double squared_norm(const StateVector& v);

/// XOR masks of the L periodic bonds; flipping the two bits of mask j applies
/// s^x_j s^x_{j+1} to a basis state.
std::vector<std::uint64_t> bond_masks(int L);

/// Dense H in the computational basis. Real symmetric by construction,
/// returned as a complex matrix for direct use in oracle exponentials.
/// Guarded to L <= 12: this exists for cross-checking the matrix-free kernel
/// and the free-fermion engine, not for production runs.
Eigen::MatrixXcd build_dense_hamiltonian(const ModelParams& params);

}  // namespace mipt
