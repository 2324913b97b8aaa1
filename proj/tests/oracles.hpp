// Test-only reference implementations. Everything here goes through the dense
// matrix or brute-force definitions, independent of the code paths under test.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mipt/model.hpp"

namespace oracle {

using mipt::Complex;
using mipt::ModelParams;
using mipt::StateVector;

inline StateVector random_state(int L, std::mt19937_64& rng) {
    StateVector v(mipt::state_dimension(L));
    for (auto& a : v) {
        const double re = static_cast<double>(rng()) / static_cast<double>(UINT64_MAX) - 0.5;
        const double im = static_cast<double>(rng()) / static_cast<double>(UINT64_MAX) - 0.5;
        a = Complex(re, im);
    }
    const double inv = 1.0 / std::sqrt(mipt::squared_norm(v));
    for (auto& a : v) a *= inv;
    return v;
}

// exp(-i H tau) v by full diagonalization of the dense Hamiltonian
inline StateVector dense_evolve(const ModelParams& params, const StateVector& v) {
    const Eigen::MatrixXcd H = mipt::build_dense_hamiltonian(params);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    Eigen::Map<const Eigen::VectorXcd> vin(v.data(), static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXcd c = es.eigenvectors().adjoint() * vin;
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c(i) *= std::exp(Complex(0.0, -es.eigenvalues()(i) * params.tau));
    Eigen::VectorXcd res = es.eigenvectors() * c;
    return StateVector(res.data(), res.data() + res.size());
}

inline Complex dense_return_amplitude(const ModelParams& params, int n) {
    StateVector v = mipt::initial_state(params);
    for (int i = 0; i < n; ++i) v = dense_evolve(params, v);
    return v[0];
}

// eigenvalues of the reduced density matrix of the low-`ell`-bits block,
// built entry by entry from the state (descending)
inline std::vector<double> rdm_spectrum(const StateVector& psi, int L, int ell) {
    const Eigen::Index da = Eigen::Index{1} << ell;
    const Eigen::Index db = Eigen::Index{1} << (L - ell);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index ap = 0; ap < da; ++ap)
            for (Eigen::Index b = 0; b < db; ++b)
                rho(a, ap) += psi[static_cast<std::size_t>(a + (b << ell))] *
                              std::conj(psi[static_cast<std::size_t>(ap + (b << ell))]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    std::vector<double> out;
    for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i)
        out.push_back(es.eigenvalues()(i));
    return out;
}

inline double max_abs_diff(const StateVector& a, const StateVector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// |00..0> + |11..1> over L sites, normalized
inline StateVector ghz_state(int L) {
    StateVector v(mipt::state_dimension(L), Complex(0, 0));
    const double a = 1.0 / std::sqrt(2.0);
    v[0] = a;
    v[v.size() - 1] = a;
    return v;
}

inline StateVector bell_state() { return ghz_state(2); }

// single-excitation W state over L sites
inline StateVector w_state(int L) {
    StateVector v(mipt::state_dimension(L), Complex(0, 0));
    const double a = 1.0 / std::sqrt(static_cast<double>(L));
    for (int j = 0; j < L; ++j) v[std::size_t{1} << j] = a;
    return v;
}

inline StateVector basis_state(int L, std::uint64_t index) {
    StateVector v(mipt::state_dimension(L), Complex(0, 0));
    v[index] = 1.0;
    return v;
}

}  // namespace oracle
