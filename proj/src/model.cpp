#include "mipt/model.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mipt {

void ModelParams::validate() const {
    if (L < 4) throw std::invalid_argument("ModelParams: L must be >= 4, got " + std::to_string(L));
    if (L % 2 != 0) throw std::invalid_argument("ModelParams: L must be even, got " + std::to_string(L));
    if (!(h >= 0.0) || !std::isfinite(h))
        throw std::invalid_argument("ModelParams: h must be finite and >= 0");
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("ModelParams: tau must be finite and >= 0");
}

StateVector initial_state(const ModelParams& params) {
    params.validate();
    StateVector psi(state_dimension(params.L), Complex(0.0, 0.0));
    psi[0] = Complex(1.0, 0.0);
    return psi;
}

double squared_norm(const StateVector& v) {
    double s = 0.0;
    for (const Complex& a : v) s += std::norm(a);
    return s;
}

std::vector<std::uint64_t> bond_masks(int L) {
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(L));
    for (int j = 0; j < L; ++j)
        masks[static_cast<std::size_t>(j)] =
            (std::uint64_t{1} << j) | (std::uint64_t{1} << ((j + 1) % L));
    return masks;
}

Eigen::MatrixXcd build_dense_hamiltonian(const ModelParams& params) {
    params.validate();
    if (params.L > 12)
        throw std::invalid_argument("build_dense_hamiltonian: L > 12 refused, dense matrix is oracle-scale only");

    const std::uint64_t dim = state_dimension(params.L);
    const auto masks = bond_masks(params.L);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (std::uint64_t i = 0; i < dim; ++i) {
        const int n_down = std::popcount(i);
        H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            -params.h * (params.L - 2 * n_down);
        for (const std::uint64_t m : masks)
            H(static_cast<Eigen::Index>(i ^ m), static_cast<Eigen::Index>(i)) += -1.0;
    }
    return H;
}

}  // namespace mipt
