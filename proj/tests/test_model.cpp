#include <doctest.h>

#include <stdexcept>

#include <bit>
#include <cmath>
#include <set>

#include "mipt/freefermion.hpp"
#include "mipt/model.hpp"
#include "oracles.hpp"

using namespace mipt;

TEST_CASE("params validation") {
    CHECK_THROWS_AS(ModelParams(3, 0.5, 0.1), std::invalid_argument);  // odd
    CHECK_THROWS_AS(ModelParams(2, 0.5, 0.1), std::invalid_argument);  // periodic bond doubled
    CHECK_THROWS_AS(ModelParams(4, -0.1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(4, 0.5, -0.1), std::invalid_argument);
    CHECK_NOTHROW(ModelParams(4, 0.0, 0.0));  // tau = 0 legal for trivial cases
}

TEST_CASE("initial state is |I>") {
    const ModelParams params(4, 0.5, 0.2);
    const StateVector psi = initial_state(params);
    CHECK(psi[0] == Complex(1.0, 0.0));
    for (std::size_t i = 1; i < psi.size(); ++i) CHECK(psi[i] == Complex(0.0, 0.0));
    CHECK(squared_norm(psi) == 1.0);

    // <I| M_z |I> = 1: M_z is diagonal, (1/L)(L - 2 popcount)
    const ModelParams p6(6, 1.0, 0.2);
    const StateVector psi6 = initial_state(p6);
    double mz = 0.0;
    for (std::size_t i = 0; i < psi6.size(); ++i)
        mz += std::norm(psi6[i]) * (p6.L - 2 * std::popcount(i)) / static_cast<double>(p6.L);
    CHECK(mz == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dense H diagonal expectations") {
    const Eigen::MatrixXcd h0 = build_dense_hamiltonian(ModelParams(4, 0.0, 0.1));
    CHECK(h0(0, 0) == Complex(0.0, 0.0));  // no field, x-x term is off-diagonal
    const Eigen::MatrixXcd h1 = build_dense_hamiltonian(ModelParams(4, 0.5, 0.1));
    CHECK(h1(0, 0).real() == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("dense H is real symmetric, exactly") {
    const Eigen::MatrixXcd H = build_dense_hamiltonian(ModelParams(6, 0.7, 0.1));
    for (Eigen::Index i = 0; i < H.rows(); ++i)
        for (Eigen::Index j = 0; j < H.cols(); ++j) {
            CHECK(H(i, j).imag() == 0.0);
            CHECK(H(i, j) == H(j, i));
        }
}

TEST_CASE("dense H commutes with the one-site cyclic shift") {
    const ModelParams params(8, 0.7, 0.1);
    const Eigen::MatrixXcd H = build_dense_hamiltonian(params);
    const std::uint64_t dim = state_dimension(params.L);
    auto shift = [&](std::uint64_t i) {
        return ((i << 1) | (i >> (params.L - 1))) & (dim - 1);
    };
    for (std::uint64_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j)
            CHECK(H(static_cast<Eigen::Index>(shift(i)), static_cast<Eigen::Index>(shift(j))) ==
                  H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
}

TEST_CASE("dense guard rails") {
    CHECK_THROWS_AS(build_dense_hamiltonian(ModelParams(14, 0.5, 0.1)), std::invalid_argument);
}

// Spin-convention lock: the even-parity sector of the dense spectrum must
// contain every sum of +-lambda_k over the k-grid, and its extremes must be
// -+ sum_k lambda_k. A spin-1/2 convention would halve lambda and fail.
TEST_CASE("even-parity sector matches the mode energies") {
    for (const int L : {4, 6}) {
        for (const double h : {0.5, 1.5}) {
            const ModelParams params(L, h, 0.1);
            const Eigen::MatrixXcd H = build_dense_hamiltonian(params);

            std::vector<std::uint64_t> sector;
            for (std::uint64_t i = 0; i < state_dimension(L); ++i)
                if (std::popcount(i) % 2 == 0) sector.push_back(i);
            Eigen::MatrixXcd Hs(sector.size(), sector.size());
            for (std::size_t a = 0; a < sector.size(); ++a)
                for (std::size_t b = 0; b < sector.size(); ++b)
                    Hs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                        H(static_cast<Eigen::Index>(sector[a]),
                          static_cast<Eigen::Index>(sector[b]));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hs);
            const Eigen::VectorXd w = es.eigenvalues();

            const FermionModeSet modes = build_modes(params);
            const int pairs = L / 2;
            double lambda_sum = 0.0;
            for (const auto& m : modes.modes) lambda_sum += m.lambda;

            for (int signs = 0; signs < (1 << pairs); ++signs) {
                double e = 0.0;
                for (int m = 0; m < pairs; ++m)
                    e += ((signs >> m) & 1) ? modes.modes[static_cast<std::size_t>(m)].lambda
                                            : -modes.modes[static_cast<std::size_t>(m)].lambda;
                double best = 1e300;
                for (Eigen::Index i = 0; i < w.size(); ++i)
                    best = std::min(best, std::abs(w(i) - e));
                CHECK(best <= 1e-10);
            }
            CHECK(w(0) == doctest::Approx(-lambda_sum).epsilon(1e-12));
            CHECK(w(w.size() - 1) == doctest::Approx(lambda_sum).epsilon(1e-12));
        }
    }
}
