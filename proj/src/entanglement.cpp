#include "mipt/entanglement.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace mipt {

namespace {

constexpr double kEigenvalueFloor = 1e-14;

void check_state(const StateVector& psi, int L) {
    if (L < 2) throw std::invalid_argument("entanglement: L must be >= 2");
    if (psi.size() != (std::uint64_t{1} << L))
        throw std::invalid_argument("entanglement: state length != 2^L");
    const double n2 = squared_norm(psi);
    if (n2 < 1e-12) throw std::invalid_argument("entanglement: zero-norm state");
    if (std::abs(n2 - 1.0) > 1e-6)
        throw std::invalid_argument("entanglement: state must be normalized (|norm^2 - 1| = " +
                                    std::to_string(std::abs(n2 - 1.0)) + ")");
}

std::vector<double> squared_singular_values(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    std::vector<double> out(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        out[static_cast<std::size_t>(i)] = sv(i) * sv(i);
    return out;  // Eigen returns singular values in decreasing order
}

}  // namespace

std::vector<double> schmidt_spectrum(const StateVector& psi, int L, int ell) {
    check_state(psi, L);
    if (ell < 1 || ell >= L)
        throw std::invalid_argument("schmidt_spectrum: ell must be in [1, L-1]");
    // Block = low ell bits, so the amplitude array is already the column-major
    // 2^ell x 2^(L-ell) matrix of the split.
    const Eigen::Index rows = Eigen::Index{1} << ell;
    const Eigen::Index cols = Eigen::Index{1} << (L - ell);
    Eigen::Map<const Eigen::MatrixXcd> m(psi.data(), rows, cols);
    return squared_singular_values(m);
}

std::vector<double> schmidt_spectrum_mask(const StateVector& psi, int L,
                                          std::uint64_t block_mask) {
    check_state(psi, L);
    const std::uint64_t full = (std::uint64_t{1} << L) - 1;
    block_mask &= full;
    const int na = std::popcount(block_mask);
    if (na < 1 || na >= L)
        throw std::invalid_argument("schmidt_spectrum_mask: block must be a proper subset");

    Eigen::MatrixXcd m(Eigen::Index{1} << na, Eigen::Index{1} << (L - na));
    for (std::uint64_t i = 0; i <= full; ++i) {
        std::uint64_t a = 0, b = 0;
        int pa = 0, pb = 0;
        for (int bit = 0; bit < L; ++bit) {
            const std::uint64_t v = (i >> bit) & 1u;
            if ((block_mask >> bit) & 1u)
                a |= v << pa++;
            else
                b |= v << pb++;
        }
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = psi[i];
    }
    return squared_singular_values(m);
}

double entropy(const StateVector& psi, int L, int ell) {
    const auto lam = schmidt_spectrum(psi, L, ell);
    double s = 0.0;
    for (double l2 : lam)
        if (l2 > kEigenvalueFloor) s -= l2 * std::log(l2);
    return s;
}

double ggm(const StateVector& psi, int L, SplitSet splits) {
    check_state(psi, L);
    double max_l2 = 0.0;
    if (splits == SplitSet::ContiguousPrefix) {
        for (int ell = 1; ell <= L / 2; ++ell) {
            const auto lam = schmidt_spectrum(psi, L, ell);
            if (!lam.empty() && lam.front() > max_l2) max_l2 = lam.front();
        }
    } else {
        if (L > 12)
            throw std::invalid_argument("ggm: AllBipartitions is exponential, guarded to L <= 12");
        const std::uint64_t full = (std::uint64_t{1} << L) - 1;
        // fixing site 1 in the block enumerates each unordered bipartition once
        for (std::uint64_t mask = 1; mask < full; mask += 2) {
            const auto lam = schmidt_spectrum_mask(psi, L, mask);
            if (!lam.empty() && lam.front() > max_l2) max_l2 = lam.front();
        }
    }
    return 1.0 - max_l2;
}

std::vector<EntanglementRecord> sag_series(const ProtocolRun& run, const std::vector<int>& ells,
                                           SplitSet splits) {
    if (run.states.empty())
        throw std::invalid_argument("sag_series: protocol run did not retain states");
    const int L = run.params.L;
    for (int ell : ells)
        if (ell < 1 || ell >= L) throw std::invalid_argument("sag_series: ell out of range");

    std::vector<EntanglementRecord> out;
    out.reserve(run.states.size());
    double sg_sum = 0.0;
    for (std::size_t idx = 0; idx < run.states.size(); ++idx) {
        const StateVector& psi = run.states[idx];
        EntanglementRecord rec;
        rec.n = static_cast<int>(idx) + 1;
        rec.S.reserve(ells.size());
        for (int ell : ells) rec.S.push_back(entropy(psi, L, ell));
        rec.G = ggm(psi, L, splits);
        rec.S_G = run.survival[idx] * rec.G;
        sg_sum += rec.S_G;
        rec.G_cum = sg_sum / static_cast<double>(rec.n);
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace mipt
