#pragma once

#include <cstdint>
#include <vector>

#include "mipt/model.hpp"
#include "mipt/protocol.hpp"

namespace mipt {

/// Bipartition blocks are contiguous prefixes {sites 1..ell}, i.e. the low
/// ell bits of the basis index. Translation invariance of H and |I> makes the
/// starting site immaterial.
///
/// Which splits the GGM maximizes over. The closed form in the literature
/// ranges over all bipartitions; the ell-indexed form suggests contiguous
/// prefixes. Exposed as a parameter; contiguous is the default. AllBipartitions
/// enumerates every subset (guarded to small L, used by tests).
enum class SplitSet { ContiguousPrefix, AllBipartitions };

/// Squared Schmidt coefficients of the ell : L-ell split, descending.
/// psi must be normalized (protocol states divided by sqrt(R_n) first).
std::vector<double> schmidt_spectrum(const StateVector& psi, int L, int ell);

/// Same, for an arbitrary site subset given as a bit mask.
std::vector<double> schmidt_spectrum_mask(const StateVector& psi, int L, std::uint64_t block_mask);

/// Von Neumann entropy of the split, in nats. Squared coefficients below
/// 1e-14 are dropped (0 ln 0 := 0).
double entropy(const StateVector& psi, int L, int ell);

/// Generalized geometric measure G = 1 - max over splits of the largest
/// squared Schmidt coefficient.
double ggm(const StateVector& psi, int L, SplitSet splits = SplitSet::ContiguousPrefix);

struct EntanglementRecord {
    int n = 0;
    std::vector<double> S;  // one entry per requested ell
    double G = 0.0;
    double S_G = 0.0;    // survival-weighted GGM, R_n * G(n)
    double G_cum = 0.0;  // cumulative average of S_G over steps 1..n
};

/// Per-step entanglement data from a protocol run that retained states.
/// Stops at steps where the state was fully detected (R_n = 0).
std::vector<EntanglementRecord> sag_series(const ProtocolRun& run,
                                           const std::vector<int>& ells,
                                           SplitSet splits = SplitSet::ContiguousPrefix);

}  // namespace mipt
