#include "mipt/summation.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mipt {

namespace detail {

constexpr std::size_t kChunk = 4096;

template <class Acc>
std::complex<double> convolve_chunked(std::span<const std::complex<double>> a,
                                      std::span<const std::complex<double>> b_rev,
                                      std::size_t chunk) {
    const std::size_t n = a.size();
    const std::size_t n_chunks = (n + chunk - 1) / chunk;

    if (n_chunks <= 2) {
        ComplexAcc<Acc> acc;
        for (std::size_t v = 0; v < n; ++v) acc.add_prod(a[v], b_rev[v]);
        return acc.value();
    }

    // Per-chunk partials kept as (hi, lo) pairs and merged in chunk order:
    // bit-reproducible for any thread count.
    std::vector<std::complex<double>> hi(n_chunks), lo(n_chunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n_chunks >= 8)
#endif
    for (long long ci = 0; ci < static_cast<long long>(n_chunks); ++ci) {
        const std::size_t begin = static_cast<std::size_t>(ci) * chunk;
        const std::size_t end = begin + chunk < n ? begin + chunk : n;
        ComplexAcc<Acc> acc;
        for (std::size_t v = begin; v < end; ++v) acc.add_prod(a[v], b_rev[v]);
        hi[static_cast<std::size_t>(ci)] = acc.value_hi();
        lo[static_cast<std::size_t>(ci)] = acc.value_lo();
    }
    ComplexAcc<Acc> total;
    for (std::size_t ci = 0; ci < n_chunks; ++ci) {
        total.add(hi[ci]);
        total.add(lo[ci]);
    }
    return total.value();
}

}  // namespace detail

std::complex<double> convolve(std::span<const std::complex<double>> a,
                              std::span<const std::complex<double>> b_rev,
                              Precision mode) {
    switch (mode) {
        case Precision::Standard:
            return detail::convolve_chunked<detail::PlainAcc>(a, b_rev, detail::kChunk);
        case Precision::Extended:
            return detail::convolve_chunked<detail::DoubleDoubleAcc>(a, b_rev, detail::kChunk);
        case Precision::Compensated:
        default:
            return detail::convolve_chunked<detail::NeumaierAcc>(a, b_rev, detail::kChunk);
    }
}

double compensated_sum(std::span<const double> xs) {
    detail::NeumaierAcc acc;
    for (double x : xs) acc.add(x);
    return acc.hi() + acc.lo();
}

}  // namespace mipt
