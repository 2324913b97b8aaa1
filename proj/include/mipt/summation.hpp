#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace mipt {

/// Accumulator width for the free-fermion recursion sums. The coefficient
/// recursion convolves O(n) unit-scale complex terms per step and the paper's
/// known failure mode is cancellation, so the default compensates.
enum class Precision { Standard, Compensated, Extended };

namespace detail {

struct PlainAcc {
    double s = 0.0;
    void add(double x) { s += x; }
    double hi() const { return s; }
    double lo() const { return 0.0; }
};

// Neumaier variant of Kahan summation: the correction also captures the case
// |x| > |s|.
struct NeumaierAcc {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double hi() const { return s; }
    double lo() const { return c; }
};

// Double-double accumulator (two-sum error-free transforms); ~106-bit
// effective mantissa.
struct DoubleDoubleAcc {
    double s = 0.0;
    double e = 0.0;
    void add(double x) {
        // two_sum(s, x)
        const double t = s + x;
        const double bv = t - s;
        const double err = (s - (t - bv)) + (x - bv);
        s = t;
        e += err;
        // renormalize
        const double t2 = s + e;
        e = e - (t2 - s);
        s = t2;
    }
    double hi() const { return s; }
    double lo() const { return e; }
};

// Accumulate a*b with the product's rounding error recovered via fma, so the
// extended path really carries > 2x53 bits through the dot product.
inline void add_prod(DoubleDoubleAcc& acc, double a, double b) {
    const double p = a * b;
    const double err = std::fma(a, b, -p);
    acc.add(p);
    acc.add(err);
}
inline void add_prod(NeumaierAcc& acc, double a, double b) { acc.add(a * b); }
inline void add_prod(PlainAcc& acc, double a, double b) { acc.add(a * b); }

template <class Acc>
struct ComplexAcc {
    Acc re, im;
    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    // acc += a * b (complex product, component products accumulated separately)
    void add_prod(std::complex<double> a, std::complex<double> b) {
        detail::add_prod(re, a.real(), b.real());
        detail::add_prod(re, -a.imag(), b.imag());
        detail::add_prod(im, a.real(), b.imag());
        detail::add_prod(im, a.imag(), b.real());
    }
    std::complex<double> value() const { return {re.hi() + re.lo(), im.hi() + im.lo()}; }
    std::complex<double> value_hi() const { return {re.hi(), im.hi()}; }
    std::complex<double> value_lo() const { return {re.lo(), im.lo()}; }
};

template <class Acc>
std::complex<double> convolve_chunked(std::span<const std::complex<double>> a,
                                      std::span<const std::complex<double>> b_rev,
                                      std::size_t chunk);

}  // namespace detail

/// sum_{v=0}^{n-1} a[v] * b_rev[v] with n = a.size() = b_rev.size().
/// Evaluated in fixed-size chunks combined in index order, so the result is
/// independent of thread count (chunks may be computed in parallel).
std::complex<double> convolve(std::span<const std::complex<double>> a,
                              std::span<const std::complex<double>> b_rev,
                              Precision mode);

/// Compensated sum of a real range (used by the analysis fits).
double compensated_sum(std::span<const double> xs);

}  // namespace mipt
