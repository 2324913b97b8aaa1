#include "mipt/propagator.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mipt {

namespace {

constexpr std::uint64_t kParallelThreshold = std::uint64_t{1} << 14;

// out[i] = scale * (alpha*(H v)[i] + beta*v[i]) + gamma*out[i], acc[i] += coeff*out[i].
// One memory pass covers the Chebyshev recurrence update and the series
// accumulation. gamma is 0 for the T_1 term and -1 afterwards.
void fused_step(const ModelParams& p, const std::uint64_t* masks, const StateVector& v,
                StateVector& out, StateVector& acc, double alpha, double beta, double scale,
                double gamma, Complex coeff) {
    const std::int64_t dim = static_cast<std::int64_t>(state_dimension(p.L));
    const int L = p.L;
    const double h = p.h;
    const Complex* vv = v.data();
    Complex* oo = out.data();
    Complex* aa = acc.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (dim >= static_cast<std::int64_t>(kParallelThreshold))
#endif
    for (std::int64_t i = 0; i < dim; ++i) {
        const std::uint64_t u = static_cast<std::uint64_t>(i);
        const double diag = -h * (L - 2 * std::popcount(u));
        Complex hv = diag * vv[i];
        for (int j = 0; j < L; ++j) hv -= vv[static_cast<std::int64_t>(u ^ masks[j])];
        const Complex t = scale * (alpha * hv + beta * vv[i]) + gamma * oo[i];
        oo[i] = t;
        aa[i] += coeff * t;
    }
}

}  // namespace

void apply_hamiltonian(const ModelParams& params, const StateVector& v, StateVector& out) {
    params.validate();
    const std::int64_t dim = static_cast<std::int64_t>(state_dimension(params.L));
    if (static_cast<std::int64_t>(v.size()) != dim)
        throw std::invalid_argument("apply_hamiltonian: state length != 2^L");
    out.resize(v.size());
    const auto masks = bond_masks(params.L);
    const std::uint64_t* mk = masks.data();
    const int L = params.L;
    const double h = params.h;
    const Complex* vv = v.data();
    Complex* oo = out.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (dim >= static_cast<std::int64_t>(kParallelThreshold))
#endif
    for (std::int64_t i = 0; i < dim; ++i) {
        const std::uint64_t u = static_cast<std::uint64_t>(i);
        const double diag = -h * (L - 2 * std::popcount(u));
        Complex s = diag * vv[i];
        for (int j = 0; j < L; ++j) s -= vv[static_cast<std::int64_t>(u ^ mk[j])];
        oo[i] = s;
    }
}

StateVector apply_hamiltonian(const ModelParams& params, const StateVector& v) {
    StateVector out;
    apply_hamiltonian(params, v, out);
    return out;
}

double estimate_spectral_radius(const ModelParams& params, int max_iters, double rel_tol) {
    const std::uint64_t dim = state_dimension(params.L);
    std::mt19937_64 rng(0x6d697074u);  // fixed seed: estimate is deterministic
    StateVector v(dim);
    for (auto& a : v) {
        const double re = static_cast<double>(rng()) / static_cast<double>(UINT64_MAX) - 0.5;
        const double im = static_cast<double>(rng()) / static_cast<double>(UINT64_MAX) - 0.5;
        a = Complex(re, im);
    }
    double inv = 1.0 / std::sqrt(squared_norm(v));
    for (auto& a : v) a *= inv;

    StateVector w;
    double nu = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        apply_hamiltonian(params, v, w);
        const double nu_next = std::sqrt(squared_norm(w));
        if (nu_next == 0.0) return 0.0;
        inv = 1.0 / nu_next;
        for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] * inv;
        if (it > 0 && std::abs(nu_next - nu) <= rel_tol * nu_next) {
            nu = nu_next;
            break;
        }
        nu = nu_next;
    }
    return nu;
}

ChebyshevPlan make_plan(const ModelParams& params, double tolerance, bool tighten_bounds) {
    params.validate();
    if (!(tolerance > 0.0) || tolerance > 1e-6)
        throw std::invalid_argument("make_plan: tolerance must be in (0, 1e-6]");

    ChebyshevPlan plan;
    plan.params = params;
    const double crude = params.L * (1.0 + params.h);
    double bound = crude;
    if (tighten_bounds) {
        // Power iteration approaches |lambda|_max from below; pad before use.
        const double nu = estimate_spectral_radius(params);
        bound = std::min(crude, 1.03 * nu + 0.25);
    }
    plan.e_max = bound;
    plan.e_min = -bound;

    const double x = plan.half_width() * params.tau;
    int order = 0;
    if (x > 0.0) {
        // J_m(x) decays monotonically past the turning point m ~ x; demand two
        // consecutive sub-threshold coefficients before truncating.
        const int m_start = std::max(1, static_cast<int>(std::ceil(x)));
        constexpr int kMaxOrder = 200000;
        int m = m_start;
        for (; m < kMaxOrder; ++m) {
            if (2.0 * std::abs(std::cyl_bessel_j(m, x)) < tolerance &&
                2.0 * std::abs(std::cyl_bessel_j(m + 1, x)) < tolerance)
                break;
        }
        if (m >= kMaxOrder) throw std::runtime_error("make_plan: expansion order overflow");
        order = m;
    }
    plan.order = order;

    plan.coeffs.resize(static_cast<std::size_t>(order) + 1);
    static const Complex ipow[4] = {Complex(1, 0), Complex(0, -1), Complex(-1, 0), Complex(0, 1)};
    for (int m = 0; m <= order; ++m) {
        const double jm = (x > 0.0) ? std::cyl_bessel_j(m, x) : (m == 0 ? 1.0 : 0.0);
        plan.coeffs[static_cast<std::size_t>(m)] = (m == 0 ? 1.0 : 2.0) * ipow[m % 4] * jm;
    }
    plan.phase = std::exp(Complex(0.0, -plan.center() * params.tau));
    return plan;
}

StateVector evolve(const ChebyshevPlan& plan, const StateVector& v) {
    const ModelParams& p = plan.params;
    const std::uint64_t dim = state_dimension(p.L);
    if (v.size() != dim) throw std::invalid_argument("evolve: state length != 2^L");

    StateVector acc(dim);
    for (std::uint64_t i = 0; i < dim; ++i) acc[i] = plan.coeffs[0] * v[i];
    if (plan.order == 0) {
        if (plan.phase != Complex(1.0, 0.0))
            for (auto& a : acc) a *= plan.phase;
        return acc;
    }

    const auto masks = bond_masks(p.L);
    const double alpha = 1.0 / plan.half_width();
    const double beta = -plan.center() / plan.half_width();

    StateVector t_prev = v;
    StateVector t_cur(dim);
    // T_1 = H~ v
    fused_step(p, masks.data(), t_prev, t_cur, acc, alpha, beta, 1.0, 0.0, plan.coeffs[1]);
    // T_{m} = 2 H~ T_{m-1} - T_{m-2}, written over the T_{m-2} buffer
    for (int m = 2; m <= plan.order; ++m) {
        fused_step(p, masks.data(), t_cur, t_prev, acc, alpha, beta, 2.0, -1.0,
                   plan.coeffs[static_cast<std::size_t>(m)]);
        t_prev.swap(t_cur);
    }
    if (plan.phase != Complex(1.0, 0.0))
        for (auto& a : acc) a *= plan.phase;
    return acc;
}

}  // namespace mipt
