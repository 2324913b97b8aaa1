#include "mipt/freefermion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mipt/errors.hpp"
#include "mipt/summation.hpp"

namespace mipt {

double mode_lambda(double h, double k) {
    return 2.0 * std::sqrt(h * h + 1.0 + 2.0 * h * std::cos(k));
}

FermionModeSet build_modes(const ModelParams& params) {
    params.validate();
    FermionModeSet set;
    set.L = params.L;
    set.h = params.h;
    set.modes.reserve(static_cast<std::size_t>(params.L / 2));
    for (int m = 0; m < params.L / 2; ++m) {
        FermionMode mode;
        mode.k = (2 * m + 1) * std::numbers::pi / params.L;
        mode.lambda = mode_lambda(params.h, mode.k);
        mode.cos2theta = 2.0 * (params.h + std::cos(mode.k)) / mode.lambda;
        set.modes.push_back(mode);
    }
    return set;
}

Complex overlap_f(const FermionModeSet& modes, double tau, std::int64_t n) {
    if (n == 0) return Complex(1.0, 0.0);
    const bool negate = n < 0;
    const double nt = static_cast<double>(negate ? -n : n) * tau;
    Complex prod(1.0, 0.0);
    for (const FermionMode& m : modes.modes) {
        const double x = m.lambda * nt;
        prod *= Complex(std::cos(x), std::sin(x) * m.cos2theta);
    }
    return negate ? std::conj(prod) : prod;
}

std::vector<Complex> build_f_table(const FermionModeSet& modes, double tau, int n_max) {
    std::vector<Complex> f(static_cast<std::size_t>(n_max) + 1);
    for (int j = 0; j <= n_max; ++j) f[static_cast<std::size_t>(j)] = overlap_f(modes, tau, j);
    return f;
}

std::vector<Complex> recursion_coefficients(const std::vector<Complex>& f, int n_max,
                                            Precision precision) {
    if (static_cast<int>(f.size()) < n_max + 1)
        throw std::invalid_argument("recursion_coefficients: f table shorter than n_max + 1");

    // reversed table: fr[i] = f[n_max - i]; the step-n convolution then reads
    // the contiguous slice fr[n_max - n .. n_max - 1]
    std::vector<Complex> fr(static_cast<std::size_t>(n_max) + 1);
    for (int i = 0; i <= n_max; ++i) fr[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(n_max - i)];

    std::vector<Complex> c;
    c.reserve(static_cast<std::size_t>(n_max) + 1);
    c.push_back(Complex(1.0, 0.0));  // C_n^(n) = 1
    for (int n = 1; n <= n_max; ++n) {
        // c[n] = -sum_{v=0}^{n-1} c[v] f[n-v]
        const Complex s = convolve({c.data(), static_cast<std::size_t>(n)},
                                   {fr.data() + (n_max - n), static_cast<std::size_t>(n)},
                                   precision);
        const Complex cn = -s;
        if (!std::isfinite(cn.real()) || !std::isfinite(cn.imag()))
            throw precision_error("recursion_coefficients: non-finite coefficient", n);
        c.push_back(cn);
    }
    return c;
}

namespace {

FreeFermionRun survival_core(const ModelParams& params, int n_steps,
                             const FreeFermionOptions& opts) {
    params.validate();
    if (n_steps < 1) throw std::invalid_argument("survival_large_L: n_steps must be >= 1");
    if (n_steps > opts.max_steps)
        throw std::invalid_argument("survival_large_L: n_steps " + std::to_string(n_steps) +
                                    " exceeds cap " + std::to_string(opts.max_steps));

    FreeFermionRun run;
    run.params = params;
    const FermionModeSet modes = build_modes(params);
    run.series.f = build_f_table(modes, params.tau, n_steps);
    run.series.c = recursion_coefficients(run.series.f, n_steps, opts.precision);

    // Incremental Gram update of R_n = sum_{u,v<=n} conj(c_u) c_v f_{u-v}:
    // adding row/column n contributes |c_n|^2 f_0 + conj(c_n) s_n + c_n conj(s_n)
    // with s_n = sum_{v<n} c_v f_{n-v} = -c_n by the recursion itself.
    detail::ComplexAcc<detail::NeumaierAcc> acc;
    acc.add(Complex(1.0, 0.0));  // R_0
    run.survival.reserve(static_cast<std::size_t>(n_steps));
    run.first_detection.reserve(static_cast<std::size_t>(n_steps));
    double r_prev = 1.0;
    for (int n = 1; n <= n_steps; ++n) {
        const Complex cn = run.series.c[static_cast<std::size_t>(n)];
        const Complex s = -cn;
        const Complex incr =
            std::norm(cn) * run.series.f[0] + std::conj(cn) * s + cn * std::conj(s);
        acc.add(incr);
        const Complex r_acc = acc.value();
        if (!std::isfinite(r_acc.real()) || !std::isfinite(r_acc.imag()))
            throw precision_error("survival_large_L: non-finite survival", n);
        if (std::abs(r_acc.imag()) > 1e-9)
            throw precision_error("survival_large_L: imaginary residue beyond 1e-9", n);
        double r = r_acc.real();
        if (r < -1e-9 || r > 1.0 + 1e-9)
            throw precision_error("survival_large_L: survival out of [0,1]", n);
        r = std::min(1.0, std::max(0.0, r));
        run.survival.push_back(r);
        run.first_detection.push_back(r_prev - r);
        r_prev = r;
    }
    return run;
}

}  // namespace

std::vector<double> survival_large_L(const ModelParams& params, int n_steps,
                                     const FreeFermionOptions& opts) {
    return survival_core(params, n_steps, opts).survival;
}

FreeFermionRun run_freefermion(const ModelParams& params, int n_steps,
                               const FreeFermionOptions& opts) {
    return survival_core(params, n_steps, opts);
}

RhoPhi rho_phi(const FermionModeSet& modes, double tau, std::int64_t n) {
    if (n == 0) return {1.0, 0.0};
    const bool negate = n < 0;
    const double nt = static_cast<double>(negate ? -n : n) * tau;

    detail::NeumaierAcc log_sum;
    detail::NeumaierAcc phi_sum;
    constexpr double pi = std::numbers::pi;
    for (const FermionMode& m : modes.modes) {
        const double x = m.lambda * nt;
        const double u = 2.0 * std::sin(m.k) * std::sin(x) / m.lambda;
        // |u| <= 1 analytically; clamp the square against one-ulp overshoot
        log_sum.add(std::log1p(-std::min(u * u, 1.0)));

        const double c = m.cos2theta;
        if (c == 0.0) {
            // factor is real cos(x); principal argument keeps rho e^{i phi} = f
            phi_sum.add(std::arg(Complex(std::cos(x), 0.0)));
            continue;
        }
        // Branch-continued arg of cos(x) + i c sin(x): shift x by multiples of
        // pi (where the factor returns to itself up to sign) and evaluate the
        // principal piece with atan2, which is exact at the tan singularities.
        const double mfold = std::nearbyint(x / pi);
        const double xt = x - mfold * pi;
        const double sign = c > 0.0 ? 1.0 : -1.0;
        phi_sum.add(mfold * pi * sign + std::atan2(c * std::sin(xt), std::cos(xt)));
    }
    RhoPhi out;
    out.rho = std::exp(0.5 * (log_sum.hi() + log_sum.lo()));
    out.phi = phi_sum.hi() + phi_sum.lo();
    if (negate) out.phi = -out.phi;
    return out;
}

double alpha(const ModelParams& params) {
    params.validate();
    if (params.tau <= 0.0)
        throw std::invalid_argument("alpha: tau must be > 0 (the rate is defined per tau^2)");
    const FermionModeSet modes = build_modes(params);
    detail::NeumaierAcc sum;
    for (const FermionMode& m : modes.modes) {
        const double u = 2.0 * std::sin(m.k) * std::sin(m.lambda * params.tau) / m.lambda;
        sum.add(std::log1p(-std::min(u * u, 1.0)));
    }
    return -(sum.hi() + sum.lo()) / (params.L * params.tau * params.tau);
}

}  // namespace mipt
