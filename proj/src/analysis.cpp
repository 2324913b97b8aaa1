#include "mipt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mipt/summation.hpp"

namespace mipt {

namespace {

// Flatness comparisons are inclusive up to rounding, so a change of exactly
// delta qualifies.
bool flat(double d, double delta) { return std::abs(d) < delta * (1.0 + 1e-9); }

double interp_linear(std::span<const double> xs, std::span<const double> ys, double x) {
    const auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

// mean pairwise mean-squared distance after resampling onto a common grid
double pairwise_quality(const std::vector<CurveXY>& resampled) {
    if (resampled.size() < 2) return 0.0;
    double total = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < resampled.size(); ++i) {
        for (std::size_t j = i + 1; j < resampled.size(); ++j) {
            double mse = 0.0;
            const std::size_t n = resampled[i].y.size();
            for (std::size_t p = 0; p < n; ++p) {
                const double d = resampled[i].y[p] - resampled[j].y[p];
                mse += d * d;
            }
            total += mse / static_cast<double>(n);
            ++pairs;
        }
    }
    return total / pairs;
}

std::vector<double> common_grid(const std::vector<CurveXY>& curves, int points) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) {
        if (c.x.size() < 2) throw std::invalid_argument("collapse: curve with < 2 points");
        lo = std::max(lo, c.x.front());
        hi = std::min(hi, c.x.back());
    }
    if (!(hi > lo))
        throw std::invalid_argument("collapse: curves have no common abscissa overlap");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return grid;
}

}  // namespace

PlateauResult plateau_height(std::span<const double> survival, const PlateauConfig& cfg) {
    if (cfg.window < 2) throw std::invalid_argument("plateau_height: window must be >= 2");
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("plateau_height: delta must be > 0");
    if (cfg.n_min < 1) throw std::invalid_argument("plateau_height: n_min must be >= 1");
    const int n = static_cast<int>(survival.size());
    if (n < cfg.n_min + cfg.window)
        throw std::invalid_argument("plateau_height: series of length " + std::to_string(n) +
                                    " too short for n_min + window");

    // first qualifying window wins (multi-plateau rule)
    for (int start = cfg.n_min; start + cfg.window - 1 <= n; ++start) {
        bool ok = true;
        for (int i = start; i < start + cfg.window - 1 && ok; ++i)
            ok = flat(survival[static_cast<std::size_t>(i)] - survival[static_cast<std::size_t>(i - 1)],
                      cfg.delta);
        if (ok) {
            double mean = 0.0;
            for (int i = start; i < start + cfg.window; ++i)
                mean += survival[static_cast<std::size_t>(i - 1)];
            return {mean / cfg.window, true, start};
        }
    }
    // fallback: R at the step with the smallest |dR|
    int best = 1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) {
        const double d =
            std::abs(survival[static_cast<std::size_t>(i)] - survival[static_cast<std::size_t>(i - 1)]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {survival[static_cast<std::size_t>(best - 1)], false, best};
}

DerivativeSeries two_point_derivative(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("two_point_derivative: size mismatch");
    if (xs.size() < 2) throw std::invalid_argument("two_point_derivative: need >= 2 points");
    DerivativeSeries out;
    out.x.reserve(xs.size() - 1);
    out.slope.reserve(xs.size() - 1);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double dx = xs[i + 1] - xs[i];
        if (!(dx > 0.0))
            throw std::invalid_argument("two_point_derivative: abscissae must be strictly increasing");
        out.x.push_back(0.5 * (xs[i] + xs[i + 1]));
        out.slope.push_back((ys[i + 1] - ys[i]) / dx);
    }
    return out;
}

PeakResult peak_location(std::span<const double> xs, std::span<const double> slopes,
                         bool parabolic_refine) {
    if (xs.size() != slopes.size() || xs.size() < 3)
        throw std::invalid_argument("peak_location: need >= 3 matched points");
    std::size_t best = 0;
    for (std::size_t i = 1; i < slopes.size(); ++i)
        if (slopes[i] > slopes[best]) best = i;  // strict: ties keep the smaller x

    PeakResult out;
    out.x_peak = xs[best];
    out.slope_peak = slopes[best];
    out.boundary = best == 0 || best + 1 == slopes.size();
    if (parabolic_refine && !out.boundary) {
        const double y0 = slopes[best - 1], y1 = slopes[best], y2 = slopes[best + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom < 0.0) {
            const double offset = 0.5 * (y0 - y2) / denom;
            const double hgrid = 0.5 * (xs[best + 1] - xs[best - 1]);
            out.x_peak = xs[best] + offset * hgrid;
            out.slope_peak = y1 - 0.25 * (y0 - y2) * offset;
        }
    }
    return out;
}

SigmaCollapseResult sigma_collapse(const std::vector<std::pair<int, CurveXY>>& H_of_tau_by_L,
                                   int resample_points) {
    if (H_of_tau_by_L.empty()) throw std::invalid_argument("sigma_collapse: no curves");
    SigmaCollapseResult out;
    for (const auto& [L, curve] : H_of_tau_by_L) {
        std::vector<double> sigma(curve.x.size());
        const double root = std::sqrt(static_cast<double>(L));
        for (std::size_t i = 0; i < curve.x.size(); ++i) sigma[i] = curve.x[i] * root;
        const DerivativeSeries d = two_point_derivative(sigma, curve.y);
        const PeakResult pk = peak_location(d.x, d.slope);
        out.L.push_back(L);
        out.sigma_peak.push_back(pk.x_peak);
        out.dH_dsigma.push_back({d.x, d.slope});
    }

    const std::vector<double> grid = common_grid(out.dH_dsigma, resample_points);
    for (const auto& c : out.dH_dsigma) {
        CurveXY r;
        r.x = grid;
        r.y.reserve(grid.size());
        for (double g : grid) r.y.push_back(interp_linear(c.x, c.y, g));
        out.resampled.push_back(std::move(r));
    }
    out.quality = pairwise_quality(out.resampled);

    for (std::size_t i = 0; i < out.sigma_peak.size(); ++i)
        for (std::size_t j = i + 1; j < out.sigma_peak.size(); ++j) {
            const double a = out.sigma_peak[i], b = out.sigma_peak[j];
            const double rel = std::abs(a - b) / (0.5 * (a + b));
            out.peak_spread = std::max(out.peak_spread, rel);
        }
    return out;
}

EntanglementCollapseResult entanglement_collapse(
    const std::vector<std::pair<int, CurveXY>>& S_of_tau_by_L, double tau_c, double mu,
    int resample_points) {
    if (S_of_tau_by_L.empty()) throw std::invalid_argument("entanglement_collapse: no curves");
    EntanglementCollapseResult out;
    for (const auto& [L, curve] : S_of_tau_by_L) {
        if (curve.x.size() < 2) throw std::invalid_argument("entanglement_collapse: curve with < 2 points");
        if (tau_c < curve.x.front() - 1e-12 || tau_c > curve.x.back() + 1e-12)
            throw std::invalid_argument("entanglement_collapse: tau_c outside the swept grid");
        bool on_grid = false;
        for (double x : curve.x)
            if (std::abs(x - tau_c) <= 1e-12) on_grid = true;
        if (!on_grid) out.interpolated = true;
        const double s_c = interp_linear(curve.x, curve.y, tau_c);

        CurveXY shifted;
        const double scale = std::pow(static_cast<double>(L), mu);
        shifted.x.reserve(curve.x.size());
        shifted.y.reserve(curve.x.size());
        for (std::size_t i = 0; i < curve.x.size(); ++i) {
            shifted.x.push_back((curve.x[i] - tau_c) * scale);
            shifted.y.push_back(curve.y[i] - s_c);
        }
        out.L.push_back(L);
        out.shifted.push_back(std::move(shifted));
    }

    std::vector<CurveXY> resampled;
    const std::vector<double> grid = common_grid(out.shifted, resample_points);
    for (const auto& c : out.shifted) {
        CurveXY r;
        r.x = grid;
        for (double g : grid) r.y.push_back(interp_linear(c.x, c.y, g));
        resampled.push_back(std::move(r));
    }
    out.quality = pairwise_quality(resampled);
    return out;
}

LogFitResult log_decay_fit(std::span<const double> survival, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi <= n_lo || n_hi > static_cast<int>(survival.size()))
        throw std::invalid_argument("log_decay_fit: bad step range");
    const int n = n_hi - n_lo + 1;
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double r = survival[static_cast<std::size_t>(n_lo - 1 + i)];
        if (!(r > 0.0)) throw std::invalid_argument("log_decay_fit: non-positive survival in range");
        x[static_cast<std::size_t>(i)] = std::log(static_cast<double>(n_lo + i));
        y[static_cast<std::size_t>(i)] = r;
    }
    const double xm = compensated_sum(x) / n;
    const double ym = compensated_sum(y) / n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = x[static_cast<std::size_t>(i)] - xm;
        sxx += dx * dx;
        sxy += dx * (y[static_cast<std::size_t>(i)] - ym);
    }
    LogFitResult fit;
    const double slope = sxy / sxx;  // y ~ ym + slope (x - xm), model y = a - b x
    fit.b = -slope;
    fit.a = ym + fit.b * xm;
    double ss_res = 0.0, ss_tot = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pred = fit.a - fit.b * x[static_cast<std::size_t>(i)];
        const double dy = y[static_cast<std::size_t>(i)] - pred;
        const double dm = y[static_cast<std::size_t>(i)] - ym;
        ss_res += dy * dy;
        ss_tot += dm * dm;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace mipt
