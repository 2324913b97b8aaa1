#include "mipt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mipt/analysis.hpp"
#include "mipt/errors.hpp"
#include "mipt/io.hpp"
#include "mipt/sweep.hpp"
#include "mipt/validate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mipt::cli {

namespace {

using nlohmann::json;

struct CommonOpts {
    std::vector<int> Ls;
    double h = 0.5;
    std::string tau_grid;
    std::vector<double> taus;
    int steps = 0;  // 0 = command default
    std::string engine = "statevector";
    std::string precision = "compensated";
    double plan_tol = 1e-12;
    bool tighten = false;
    int cap = 22;
    int max_steps = 10000;
    std::string out;
    std::string format = "csv";
    int threads = 0;
    std::uint64_t seed = 12345;
    std::string config_path;
};

struct ConfigBinding {
    CLI::Option* opt;
    std::function<void(const json&)> apply;
};

struct SubCtx {
    CommonOpts common;
    std::vector<ConfigBinding> bindings;
};

void bind(SubCtx& ctx, CLI::Option* opt, std::function<void(const json&)> apply) {
    ctx.bindings.push_back({opt, std::move(apply)});
}

void add_common(CLI::App* sub, SubCtx& ctx) {
    CommonOpts& o = ctx.common;
    sub->set_help_flag("--help", "print this help");  // frees -h / --h for the field strength
    bind(ctx, sub->add_option("--L", o.Ls, "chain lengths (repeatable)"),
         [&o](const json& j) { o.Ls = j.get<std::vector<int>>(); });
    bind(ctx, sub->add_option("--h", o.h, "transverse field h = Gamma/J"),
         [&o](const json& j) { o.h = j.get<double>(); });
    bind(ctx, sub->add_option("--tau-grid", o.tau_grid, "step-duration grid start:stop:step"),
         [&o](const json& j) { o.tau_grid = j.get<std::string>(); });
    bind(ctx, sub->add_option("--tau", o.taus, "explicit tau values (repeatable)"),
         [&o](const json& j) { o.taus = j.get<std::vector<double>>(); });
    bind(ctx, sub->add_option("--steps", o.steps, "number of measurement steps"),
         [&o](const json& j) { o.steps = j.get<int>(); });
    bind(ctx,
         sub->add_option("--engine", o.engine, "statevector | freefermion | both")
             ->check(CLI::IsMember({"statevector", "freefermion", "both"})),
         [&o](const json& j) { o.engine = j.get<std::string>(); });
    bind(ctx,
         sub->add_option("--precision", o.precision,
                         "free-fermion accumulator: standard | compensated | extended")
             ->check(CLI::IsMember({"standard", "compensated", "extended"})),
         [&o](const json& j) { o.precision = j.get<std::string>(); });
    bind(ctx, sub->add_option("--plan-tol", o.plan_tol, "Chebyshev truncation tolerance"),
         [&o](const json& j) { o.plan_tol = j.get<double>(); });
    bind(ctx, sub->add_flag("--tighten-bounds", o.tighten, "power-iteration spectral bounds"),
         [&o](const json& j) { o.tighten = j.get<bool>(); });
    bind(ctx, sub->add_option("--cap", o.cap, "state-vector size cap on L"),
         [&o](const json& j) { o.cap = j.get<int>(); });
    bind(ctx, sub->add_option("--max-steps", o.max_steps, "free-fermion step cap"),
         [&o](const json& j) { o.max_steps = j.get<int>(); });
    bind(ctx, sub->add_option("--out", o.out, "output dataset path"),
         [&o](const json& j) { o.out = j.get<std::string>(); });
    bind(ctx,
         sub->add_option("--format", o.format, "csv | json")
             ->check(CLI::IsMember({"csv", "json"})),
         [&o](const json& j) { o.format = j.get<std::string>(); });
    bind(ctx, sub->add_option("--threads", o.threads, "worker threads (0 = library default)"),
         [&o](const json& j) { o.threads = j.get<int>(); });
    bind(ctx, sub->add_option("--seed", o.seed, "seed for randomized checks"),
         [&o](const json& j) { o.seed = j.get<std::uint64_t>(); });
    sub->add_option("--config", o.config_path, "JSON config file; explicit flags win");
}

void merge_config(SubCtx& ctx) {
    if (ctx.common.config_path.empty()) return;
    std::ifstream in(ctx.common.config_path);
    if (!in) throw std::invalid_argument("cannot open config file " + ctx.common.config_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config parse error: " + std::string(e.what()));
    }
    for (auto& b : ctx.bindings) {
        const std::string key = b.opt->get_name(false, true).substr(2);  // strip "--"
        if (b.opt->count() == 0 && j.contains(key)) b.apply(j.at(key));
    }
}

std::vector<double> effective_taus(const CommonOpts& o) {
    std::vector<double> taus = o.taus;
    if (!o.tau_grid.empty()) {
        double start = 0, stop = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(o.tau_grid);
        if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0))
            throw std::invalid_argument("bad --tau-grid, expected start:stop:step");
        for (double t = start; t <= stop + step * 1e-9; t += step) taus.push_back(t);
    }
    std::sort(taus.begin(), taus.end());
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i] > taus[i - 1] + 1e-12))
            throw std::invalid_argument("tau grid must be strictly increasing (duplicate value)");
    if (taus.empty()) throw std::invalid_argument("empty tau grid: pass --tau-grid or --tau");
    return taus;
}

Engine parse_engine(const std::string& s) {
    if (s == "statevector") return Engine::Statevector;
    if (s == "freefermion") return Engine::FreeFermion;
    return Engine::Both;
}

Precision parse_precision(const std::string& s) {
    if (s == "standard") return Precision::Standard;
    if (s == "extended") return Precision::Extended;
    return Precision::Compensated;
}

EngineOptions engine_options(const CommonOpts& o) {
    EngineOptions e;
    e.plan_tolerance = o.plan_tol;
    e.tighten_bounds = o.tighten;
    e.max_L_statevector = o.cap;
    e.precision = parse_precision(o.precision);
    e.max_steps_freefermion = o.max_steps;
    return e;
}

void apply_threads(const CommonOpts& o) {
#ifdef _OPENMP
    if (o.threads > 0) omp_set_num_threads(o.threads);
#else
    (void)o;
#endif
}

void require_common(const CommonOpts& o) {
    if (o.Ls.empty()) throw std::invalid_argument("pass at least one --L");
    if (o.out.empty()) throw std::invalid_argument("pass --out");
    for (std::size_t i = 1; i < o.Ls.size(); ++i)
        if (o.Ls[i] <= o.Ls[i - 1])
            throw std::invalid_argument("--L list must be strictly increasing");
}

json base_config(const std::string& command, const CommonOpts& o,
                 const std::vector<double>& taus) {
    json j;
    j["command"] = command;
    j["L"] = o.Ls;
    j["h"] = o.h;
    j["tau"] = taus;
    j["steps"] = o.steps;
    j["engine"] = o.engine;
    j["precision"] = o.precision;
    j["plan_tol"] = o.plan_tol;
    j["tighten_bounds"] = o.tighten;
    j["cap"] = o.cap;
    j["max_steps"] = o.max_steps;
    j["format"] = o.format;
    j["threads"] = o.threads;
    j["seed"] = o.seed;
    return j;
}

void write_dataset(const CommonOpts& o, Table table) {
    write_table(o.out, table, o.format == "csv" ? OutputFormat::Csv : OutputFormat::Json);
}

// ---- subcommand bodies ----

void cmd_survival(const CommonOpts& o) {
    require_common(o);
    const auto taus = effective_taus(o);
    SweepGrid grid{o.Ls, o.h, taus, o.steps > 0 ? o.steps : 100};
    const auto curves = run_survival_sweep(grid, parse_engine(o.engine), engine_options(o));

    Table t;
    json cfg = base_config("survival", o, taus);
    cfg["steps"] = grid.n_steps;
    t.comments.push_back("config: " + cfg.dump());
    t.columns = {"engine", "L", "h", "tau", "n", "R", "p"};
    for (const auto& c : curves)
        for (std::size_t n = 0; n < c.R.size(); ++n)
            t.rows.push_back({c.engine, std::to_string(c.L), format_double(c.h),
                              format_double(c.tau), std::to_string(n + 1), format_double(c.R[n]),
                              format_double(c.p[n])});
    write_dataset(o, std::move(t));
}

void cmd_entanglement(const CommonOpts& o, const std::vector<int>& ells, bool all_splits) {
    require_common(o);
    if (o.engine != "statevector")
        throw std::invalid_argument("entanglement needs --engine statevector (full states)");
    const auto taus = effective_taus(o);
    SweepGrid grid{o.Ls, o.h, taus, o.steps > 0 ? o.steps : 10};
    const auto points = run_entanglement_sweep(
        grid, ells, engine_options(o),
        all_splits ? SplitSet::AllBipartitions : SplitSet::ContiguousPrefix);

    Table t;
    json cfg = base_config("entanglement", o, taus);
    cfg["steps"] = grid.n_steps;
    cfg["ell"] = ells;
    cfg["all_bipartitions"] = all_splits;
    t.comments.push_back("config: " + cfg.dump());
    t.columns = {"L", "h", "tau", "n", "ell", "S", "G", "S_G", "G_cum"};
    for (const auto& pt : points)
        for (const auto& rec : pt.records)
            for (std::size_t e = 0; e < pt.ells.size(); ++e)
                t.rows.push_back({std::to_string(pt.L), format_double(pt.h),
                                  format_double(pt.tau), std::to_string(rec.n),
                                  std::to_string(pt.ells[e]), format_double(rec.S[e]),
                                  format_double(rec.G), format_double(rec.S_G),
                                  format_double(rec.G_cum)});
    write_dataset(o, std::move(t));
}

void cmd_transition(const CommonOpts& o, const PlateauConfig& plateau) {
    require_common(o);
    if (o.engine == "both")
        throw std::invalid_argument("transition needs a single engine");
    const auto taus = effective_taus(o);
    SweepGrid grid{o.Ls, o.h, taus, o.steps > 0 ? o.steps : 40};
    const auto curves =
        run_transition_sweep(grid, parse_engine(o.engine), engine_options(o), plateau);

    Table t;
    json cfg = base_config("transition", o, taus);
    cfg["steps"] = grid.n_steps;
    cfg["plateau_nmin"] = plateau.n_min;
    cfg["plateau_window"] = plateau.window;
    cfg["plateau_delta"] = plateau.delta;
    t.comments.push_back("config: " + cfg.dump());
    t.columns = {"type", "L", "h", "x", "value", "flag"};
    for (const auto& c : curves) {
        const double root = std::sqrt(static_cast<double>(c.L));
        for (std::size_t i = 0; i < c.tau.size(); ++i)
            t.rows.push_back({"H", std::to_string(c.L), format_double(c.h),
                              format_double(c.tau[i]), format_double(c.H[i]),
                              c.window_found[i] ? "window" : "fallback"});
        for (std::size_t i = 0; i < c.dH_dtau.x.size(); ++i) {
            t.rows.push_back({"dHdtau", std::to_string(c.L), format_double(c.h),
                              format_double(c.dH_dtau.x[i]), format_double(c.dH_dtau.slope[i]),
                              ""});
            t.rows.push_back({"dHdsigma", std::to_string(c.L), format_double(c.h),
                              format_double(c.dH_dtau.x[i] * root),
                              format_double(c.dH_dtau.slope[i] / root), ""});
        }
        t.rows.push_back({"tau_c", std::to_string(c.L), format_double(c.h),
                          format_double(c.peak.x_peak), format_double(c.peak.slope_peak),
                          c.peak.boundary ? "boundary" : ""});
    }
    write_dataset(o, std::move(t));
}

void cmd_collapse(const CommonOpts& o, const std::string& kind, const PlateauConfig& plateau,
                  int snapshot_n, int ell_opt, double tau_c_opt, double mu_opt,
                  int resample_points) {
    require_common(o);
    const auto taus = effective_taus(o);
    Table t;
    json cfg = base_config("collapse", o, taus);
    cfg["kind"] = kind;
    t.columns = {"kind", "type", "L", "x", "value"};

    if (kind == "sigma") {
        if (o.engine == "both") throw std::invalid_argument("collapse needs a single engine");
        SweepGrid grid{o.Ls, o.h, taus, o.steps > 0 ? o.steps : 150};
        cfg["steps"] = grid.n_steps;
        cfg["plateau_nmin"] = plateau.n_min;
        cfg["plateau_window"] = plateau.window;
        cfg["plateau_delta"] = plateau.delta;
        const auto curves =
            run_transition_sweep(grid, parse_engine(o.engine), engine_options(o), plateau);
        const auto result = sigma_collapse(plateau_curves(curves), resample_points);
        t.comments.push_back("config: " + cfg.dump());
        t.comments.push_back("collapse_quality: " + format_double(result.quality));
        t.comments.push_back("peak_spread: " + format_double(result.peak_spread));
        for (std::size_t ci = 0; ci < result.L.size(); ++ci) {
            const auto& rc = result.resampled[ci];
            for (std::size_t i = 0; i < rc.x.size(); ++i)
                t.rows.push_back({"sigma", "curve", std::to_string(result.L[ci]),
                                  format_double(rc.x[i]), format_double(rc.y[i])});
            t.rows.push_back({"sigma", "peak", std::to_string(result.L[ci]),
                              format_double(result.sigma_peak[ci]), ""});
        }
    } else if (kind == "entropy") {
        if (o.engine != "statevector")
            throw std::invalid_argument("entropy collapse needs --engine statevector");
        const int n_snap = snapshot_n > 0 ? snapshot_n : 10;
        const double tau_c = tau_c_opt > 0 ? tau_c_opt : (o.h < 1.0 ? 0.2 : 0.1);
        const double mu = mu_opt > 0 ? mu_opt : (o.h < 1.0 ? 0.3 : 0.4);
        cfg["snapshot_n"] = n_snap;
        cfg["tau_c"] = tau_c;
        cfg["mu"] = mu;
        cfg["ell"] = ell_opt;

        std::vector<std::pair<int, CurveXY>> curves;
        const EngineOptions eopts = engine_options(o);
        for (int L : o.Ls) {
            CurveXY c;
            c.x = taus;
            c.y.resize(taus.size());
            std::exception_ptr err;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
            for (long long i = 0; i < static_cast<long long>(taus.size()); ++i) {
                try {
                    const int ell = ell_opt > 0 ? ell_opt : std::max(1, L / 4);
                    c.y[static_cast<std::size_t>(i)] = entropy_snapshot(
                        ModelParams(L, o.h, taus[static_cast<std::size_t>(i)]), n_snap, ell,
                        eopts);
                } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                    {
                        if (!err) err = std::current_exception();
                    }
                }
            }
            if (err) std::rethrow_exception(err);
            curves.emplace_back(L, std::move(c));
        }
        const auto result = entanglement_collapse(curves, tau_c, mu, resample_points);
        t.comments.push_back("config: " + cfg.dump());
        t.comments.push_back("collapse_quality: " + format_double(result.quality));
        if (result.interpolated) t.comments.push_back("note: S(tau_c) linearly interpolated");
        for (std::size_t ci = 0; ci < result.L.size(); ++ci)
            for (std::size_t i = 0; i < result.shifted[ci].x.size(); ++i)
                t.rows.push_back({"entropy", "curve", std::to_string(result.L[ci]),
                                  format_double(result.shifted[ci].x[i]),
                                  format_double(result.shifted[ci].y[i])});
    } else {
        throw std::invalid_argument("collapse --kind must be sigma or entropy");
    }
    write_dataset(o, std::move(t));
}

int cmd_validate(const CommonOpts& o) {
    const ValidationReport report = run_validation(o.seed);
    for (const auto& c : report.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    std::cout << (report.all_pass ? "validation passed" : "validation FAILED") << "\n";
    if (!o.out.empty()) write_text_atomic(o.out, report_to_json(report));
    return report.all_pass ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"dual-engine simulator of the periodically measured transverse-field Ising chain"};
    app.set_help_flag("--help", "print this help");
    app.require_subcommand(1);

    SubCtx survival_ctx, entanglement_ctx, transition_ctx, collapse_ctx, validate_ctx;
    std::vector<int> ells;
    bool all_splits = false;
    PlateauConfig plateau_tr, plateau_co;
    std::string kind = "sigma";
    int snapshot_n = 0, ell_opt = 0, resample_points = 101;
    double tau_c_opt = 0.0, mu_opt = 0.0;

    CLI::App* s_survival = app.add_subcommand("survival", "survival probability series R_n, p_n");
    add_common(s_survival, survival_ctx);

    CLI::App* s_ent = app.add_subcommand("entanglement", "per-step S, GGM, SAG and cumulative average");
    add_common(s_ent, entanglement_ctx);
    bind(entanglement_ctx, s_ent->add_option("--ell", ells, "block sizes (default L/4)"),
         [&ells](const json& j) { ells = j.get<std::vector<int>>(); });
    bind(entanglement_ctx,
         s_ent->add_flag("--all-bipartitions", all_splits, "GGM over all splits (small L)"),
         [&all_splits](const json& j) { all_splits = j.get<bool>(); });

    CLI::App* s_tr = app.add_subcommand("transition", "plateau heights, dH/dtau and tau_c");
    add_common(s_tr, transition_ctx);
    auto add_plateau = [](CLI::App* sub, SubCtx& ctx, PlateauConfig& p) {
        bind(ctx, sub->add_option("--plateau-nmin", p.n_min, "earliest eligible step"),
             [&p](const json& j) { p.n_min = j.get<int>(); });
        bind(ctx, sub->add_option("--plateau-window", p.window, "flat-window length"),
             [&p](const json& j) { p.window = j.get<int>(); });
        bind(ctx, sub->add_option("--plateau-delta", p.delta, "per-step flatness threshold"),
             [&p](const json& j) { p.delta = j.get<double>(); });
    };
    add_plateau(s_tr, transition_ctx, plateau_tr);

    CLI::App* s_co = app.add_subcommand("collapse", "sigma scaling / entanglement collapse datasets");
    add_common(s_co, collapse_ctx);
    add_plateau(s_co, collapse_ctx, plateau_co);
    bind(collapse_ctx,
         s_co->add_option("--kind", kind, "sigma | entropy")
             ->check(CLI::IsMember({"sigma", "entropy"})),
         [&kind](const json& j) { kind = j.get<std::string>(); });
    bind(collapse_ctx, s_co->add_option("--snapshot-n", snapshot_n, "entropy snapshot step"),
         [&snapshot_n](const json& j) { snapshot_n = j.get<int>(); });
    bind(collapse_ctx, s_co->add_option("--ell", ell_opt, "block size (default L/4)"),
         [&ell_opt](const json& j) { ell_opt = j.get<int>(); });
    bind(collapse_ctx, s_co->add_option("--tau-c", tau_c_opt, "critical tau (default by h)"),
         [&tau_c_opt](const json& j) { tau_c_opt = j.get<double>(); });
    bind(collapse_ctx, s_co->add_option("--mu", mu_opt, "collapse exponent (default by h)"),
         [&mu_opt](const json& j) { mu_opt = j.get<double>(); });
    bind(collapse_ctx,
         s_co->add_option("--resample-points", resample_points, "common-grid resolution"),
         [&resample_points](const json& j) { resample_points = j.get<int>(); });

    CLI::App* s_val = app.add_subcommand("validate", "cross-engine and oracle check suite");
    add_common(s_val, validate_ctx);

    int exit_code = 0;
    s_survival->callback([&] {
        merge_config(survival_ctx);
        apply_threads(survival_ctx.common);
        cmd_survival(survival_ctx.common);
    });
    s_ent->callback([&] {
        merge_config(entanglement_ctx);
        apply_threads(entanglement_ctx.common);
        cmd_entanglement(entanglement_ctx.common, ells, all_splits);
    });
    s_tr->callback([&] {
        merge_config(transition_ctx);
        apply_threads(transition_ctx.common);
        cmd_transition(transition_ctx.common, plateau_tr);
    });
    s_co->callback([&] {
        merge_config(collapse_ctx);
        apply_threads(collapse_ctx.common);
        cmd_collapse(collapse_ctx.common, kind, plateau_co, snapshot_n, ell_opt, tau_c_opt,
                     mu_opt, resample_points);
    });
    s_val->callback([&] {
        merge_config(validate_ctx);
        apply_threads(validate_ctx.common);
        exit_code = cmd_validate(validate_ctx.common);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const precision_error& e) {
        std::cerr << "precision failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

}  // namespace mipt::cli
