#include "dampwave/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dampwave/analysis.hpp"
#include "dampwave/error.hpp"
#include "dampwave/io.hpp"
#include "dampwave/oracle.hpp"
#include "dampwave/parallel.hpp"

namespace dampwave::cli {

namespace {

using nlohmann::json;

// States smaller than this sit next to the subnormal range, where relative
// error carries no information; compare deviations against it instead.
constexpr double kCompareFloor = 1e-250;

// JSON has no infinity; unbounded values are written as null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string hex_tag(std::uint64_t tag) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(tag));
    return buf;
}

std::filesystem::path output_path(const GlobalOptions& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out);
    return opts.out / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::FileFormat, "cannot write " + path.string());
    out << text;
}

// Everything a trace-based command needs, with scenario problems surfaced
// as configuration errors.
struct Setup {
    SpectralGrid grid;
    double gamma;
    StateVector f;
    StateVector g;
};

Setup prepare(const Scenario& sc) {
    if (!sc.data) throw Error(ErrorCode::Config, "data: required by this command");
    auto as_config = [](const char* where, auto&& fn) {
        try {
            return fn();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Config) throw;
            throw Error(ErrorCode::Config, std::string(where) + ": " + e.what());
        }
    };
    SpectralGrid grid = as_config("grid", [&] { return build_grid(sc); });
    const double gamma = as_config("gamma", [&] { return resolve_gamma(sc); });
    StateVector f = as_config("data.f", [&] { return make_data(grid, build_shape(sc.data->f)); });
    StateVector g = as_config("data.g", [&] { return make_data(grid, build_shape(sc.data->g)); });
    return {std::move(grid), gamma, std::move(f), std::move(g)};
}

std::vector<double> require_times(const Scenario& sc) {
    if (!sc.time) throw Error(ErrorCode::Config, "time: required by this command");
    return build_times(*sc.time);
}

json fit_json(const FitConfig& fc, const DecayTrace& trace, const std::vector<std::optional<double>>& dratio,
              double horizon) {
    json j = {{"target", fc.target}, {"model", fc.model}};
    double hi = fc.hi;
    if (fc.clip_to_horizon) hi = std::min(hi, horizon);
    j["window"] = {fc.lo, hi};
    try {
        if (!(hi > fc.lo)) throw Error(ErrorCode::InsufficientSamples, "window is empty below the validity horizon");
        const auto& values = fc.target == "decomposition" ? dratio : trace.ratio;
        const RateFit fit = fit_series(trace.times, values, fc.lo, hi, build_fit_model(fc.model));
        j["prefactor"] = fit.prefactor;
        j["rate"] = fit.rate;
        j["residual_rms"] = fit.residual_rms;
        j["samples"] = fit.samples;
    } catch (const Error& e) {
        j["error"] = e.what();
    }
    return j;
}

struct RunResult {
    DecayTrace trace;
    double horizon;
    json report;
};

RunResult evaluate_run(const Scenario& sc, const Setup& setup, const std::vector<double>& times, unsigned workers) {
    TraceOptions topts;
    topts.workers = workers;
    topts.h_formula = build_h_formula(sc.h_formula);
    RunResult r{run_trace(setup.grid, setup.f, setup.g, setup.gamma, times, topts), 0.0, json::object()};
    const StateVector h = canonical_initial(setup.grid, setup.f, setup.g, setup.gamma, topts.h_formula);
    r.horizon = validity_horizon(setup.grid, h, setup.gamma);

    const auto we = prepare_wave(setup.grid, setup.f, setup.g, setup.gamma);
    json& rep = r.report;
    rep["gamma"] = setup.gamma;
    rep["h_formula"] = sc.h_formula;
    rep["modes"] = setup.grid.size();
    rep["grid_tag"] = hex_tag(setup.grid.tag());
    rep["norm_h"] = norm(setup.grid, h);
    rep["validity_horizon"] = finite_or_null(r.horizon);
    rep["critical_modes"] = we.critical_modes();
    json diag = json::array();
    for (const auto& d : we.diagnostics()) diag.push_back({{"mode", d.mode}, {"indicator", finite_or_null(d.indicator)}});
    rep["conditioning"] = diag;
    const auto dratio = decomposition_ratio(r.trace);
    json fits = json::array();
    for (const auto& fc : sc.fits) fits.push_back(fit_json(fc, r.trace, dratio, r.horizon));
    rep["fits"] = fits;
    return r;
}

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

int cmd_audit(const Scenario& sc, const GlobalOptions& opts, std::ostream& log) {
    const FrictionSpec friction = build_friction(sc.friction);
    const AuditSection a = sc.audit.value_or(AuditSection{});
    const std::size_t n = a.samples ? a.samples : samples_per_decade(a.lo, a.hi);
    AuditOptions aopts;
    aopts.tolerance = a.tolerance;
    const HypothesisAudit res = audit(friction, a.lo, a.hi, n, a.delta, aopts);

    json rep;
    rep["friction"] = friction.name();
    rep["range"] = {a.lo, a.hi};
    rep["samples"] = n;
    rep["delta"] = a.delta;
    rep["gamma"] = res.gamma ? json(res.gamma->gamma) : json(nullptr);
    rep["crossings"] = res.crossings;
    if (sc.gamma.mode == "auto") {
        try {
            const auto c = find_crossover(friction, sc.gamma.lo, sc.gamma.hi);
            rep["bracket_crossover"] = {{"bracket", {sc.gamma.lo, sc.gamma.hi}},
                                        {"gamma", c.gamma},
                                        {"residual", c.residual},
                                        {"unique_on_sampled_range", c.unique_on_sampled_range}};
        } catch (const Error& e) {
            rep["bracket_crossover"] = {{"bracket", {sc.gamma.lo, sc.gamma.hi}}, {"error", e.what()}};
        }
    }
    rep["checks"] = {
        {"unique_crossing", res.gamma.has_value() && res.crossings.size() == 1},
        {"above_identity_below_gamma", res.below_ok},
        {"below_identity_above_gamma", res.above_ok},
        {"bounded_near_zero",
         {{"ok", res.bounded_near_zero},
          {"sup", finite_or_null(res.sup_near_zero)},
          {"log_slope", finite_or_null(res.near_zero_log_slope)}}},
        {"eventually_sublinear",
         {{"ok", res.liminf_ok},
          {"delta", a.delta},
          {"max_passing_delta", res.max_passing_delta ? json(*res.max_passing_delta) : json(nullptr)}}},
    };
    rep["all_ok"] = res.all_ok();
    json viol = json::array();
    for (const auto& v : res.violations) {
        viol.push_back({{"x", v.x}, {"fx", v.fx}, {"condition", to_string(v.condition)}, {"reference", v.reference}});
    }
    rep["violations"] = viol;
    if (const auto* k = std::get_if<KdvFriction>(&friction.kind())) {
        json kj;
        kj["numeric_crossover_s"] = res.gamma ? json(res.gamma->gamma) : json(nullptr);
        if (const auto x = kdv_cubic_crossover(*k)) {
            kj["printed_formula_x"] = *x;
            kj["printed_formula_s"] = kdv_s_symbol(*k, *x);
        } else {
            kj["printed_formula_x"] = nullptr;
            kj["printed_formula_s"] = nullptr;
        }
        kj["unique_crossover_condition"] = kdv_unique_crossover_condition(*k);
        rep["kdv"] = kj;
    }

    const auto path = output_path(opts, sc.outputs.report);
    write_file(path, rep.dump(2) + "\n");
    log << "audit: " << (res.all_ok() ? "all checks pass" : std::to_string(res.violations.size()) + " violation(s)")
        << ", report " << path.string() << "\n";
    return res.all_ok() ? kExitOk : kExitAudit;
}

int cmd_run(const Scenario& sc, const GlobalOptions& opts, std::ostream& log) {
    const Setup setup = prepare(sc);
    const auto times = require_times(sc);
    const RunResult r = evaluate_run(sc, setup, times, opts.workers);

    std::ostringstream csv;
    write_trace_csv(csv, r.trace);
    const auto trace_path = output_path(opts, sc.outputs.trace);
    write_file(trace_path, csv.str());
    json rep = r.report;
    rep["trace"] = sc.outputs.trace;
    const auto report_path = output_path(opts, sc.outputs.report);
    write_file(report_path, rep.dump(2) + "\n");
    log << "run: " << r.trace.size() << " samples, T* = " << format_double(r.horizon) << ", trace "
        << trace_path.string() << "\n";
    return kExitOk;
}

int cmd_compare(const Scenario& sc, const GlobalOptions& opts, std::ostream& log) {
    if (!sc.oracle) throw Error(ErrorCode::Config, "oracle: required by compare");
    const Setup setup = prepare(sc);
    const auto times = require_times(sc);
    const auto cfg = build_oracle(*sc.oracle);
    const auto we = prepare_wave(setup.grid, setup.f, setup.g, setup.gamma);

    struct Worst {
        double deviation = 0.0;
        std::size_t time_index = 0;
    };
    std::vector<Worst> per_mode(setup.grid.size());
    parallel_for(setup.grid.size(), opts.workers, [&](std::size_t i) {
        const auto ref = oracle::integrate_mode(setup.grid.s(i), setup.grid.b(i), setup.f[i], setup.g[i], times, cfg);
        Worst w;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const Complex u = we.value(i, times[k]);
            const Complex ud = we.velocity(i, times[k]);
            const double num = std::max(std::abs(u - ref[k].u), std::abs(ud - ref[k].u_dot));
            const double den = std::hypot(std::abs(u), std::abs(ud));
            const double dev = num / std::max(den, kCompareFloor);
            if (dev > w.deviation || std::isnan(dev)) w = {std::isnan(dev) ? INFINITY : dev, k};
        }
        per_mode[i] = w;
    });
    std::size_t worst_mode = 0;
    for (std::size_t i = 1; i < per_mode.size(); ++i) {
        if (per_mode[i].deviation > per_mode[worst_mode].deviation) worst_mode = i;
    }
    const Worst& w = per_mode[worst_mode];
    const double tol = sc.oracle->compare_tolerance;
    const bool passed = w.deviation <= tol;

    json rep;
    rep["max_deviation"] = finite_or_null(w.deviation);
    rep["at"] = {{"mode", worst_mode},
                 {"s", setup.grid.s(worst_mode)},
                 {"b", setup.grid.b(worst_mode)},
                 {"t", times[w.time_index]}};
    rep["tolerance"] = tol;
    rep["passed"] = passed;
    rep["modes"] = setup.grid.size();
    rep["times"] = times;
    rep["oracle"] = {{"method", sc.oracle->method}, {"step", sc.oracle->step}};
    const auto path = output_path(opts, sc.outputs.report);
    write_file(path, rep.dump(2) + "\n");
    log << "compare: max deviation " << format_double(w.deviation) << " (tolerance " << format_double(tol) << ")\n";
    return passed ? kExitOk : kExitTolerance;
}

int cmd_sweep(const Scenario& sc, const GlobalOptions& opts, std::ostream& log) {
    if (sc.sweep.empty()) throw Error(ErrorCode::Config, "sweep.axes: required by sweep");
    for (const auto& axis : sc.sweep) {
        // path check only; values are validated per cell
        try {
            (void)with_value(sc, axis.path, axis.values.front());
        } catch (const Error& e) {
            if (std::string(e.what()).find("no such field") != std::string::npos ||
                std::string(e.what()).find("numeric fields") != std::string::npos) {
                throw;
            }
        }
    }
    std::size_t cells = 1;
    for (const auto& axis : sc.sweep) cells *= axis.values.size();

    const bool traced = sc.grid && sc.data && sc.time;
    struct Row {
        std::vector<double> params;
        std::optional<double> gamma;
        std::optional<double> horizon;
        std::vector<std::optional<double>> rates;
        std::string error;
    };
    std::vector<Row> rows(cells);
    parallel_for(cells, opts.workers, [&](std::size_t cell) {
        Row& row = rows[cell];
        row.rates.assign(traced ? sc.fits.size() : 0, std::nullopt);
        std::size_t rest = cell;
        std::vector<std::size_t> idx(sc.sweep.size());
        for (std::size_t a = sc.sweep.size(); a-- > 0;) {
            idx[a] = rest % sc.sweep[a].values.size();
            rest /= sc.sweep[a].values.size();
        }
        try {
            Scenario cs = sc;
            for (std::size_t a = 0; a < sc.sweep.size(); ++a) {
                const double v = sc.sweep[a].values[idx[a]];
                row.params.push_back(v);
                cs = with_value(cs, sc.sweep[a].path, v);
            }
            if (!traced) {
                row.gamma = resolve_gamma(cs);
                return;
            }
            const Setup setup = prepare(cs);
            row.gamma = setup.gamma;
            const RunResult r = evaluate_run(cs, setup, build_times(*cs.time), 1);
            row.horizon = r.horizon;
            for (std::size_t k = 0; k < cs.fits.size(); ++k) {
                const auto& fj = r.report["fits"][k];
                if (fj.contains("rate")) row.rates[k] = fj["rate"].get<double>();
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });

    std::ostringstream csv;
    csv << "cell";
    for (const auto& axis : sc.sweep) csv << ',' << axis.path;
    csv << ",gamma" << (traced ? ",validity_horizon" : "");
    for (std::size_t k = 0; traced && k < sc.fits.size(); ++k) csv << ",fit" << k << "_rate";
    csv << ",status,message\n";
    std::size_t failures = 0;
    auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const Row& row = rows[cell];
        csv << cell;
        for (std::size_t a = 0; a < sc.sweep.size(); ++a) {
            csv << ',' << (a < row.params.size() ? format_double(row.params[a]) : std::string());
        }
        csv << ',' << opt(row.gamma);
        if (traced) csv << ',' << opt(row.horizon);
        for (const auto& r : row.rates) csv << ',' << opt(r);
        const bool ok = row.error.empty();
        failures += !ok;
        csv << ',' << (ok ? "ok" : "error") << ',' << csv_safe(row.error) << '\n';
    }
    const auto path = output_path(opts, sc.outputs.sweep);
    write_file(path, csv.str());
    log << "sweep: " << cells << " cell(s), " << failures << " failed, table " << path.string() << "\n";
    return failures == cells ? kExitFailure : kExitOk;
}

int run_command(const std::string& name, const GlobalOptions& opts, std::ostream& log, std::ostream& err) {
    try {
        Scenario sc = load_scenario(opts.config);
        if (opts.seed) override_seed(sc, *opts.seed);
        if (name == "audit") return cmd_audit(sc, opts, log);
        if (name == "run") return cmd_run(sc, opts, log);
        if (name == "compare") return cmd_compare(sc, opts, log);
        if (name == "sweep") return cmd_sweep(sc, opts, log);
        err << "unknown command " << name << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        switch (e.code()) {
            case ErrorCode::Config:
                err << e.what() << "\n";
                return kExitConfig;
            case ErrorCode::ZeroH:
                err << "canonical datum h is zero: the parabolic comparison is only defined provided h != 0 ("
                    << e.what() << ")\n";
                return kExitZeroH;
            default:
                err << "error: " << e.what() << "\n";
                return kExitFailure;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Spectral simulator for damped wave equations"};
    app.require_subcommand(1);
    GlobalOptions opts;
    std::uint64_t seed = 0;
    std::string config, out = ".";
    app.add_option("--config", config, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out, "Output directory");
    app.add_option("--workers", opts.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
    auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized data generators");
    const std::pair<const char*, const char*> commands[] = {
        {"audit", "Check the friction function against the structural hypotheses"},
        {"run", "Write the decay trace, rate fits and validity horizon"},
        {"compare", "Compare the closed-form solution with the RK4 oracle"},
        {"sweep", "Run the scenario over a grid of parameter values"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    opts.config = config;
    opts.out = out;
    if (seed_opt->count() > 0) opts.seed = seed;
    return run_command(app.get_subcommands().front()->get_name(), opts, std::cout, std::cerr);
}

}  // namespace dampwave::cli
