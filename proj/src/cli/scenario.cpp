#include "dampwave/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dampwave/error.hpp"

namespace dampwave::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::Config, where + ": " + what);
}

// Strict view of one JSON object: every key must be consumed before finish().
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) config_error(path_, "expected an object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

    [[nodiscard]] std::string where(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& raw(const std::string& key) {
        if (!j_.contains(key)) config_error(where(key), "missing");
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) config_error(where(key), "expected a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::uint64_t unsigned_integer(const std::string& key) {
        const json& v = raw(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0.0 && d == std::floor(d) && d < 0x1p64) return static_cast<std::uint64_t>(d);
        }
        config_error(where(key), "expected a nonnegative integer");
    }
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        return has(key) ? unsigned_integer(key) : fallback;
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) config_error(where(key), "expected true or false");
        return v.get<bool>();
    }

    std::string text(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) config_error(where(key), "expected a string");
        return v.get<std::string>();
    }
    std::string text(const std::string& key, const std::string& fallback) { return has(key) ? text(key) : fallback; }

    std::string choice(const std::string& key, const std::string& fallback, std::initializer_list<const char*> allowed) {
        const std::string v = text(key, fallback);
        for (const char* a : allowed) {
            if (v == a) return v;
        }
        std::string list;
        for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        config_error(where(key), "'" + v + "' is not one of " + list);
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) config_error(where(key), "expected an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) config_error(where(key), "expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    std::pair<double, double> range(const std::string& key) {
        const auto v = numbers(key);
        if (v.size() != 2) config_error(where(key), "expected [lo, hi]");
        if (!(v[0] < v[1])) config_error(where(key), "needs lo < hi");
        return {v[0], v[1]};
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) config_error(where(item.key()), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string resolve_path(const std::string& p, const std::filesystem::path& base, const std::string& where) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) path = base / path;
    path = path.lexically_normal();
    if (!std::filesystem::exists(path)) config_error(where, "file not found: " + path.string());
    return path.string();
}

void require_positive(double v, const std::string& where) {
    if (!(std::isfinite(v) && v > 0.0)) config_error(where, "must be positive");
}

FrictionConfig parse_friction(const json& j) {
    Section sec(j, "friction");
    FrictionConfig c;
    c.kind = sec.choice("kind", "", {"constant", "power", "kdv", "table"});
    if (c.kind == "table") {
        c.s = sec.numbers("s");
        c.b = sec.numbers("b");
    } else {
        c.a = sec.number("a");
        if (c.kind == "power") c.alpha = sec.number("alpha");
        if (c.kind == "kdv") {
            c.a0 = sec.number("a0", 0.0);
            c.a1 = sec.number("a1", 0.0);
        }
    }
    sec.finish();
    try {
        (void)build_friction(c);
    } catch (const Error& e) {
        config_error("friction", e.what());
    }
    return c;
}

GridConfig parse_grid(const json& j, const FrictionConfig& friction, const std::filesystem::path& base) {
    Section sec(j, "grid");
    GridConfig c;
    c.kind = sec.choice("kind", "friction", {"friction", "fourier", "kdv", "file"});
    if (c.kind == "file") {
        c.path = resolve_path(sec.text("path"), base, "grid.path");
        sec.finish();
        return c;
    }
    std::tie(c.lo, c.hi) = sec.range("range");
    c.count = sec.unsigned_integer("count");
    if (c.count < 1) config_error("grid.count", "must be at least 1");
    c.spacing = sec.choice("spacing", "linear", {"linear", "log"});
    c.weights = sec.choice("weights", "trapezoid", {"trapezoid", "uniform"});
    const bool zero_lo_ok = c.kind == "fourier" && c.spacing == "linear";
    if (!(c.lo > 0.0 || (zero_lo_ok && c.lo == 0.0))) config_error("grid.range", "lower end out of domain");
    if (c.kind == "fourier") {
        if (friction.kind != "power" && friction.kind != "constant") {
            config_error("grid.kind", "fourier grids need power or constant friction");
        }
        c.w = sec.number("w");
        require_positive(c.w, "grid.w");
        const auto k = sec.unsigned_integer("k");
        if (k < 1 || k > 64) config_error("grid.k", "must be in 1..64");
        c.k = static_cast<int>(k);
    }
    if (c.kind == "kdv" && friction.kind != "kdv") config_error("grid.kind", "kdv grids need kdv friction");
    sec.finish();
    return c;
}

ShapeConfig parse_shape(const json& j, const std::string& where, const std::filesystem::path& base) {
    Section sec(j, where);
    ShapeConfig c;
    c.kind = sec.choice("kind", "", {"zero", "indicator", "gaussian", "point", "random", "file"});
    if (c.kind == "indicator") {
        c.lo = sec.number("lo", 0.0);
        if (sec.has("hi")) c.hi = sec.number("hi");
        c.lo_closed = sec.boolean("lo_closed", true);
        c.hi_closed = sec.boolean("hi_closed", false);
        if (c.lo < 0.0 || (c.hi && !(*c.hi >= c.lo))) config_error(where, "needs 0 <= lo <= hi");
    } else if (c.kind == "gaussian") {
        c.center = sec.number("center");
        c.width = sec.number("width");
        require_positive(c.width, where + ".width");
    } else if (c.kind == "point") {
        c.index = sec.unsigned_integer("index");
    } else if (c.kind == "random") {
        c.seed = sec.unsigned_integer("seed", 0);
    } else if (c.kind == "file") {
        c.path = resolve_path(sec.text("path"), base, where + ".path");
    }
    sec.finish();
    return c;
}

GammaConfig parse_gamma(const json& j) {
    Section sec(j, "gamma");
    GammaConfig c;
    c.mode = sec.choice("mode", "auto", {"auto", "value"});
    if (c.mode == "value") {
        c.value = sec.number("value");
        require_positive(c.value, "gamma.value");
    } else {
        if (!sec.has("bracket")) config_error("gamma.bracket", "required when mode is auto");
        std::tie(c.lo, c.hi) = sec.range("bracket");
        require_positive(c.lo, "gamma.bracket");
    }
    sec.finish();
    return c;
}

TimeConfig parse_time(const json& j) {
    Section sec(j, "time");
    TimeConfig c;
    c.spacing = sec.choice("spacing", "linear", {"linear", "log", "list"});
    if (c.spacing == "list") {
        c.values = sec.numbers("values");
        c.t0 = 0.0;
        c.t1 = 1.0;
        c.count = 2;
        if (c.values.size() < 2) config_error("time.values", "needs at least 2 times");
        for (std::size_t i = 0; i < c.values.size(); ++i) {
            if (!(std::isfinite(c.values[i]) && c.values[i] >= 0.0)) config_error("time.values", "times must be >= 0");
            if (i > 0 && !(c.values[i] > c.values[i - 1])) config_error("time.values", "times must increase");
        }
    } else {
        std::tie(c.t0, c.t1) = sec.range("range");
        c.count = sec.unsigned_integer("count");
        if (c.count < 2) config_error("time.count", "must be at least 2");
        if (c.t0 < 0.0) config_error("time.range", "times must be >= 0");
        if (c.spacing == "log" && c.t0 <= 0.0) config_error("time.range", "log spacing needs t0 > 0");
    }
    sec.finish();
    return c;
}

FitConfig parse_fit(const json& j, const std::string& where) {
    Section sec(j, where);
    FitConfig c;
    c.target = sec.choice("target", "ratio", {"ratio", "decomposition"});
    c.model = sec.choice("model", "", {"exponential", "power"});
    std::tie(c.lo, c.hi) = sec.range("window");
    if (c.lo < 0.0 || (c.model == "power" && c.lo <= 0.0)) config_error(where + ".window", "lower end out of domain");
    c.clip_to_horizon = sec.boolean("clip_to_horizon", false);
    sec.finish();
    return c;
}

OutputsConfig parse_outputs(const json& j) {
    Section sec(j, "outputs");
    OutputsConfig c;
    c.trace = sec.text("trace", c.trace);
    c.report = sec.text("report", c.report);
    c.sweep = sec.text("sweep", c.sweep);
    sec.finish();
    return c;
}

OracleSection parse_oracle(const json& j) {
    Section sec(j, "oracle");
    OracleSection c;
    c.method = sec.choice("method", c.method, {"rk4-fixed", "rk4-adaptive"});
    c.step = sec.number("step", c.step);
    c.adaptive_tolerance = sec.number("adaptive_tolerance", c.adaptive_tolerance);
    c.compare_tolerance = sec.number("compare_tolerance", c.compare_tolerance);
    sec.finish();
    if (c.step < 0.0) config_error("oracle.step", "must be >= 0 (0 picks a default)");
    require_positive(c.compare_tolerance, "oracle.compare_tolerance");
    try {
        oracle::validate(build_oracle(c));
    } catch (const Error& e) {
        config_error("oracle", e.what());
    }
    return c;
}

AuditSection parse_audit(const json& j) {
    Section sec(j, "audit");
    AuditSection c;
    if (sec.has("range")) std::tie(c.lo, c.hi) = sec.range("range");
    c.samples = sec.unsigned_integer("samples", 0);
    c.delta = sec.number("delta", c.delta);
    c.tolerance = sec.number("tolerance", c.tolerance);
    sec.finish();
    require_positive(c.lo, "audit.range");
    if (!(c.delta >= 0.0 && c.delta < 1.0)) config_error("audit.delta", "must be in [0, 1)");
    if (!(c.tolerance >= 0.0)) config_error("audit.tolerance", "must be >= 0");
    if (c.samples == 1) config_error("audit.samples", "must be 0 or at least 2");
    return c;
}

std::vector<SweepAxis> parse_sweep(const json& j) {
    Section sec(j, "sweep");
    const json& axes = sec.raw("axes");
    sec.finish();
    if (!axes.is_array() || axes.empty()) config_error("sweep.axes", "needs at least one axis");
    std::vector<SweepAxis> out;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string where = "sweep.axes[" + std::to_string(i) + "]";
        Section ax(axes[i], where);
        SweepAxis a;
        a.path = ax.text("path");
        a.values = ax.numbers("values");
        ax.finish();
        if (a.values.empty()) config_error(where + ".values", "needs at least one value");
        out.push_back(std::move(a));
    }
    return out;
}

json shape_json(const ShapeConfig& c) {
    json j = {{"kind", c.kind}};
    if (c.kind == "indicator") {
        j["lo"] = c.lo;
        if (c.hi) j["hi"] = *c.hi;
        j["lo_closed"] = c.lo_closed;
        j["hi_closed"] = c.hi_closed;
    } else if (c.kind == "gaussian") {
        j["center"] = c.center;
        j["width"] = c.width;
    } else if (c.kind == "point") {
        j["index"] = c.index;
    } else if (c.kind == "random") {
        j["seed"] = c.seed;
    } else if (c.kind == "file") {
        j["path"] = c.path;
    }
    return j;
}

json scenario_json(const Scenario& sc) {
    json j;
    const auto& f = sc.friction;
    json fj = {{"kind", f.kind}};
    if (f.kind == "table") {
        fj["s"] = f.s;
        fj["b"] = f.b;
    } else {
        fj["a"] = f.a;
        if (f.kind == "power") fj["alpha"] = f.alpha;
        if (f.kind == "kdv") {
            fj["a0"] = f.a0;
            fj["a1"] = f.a1;
        }
    }
    j["friction"] = fj;

    if (sc.grid) {
        const auto& g = *sc.grid;
        json gj = {{"kind", g.kind}};
        if (g.kind == "file") {
            gj["path"] = g.path;
        } else {
            gj["range"] = {g.lo, g.hi};
            gj["count"] = g.count;
            gj["spacing"] = g.spacing;
            gj["weights"] = g.weights;
            if (g.kind == "fourier") {
                gj["w"] = g.w;
                gj["k"] = g.k;
            }
        }
        j["grid"] = gj;
    }
    if (sc.data) j["data"] = {{"f", shape_json(sc.data->f)}, {"g", shape_json(sc.data->g)}};

    if (sc.gamma.mode == "value") {
        j["gamma"] = {{"mode", "value"}, {"value", sc.gamma.value}};
    } else {
        j["gamma"] = {{"mode", "auto"}, {"bracket", {sc.gamma.lo, sc.gamma.hi}}};
    }

    if (sc.time) {
        const auto& t = *sc.time;
        if (t.spacing == "list") {
            j["time"] = {{"spacing", "list"}, {"values", t.values}};
        } else {
            j["time"] = {{"spacing", t.spacing}, {"range", {t.t0, t.t1}}, {"count", t.count}};
        }
    }
    if (!sc.fits.empty()) {
        json fits = json::array();
        for (const auto& fit : sc.fits) {
            fits.push_back({{"target", fit.target},
                            {"model", fit.model},
                            {"window", {fit.lo, fit.hi}},
                            {"clip_to_horizon", fit.clip_to_horizon}});
        }
        j["fits"] = fits;
    }
    j["outputs"] = {{"trace", sc.outputs.trace}, {"report", sc.outputs.report}, {"sweep", sc.outputs.sweep}};
    if (sc.oracle) {
        const auto& o = *sc.oracle;
        j["oracle"] = {{"method", o.method},
                       {"step", o.step},
                       {"adaptive_tolerance", o.adaptive_tolerance},
                       {"compare_tolerance", o.compare_tolerance}};
    }
    if (sc.audit) {
        const auto& a = *sc.audit;
        j["audit"] = {{"range", {a.lo, a.hi}}, {"samples", a.samples}, {"delta", a.delta}, {"tolerance", a.tolerance}};
    }
    j["h_formula"] = sc.h_formula;
    if (!sc.sweep.empty()) {
        json axes = json::array();
        for (const auto& a : sc.sweep) axes.push_back({{"path", a.path}, {"values", a.values}});
        j["sweep"] = {{"axes", axes}};
    }
    return j;
}

Scenario scenario_from_json(const json& doc, const std::filesystem::path& base) {
    Section top(doc, "");
    Scenario sc;
    sc.friction = parse_friction(top.raw("friction"));
    if (top.has("grid")) sc.grid = parse_grid(top.raw("grid"), sc.friction, base);
    if (top.has("data")) {
        Section d(top.raw("data"), "data");
        DataConfig dc;
        dc.f = parse_shape(d.raw("f"), "data.f", base);
        dc.g = d.has("g") ? parse_shape(d.raw("g"), "data.g", base) : ShapeConfig{};
        d.finish();
        sc.data = dc;
    }
    sc.gamma = parse_gamma(top.raw("gamma"));
    if (top.has("time")) sc.time = parse_time(top.raw("time"));
    if (top.has("fits")) {
        const json& fits = top.raw("fits");
        if (!fits.is_array()) config_error("fits", "expected an array");
        for (std::size_t i = 0; i < fits.size(); ++i) {
            sc.fits.push_back(parse_fit(fits[i], "fits[" + std::to_string(i) + "]"));
        }
    }
    if (top.has("outputs")) sc.outputs = parse_outputs(top.raw("outputs"));
    if (top.has("oracle")) sc.oracle = parse_oracle(top.raw("oracle"));
    if (top.has("audit")) sc.audit = parse_audit(top.raw("audit"));
    sc.h_formula = top.choice("h_formula", "derived", {"derived", "literal"});
    if (top.has("sweep")) sc.sweep = parse_sweep(top.raw("sweep"));
    top.finish();
    return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Config, std::string("syntax: ") + e.what());
    }
    return scenario_from_json(doc, base_dir);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Config, "cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), std::filesystem::absolute(path).parent_path());
}

std::string to_json_text(const Scenario& sc) { return scenario_json(sc).dump(2) + "\n"; }

Scenario with_value(const Scenario& sc, const std::string& path, double value) {
    json doc = scenario_json(sc);
    json* node = &doc;
    std::string::size_type start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (node->is_object() && node->contains(key)) {
            node = &(*node)[key];
        } else if (node->is_array() && !key.empty() && key.find_first_not_of("0123456789") == std::string::npos &&
                   std::stoul(key) < node->size()) {
            node = &(*node)[std::stoul(key)];
        } else {
            config_error(path, "no such field in this scenario");
        }
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (!node->is_number()) config_error(path, "sweep axes must point at numeric fields");
    if (node->is_number_integer() && value == std::floor(value) && value >= 0.0) {
        *node = static_cast<std::uint64_t>(value);
    } else {
        *node = value;
    }
    return scenario_from_json(doc, {});
}

FrictionSpec build_friction(const FrictionConfig& c) {
    if (c.kind == "constant") return FrictionSpec::constant(c.a);
    if (c.kind == "power") return FrictionSpec::power(c.a, c.alpha);
    if (c.kind == "kdv") return FrictionSpec::kdv(c.a, c.a0, c.a1);
    if (c.kind == "table") return FrictionSpec::table(c.s, c.b);
    config_error("friction.kind", "unknown kind " + c.kind);
}

SpectralGrid build_grid(const Scenario& sc) {
    if (!sc.grid) config_error("grid", "required by this command");
    const auto& g = *sc.grid;
    if (g.kind == "file") return read_grid_csv(std::filesystem::path(g.path)).grid;
    const Spacing spacing = g.spacing == "log" ? Spacing::Log : Spacing::Linear;
    const WeightRule weights = g.weights == "uniform" ? WeightRule::Uniform : WeightRule::Trapezoid;
    const auto& f = sc.friction;
    if (g.kind == "fourier") {
        const double alpha = f.kind == "power" ? f.alpha : 0.0;
        return grid_from_fourier_symbol(g.w, g.k, f.a, alpha, g.lo, g.hi, g.count, spacing, weights);
    }
    if (g.kind == "kdv") return grid_from_kdv_symbols(f.a, f.a0, f.a1, g.lo, g.hi, g.count, spacing, weights);
    return grid_from_friction(build_friction(f), g.lo, g.hi, g.count, spacing, weights);
}

DataShape build_shape(const ShapeConfig& c) {
    if (c.kind == "indicator") {
        return IndicatorShape{Band::make(c.lo, c.hi.value_or(std::numeric_limits<double>::infinity()), c.lo_closed,
                                         c.hi_closed)};
    }
    if (c.kind == "gaussian") return GaussianShape{c.center, c.width};
    if (c.kind == "point") return PointShape{c.index};
    if (c.kind == "random") return RandomShape{c.seed};
    if (c.kind == "file") return FileShape{c.path};
    return ZeroShape{};
}

std::vector<double> build_times(const TimeConfig& c) {
    if (c.spacing == "list") return c.values;
    std::vector<double> t(c.count);
    const double n = static_cast<double>(c.count - 1);
    for (std::size_t i = 0; i < c.count; ++i) {
        const double x = static_cast<double>(i) / n;
        t[i] = c.spacing == "log" ? c.t0 * std::pow(c.t1 / c.t0, x) : c.t0 + (c.t1 - c.t0) * x;
    }
    t.front() = c.t0;
    t.back() = c.t1;
    return t;
}

HFormula build_h_formula(const std::string& name) {
    return name == "literal" ? HFormula::Literal : HFormula::Derived;
}

oracle::OracleConfig build_oracle(const OracleSection& c) {
    oracle::OracleConfig cfg;
    cfg.method = c.method == "rk4-adaptive" ? oracle::Method::Rk4Adaptive : oracle::Method::Rk4Fixed;
    cfg.step = c.step;
    cfg.tolerance = c.adaptive_tolerance;
    return cfg;
}

FitModel build_fit_model(const std::string& name) {
    return name == "power" ? FitModel::Power : FitModel::Exponential;
}

double resolve_gamma(const Scenario& sc) {
    if (sc.gamma.mode == "value") return sc.gamma.value;
    return find_crossover(build_friction(sc.friction), sc.gamma.lo, sc.gamma.hi).gamma;
}

void override_seed(Scenario& sc, std::uint64_t seed) {
    if (!sc.data) return;
    if (sc.data->f.kind == "random") sc.data->f.seed = seed;
    if (sc.data->g.kind == "random") sc.data->g.seed = seed + 1;
}

}  // namespace dampwave::cli
