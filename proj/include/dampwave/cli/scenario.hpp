#pragma once

// Experiment description loaded from a JSON file. Plain value types so a
// parsed scenario can be compared, serialized and re-parsed verbatim.
// Unknown keys anywhere in the document are rejected.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dampwave/analysis.hpp"
#include "dampwave/evolution.hpp"
#include "dampwave/friction.hpp"
#include "dampwave/oracle.hpp"
#include "dampwave/spectral.hpp"

namespace dampwave::cli {

struct FrictionConfig {
    std::string kind = "constant";  // constant | power | kdv | table
    double a = 1.0;
    double alpha = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
    std::vector<double> s;
    std::vector<double> b;

    bool operator==(const FrictionConfig&) const = default;
};

struct GridConfig {
    std::string kind = "friction";  // friction | fourier | kdv | file
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    std::string spacing = "linear";  // linear | log
    std::string weights = "trapezoid";  // trapezoid | uniform
    double w = 1.0;  // fourier only
    int k = 1;       // fourier only
    std::string path;  // file only

    bool operator==(const GridConfig&) const = default;
};

struct ShapeConfig {
    std::string kind = "zero";  // zero | indicator | gaussian | point | random | file
    double lo = 0.0;
    std::optional<double> hi;  // absent: +infinity
    bool lo_closed = true;
    bool hi_closed = false;
    double center = 0.0;
    double width = 1.0;
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::string path;

    bool operator==(const ShapeConfig&) const = default;
};

struct DataConfig {
    ShapeConfig f;
    ShapeConfig g;

    bool operator==(const DataConfig&) const = default;
};

struct GammaConfig {
    std::string mode = "auto";  // auto | value
    double value = 0.0;
    double lo = 0.0;  // auto: crossover bracket
    double hi = 0.0;

    bool operator==(const GammaConfig&) const = default;
};

struct TimeConfig {
    std::string spacing = "linear";  // linear | log | list
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t count = 2;
    std::vector<double> values;  // list only

    bool operator==(const TimeConfig&) const = default;
};

struct FitConfig {
    std::string target = "ratio";  // ratio | decomposition
    std::string model = "exponential";  // exponential | power
    double lo = 0.0;
    double hi = 0.0;
    bool clip_to_horizon = false;

    bool operator==(const FitConfig&) const = default;
};

struct OutputsConfig {
    std::string trace = "trace.csv";
    std::string report = "report.json";
    std::string sweep = "sweep.csv";

    bool operator==(const OutputsConfig&) const = default;
};

struct OracleSection {
    std::string method = "rk4-fixed";  // rk4-fixed | rk4-adaptive
    double step = 0.0;
    double adaptive_tolerance = 1e-10;
    double compare_tolerance = 1e-6;

    bool operator==(const OracleSection&) const = default;
};

struct AuditSection {
    double lo = 1e-3;
    double hi = 1e3;
    std::size_t samples = 0;  // 0: 512 per decade
    double delta = 0.01;
    double tolerance = 1e-12;

    bool operator==(const AuditSection&) const = default;
};

struct SweepAxis {
    std::string path;  // dotted key, e.g. "friction.alpha"
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

struct Scenario {
    FrictionConfig friction;
    std::optional<GridConfig> grid;
    std::optional<DataConfig> data;
    GammaConfig gamma;
    std::optional<TimeConfig> time;
    std::vector<FitConfig> fits;
    OutputsConfig outputs;
    std::optional<OracleSection> oracle;
    std::optional<AuditSection> audit;
    std::string h_formula = "derived";  // derived | literal
    std::vector<SweepAxis> sweep;

    bool operator==(const Scenario&) const = default;
};

/// Parses JSON text. Relative file paths are resolved against base_dir and
/// must exist. Throws Error(Config) naming the offending field, or the line
/// and column of a syntax error.
[[nodiscard]] Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});

/// Reads and parses a file, resolving paths against its directory.
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// Pretty-printed JSON that parse_scenario maps back to an equal scenario.
[[nodiscard]] std::string to_json_text(const Scenario& sc);

/// Replaces the numeric field at a dotted path and re-validates.
[[nodiscard]] Scenario with_value(const Scenario& sc, const std::string& path, double value);

// Builders from the plain config into library objects.
[[nodiscard]] FrictionSpec build_friction(const FrictionConfig& c);
/// Throws Config when the scenario has no grid section.
[[nodiscard]] SpectralGrid build_grid(const Scenario& sc);
[[nodiscard]] DataShape build_shape(const ShapeConfig& c);
[[nodiscard]] std::vector<double> build_times(const TimeConfig& c);
[[nodiscard]] HFormula build_h_formula(const std::string& name);
[[nodiscard]] oracle::OracleConfig build_oracle(const OracleSection& c);
[[nodiscard]] FitModel build_fit_model(const std::string& name);

/// Fixed value, or the crossover inside the configured bracket.
[[nodiscard]] double resolve_gamma(const Scenario& sc);

/// Replaces the seed of every random shape: f gets seed, g gets seed + 1.
void override_seed(Scenario& sc, std::uint64_t seed);

}  // namespace dampwave::cli
