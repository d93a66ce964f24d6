#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dampwave/cli/commands.hpp"
#include "dampwave/cli/scenario.hpp"
#include "dampwave/error.hpp"

using namespace dampwave;
using namespace dampwave::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kPresets = DAMPWAVE_PRESET_DIR;

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("dampwave_cli_" + std::to_string(::getpid())) / name;
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "scenario.json";
    std::ofstream(p) << text;
    return p;
}

int run(const std::string& cmd, const fs::path& config, const fs::path& out, unsigned workers = 1) {
    GlobalOptions opts;
    opts.config = config;
    opts.out = out;
    opts.workers = workers;
    std::ostringstream log, err;
    const int code = run_command(cmd, opts, log, err);
    if (!err.str().empty()) MESSAGE(err.str());
    return code;
}

std::string config_message(const std::string& text) {
    try {
        (void)parse_scenario(text);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        return e.what();
    }
    FAIL("expected a config error");
    return {};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> row;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

const char* kSmallTelegraph = R"({
  "friction": {"kind": "constant", "a": 1},
  "grid": {"kind": "friction", "range": [0.05, 3], "count": 64},
  "data": {"f": {"kind": "random", "seed": 1}, "g": {"kind": "random", "seed": 2}},
  "gamma": {"mode": "auto", "bracket": [0.5, 2]},
  "time": {"spacing": "list", "values": [0.1, 1, 10]},
  "fits": [{"model": "exponential", "window": [0.1, 10]}],
  "oracle": {"compare_tolerance": 1e-6}
})";

}  // namespace

TEST_CASE("presets round-trip through serialization") {
    for (const auto& entry : fs::directory_iterator(kPresets)) {
        CAPTURE(entry.path().string());
        const Scenario sc = load_scenario(entry.path());
        const Scenario again = parse_scenario(to_json_text(sc));
        CHECK(again == sc);
        CHECK(to_json_text(again) == to_json_text(sc));
    }
}

TEST_CASE("config validation") {
    CHECK(config_message(R"({"friction": {"kind": "constant", "a": 1}, "gamma": {"mode": "value", "value": 1},
                             "extra": 3})")
              .find("extra: unknown key") != std::string::npos);
    CHECK(config_message(R"({"friction": {"kind": "constant", "a": 1, "alhpa": 2},
                             "gamma": {"mode": "value", "value": 1}})")
              .find("friction.alhpa") != std::string::npos);
    CHECK(config_message(R"({"friction": {"kind": "constant", "a": 1}, "gamma": {"mode": "auto"}})")
              .find("gamma.bracket") != std::string::npos);
    CHECK(config_message("{\"friction\": {\n \"kind\": }").find("line 2") != std::string::npos);
    CHECK(config_message(R"({"friction": {"kind": "power", "a": 1, "alpha": 1.5}, "gamma": {"mode": "value", "value": 1}})")
              .find("friction") != std::string::npos);
    CHECK(config_message(R"({"friction": {"kind": "constant", "a": 1}, "gamma": {"mode": "value", "value": 1},
                             "time": {"range": [0, 1], "count": 1}})")
              .find("time.count") != std::string::npos);
    CHECK(config_message(R"({"friction": {"kind": "constant", "a": 1}, "gamma": {"mode": "value", "value": 1},
                             "time": {"range": [2, 1], "count": 5}})")
              .find("time.range") != std::string::npos);
    CHECK(config_message(R"({"friction": {"kind": "constant", "a": 1}, "gamma": {"mode": "value", "value": 1},
                             "sweep": {"axes": []}})")
              .find("sweep.axes") != std::string::npos);
    CHECK(config_message(R"({"friction": {"kind": "constant", "a": 1}, "gamma": {"mode": "value", "value": 1},
                             "grid": {"kind": "file", "path": "/nonexistent/grid.csv"}})")
              .find("file not found") != std::string::npos);
    CHECK(config_message(R"({"friction": {"kind": "constant", "a": 1}, "gamma": {"mode": "value", "value": 1},
                             "grid": {"kind": "friction", "range": [0.1, 1], "count": 4, "w": 2}})")
              .find("grid.w: unknown key") != std::string::npos);
}

TEST_CASE("with_value") {
    const Scenario sc = parse_scenario(kSmallTelegraph);
    CHECK(with_value(sc, "friction.a", 2.0).friction.a == 2.0);
    CHECK(with_value(sc, "grid.count", 10.0).grid->count == 10);
    CHECK(with_value(sc, "grid.range.1", 4.0).grid->hi == 4.0);
    CHECK_THROWS_AS((void)with_value(sc, "friction.alpha", 0.5), Error);
    CHECK_THROWS_AS((void)with_value(sc, "grid.spacing", 1.0), Error);
    CHECK_THROWS_AS((void)with_value(sc, "friction.a", -1.0), Error);
}

TEST_CASE("audit exit codes") {
    const auto out = scratch("audit");
    CHECK(run("audit", kPresets / "telegraph-lowfreq.json", out) == kExitOk);
    CHECK(run("audit", kPresets / "kdv-audit.json", out) == kExitAudit);
    const std::string report = slurp(out / "kdv-audit.json");
    CHECK(report.find("\"condition\": \"above_identity_below_gamma\"") != std::string::npos);
    CHECK(report.find("printed_formula_x") != std::string::npos);
    const auto bad = write_config(scratch("audit_bad"), R"({"friction": {"kind": "constant", "a": 1},
                                                         "gamma": {"mode": "auto"}})");
    CHECK(run("audit", bad, out) == kExitConfig);
}

TEST_CASE("run") {
    const auto dir = scratch("run");
    const auto cfg = write_config(dir, kSmallTelegraph);
    CHECK(run("run", cfg, dir / "a", 1) == kExitOk);
    CHECK(run("run", cfg, dir / "b", 8) == kExitOk);
    const std::string csv = slurp(dir / "a" / "trace.csv");
    CHECK(csv.rfind("t,norm_u,norm_v,norm_diff,ratio,norm_u1,norm_u2,norm_u3\n", 0) == 0);
    CHECK(csv == slurp(dir / "b" / "trace.csv"));
    CHECK(slurp(dir / "a" / "report.json").find("validity_horizon") != std::string::npos);

    // data above gamma: h vanishes
    const auto high = write_config(scratch("run_high"), R"({
      "friction": {"kind": "constant", "a": 1},
      "grid": {"kind": "friction", "range": [0.05, 3], "count": 64},
      "data": {"f": {"kind": "indicator", "lo": 1.5}, "g": {"kind": "indicator", "lo": 1.5}},
      "gamma": {"mode": "value", "value": 1},
      "time": {"range": [0, 10], "count": 11}
    })");
    CHECK(run("run", high, dir / "c") == kExitZeroH);

    // no time section
    const auto no_time = write_config(scratch("run_no_time"), R"({
      "friction": {"kind": "constant", "a": 1},
      "grid": {"kind": "friction", "range": [0.05, 3], "count": 8},
      "data": {"f": {"kind": "random"}},
      "gamma": {"mode": "value", "value": 1}
    })");
    CHECK(run("run", no_time, dir / "d") == kExitConfig);
}

TEST_CASE("compare") {
    const auto dir = scratch("compare");
    CHECK(run("compare", write_config(dir, kSmallTelegraph), dir) == kExitOk);

    std::string tight = kSmallTelegraph;
    tight.replace(tight.find("1e-6"), 4, "1e-15");
    CHECK(run("compare", write_config(scratch("compare_tight"), tight), dir) == kExitTolerance);

    std::string zero = kSmallTelegraph;
    zero.replace(zero.find(R"({"kind": "random", "seed": 1})"), 29, R"({"kind": "zero"})");
    zero.replace(zero.find(R"({"kind": "random", "seed": 2})"), 29, R"({"kind": "zero"})");
    const auto zdir = scratch("compare_zero");
    CHECK(run("compare", write_config(zdir, zero), zdir) == kExitOk);
    CHECK(slurp(zdir / "report.json").find("\"max_deviation\": 0.0") != std::string::npos);
}

TEST_CASE("sweep") {
    const auto dir = scratch("sweep");
    CHECK(run("sweep", kPresets / "power-damping.json", dir) == kExitOk);
    const auto rows = read_csv(dir / "power-damping-sweep.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][2] == "friction.alpha");
    CHECK(rows[0][3] == "gamma");
    for (std::size_t r = 1; r < 4; ++r) {
        CHECK(rows[r][3] == "1");
        CHECK(rows[r][rows[r].size() - 1 - (rows[r].back() == "ok" ? 0 : 1)].size() > 0);
    }

    const auto grid2 = write_config(scratch("sweep22"), R"({
      "friction": {"kind": "power", "a": 1, "alpha": 0},
      "gamma": {"mode": "auto", "bracket": [0.1, 100]},
      "sweep": {"axes": [{"path": "friction.a", "values": [1, 2]}, {"path": "friction.alpha", "values": [0, 0.5]}]}
    })");
    CHECK(run("sweep", grid2, dir) == kExitOk);
    const auto rows22 = read_csv(dir / "sweep.csv");
    REQUIRE(rows22.size() == 5);
    CHECK(rows22[4][3] == "4");  // a = 2, alpha = 0.5

    // one invalid cell is recorded in its row
    const auto partial = write_config(scratch("sweep_partial"), R"({
      "friction": {"kind": "power", "a": 1, "alpha": 0},
      "gamma": {"mode": "auto", "bracket": [0.1, 100]},
      "sweep": {"axes": [{"path": "friction.alpha", "values": [0.5, 1.5]}]}
    })");
    CHECK(run("sweep", partial, dir) == kExitOk);
    const auto prow = read_csv(dir / "sweep.csv");
    REQUIRE(prow.size() == 3);
    CHECK(prow[1][3] == "ok");
    CHECK(prow[2][3] == "error");

    const auto all_bad = write_config(scratch("sweep_bad"), R"({
      "friction": {"kind": "power", "a": 1, "alpha": 0},
      "gamma": {"mode": "auto", "bracket": [0.1, 100]},
      "sweep": {"axes": [{"path": "friction.alpha", "values": [1.5, 2]}]}
    })");
    CHECK(run("sweep", all_bad, dir) == kExitFailure);

    const auto bad_path = write_config(scratch("sweep_path"), R"({
      "friction": {"kind": "power", "a": 1, "alpha": 0},
      "gamma": {"mode": "auto", "bracket": [0.1, 100]},
      "sweep": {"axes": [{"path": "friction.beta", "values": [1]}]}
    })");
    CHECK(run("sweep", bad_path, dir) == kExitConfig);
    CHECK(run("sweep", kPresets / "kdv-audit.json", dir) == kExitConfig);
}

TEST_CASE("seed override only touches random shapes") {
    Scenario sc = parse_scenario(kSmallTelegraph);
    override_seed(sc, 42);
    CHECK(sc.data->f.seed == 42);
    CHECK(sc.data->g.seed == 43);
    Scenario fixed = load_scenario(kPresets / "band-single-mode.json");
    const Scenario before = fixed;
    override_seed(fixed, 42);
    CHECK(fixed == before);
}
