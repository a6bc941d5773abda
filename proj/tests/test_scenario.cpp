#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rotbath/runner.hpp"
#include "rotbath/scenario.hpp"

using namespace rotbath;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(
[bath]
beta = 2

[modes]
omega = [1.5]
m = [1]

[run]
kind = rates
)";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::map<std::string, std::string> digests(const RunReport& report) {
    std::map<std::string, std::string> out;
    for (const auto& f : report.files) out[fs::path(f).filename().string()] = sha256_hex(slurp(f));
    return out;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("rotbath_unit_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    bool header = true;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream cs(line);
        for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("minimal scenario gets documented defaults") {
    const Scenario s = parse_scenario(kMinimal);
    REQUIRE(s.bath);
    CHECK(s.bath->family == SpectrumFamily::Ohmic);
    CHECK(s.bath->amplitude == 1.0);
    CHECK(s.bath->cutoff == 10.0);
    CHECK(s.bath->beta == 2.0);
    CHECK(s.bath->omega_rot == 0.0);
    REQUIRE(s.modes);
    CHECK(s.modes->alpha == std::vector<std::string>{"0"});
    CHECK(s.modes->statistics == std::vector<Statistics>{Statistics::Bose});
    CHECK(s.run.kind == RunKind::Rates);
    CHECK(s.run.t_max == 10.0);
    CHECK(s.run.points == 101);
    CHECK(s.run.kappa == 0.0);
    CHECK(s.run.tail_tol == 1e-10);
    CHECK_FALSE(s.run.seed.has_value());
    CHECK(s.output.dir == "out");
    CHECK(s.output.format == "csv");
}

TEST_CASE("infinite beta round-trips") {
    std::string text = kMinimal;
    text.replace(text.find("beta = 2"), 8, "beta = inf");
    const Scenario s = parse_scenario(text);
    CHECK(std::isinf(s.bath->beta));
    CHECK(make_bath(*s.bath).beta().is_infinite());
    const std::string printed = print_scenario(s);
    CHECK(printed.find("beta = inf") != std::string::npos);
    CHECK(parse_scenario(printed) == s);
    text.replace(text.find("beta = inf"), 10, "beta = \"inf\"");
    CHECK(parse_scenario(text) == s);
}

TEST_CASE("round trip over the shipped corpus") {
    for (const auto& entry : fs::directory_iterator(ROTBATH_SCENARIO_DIR)) {
        if (entry.path().extension() != ".scn") continue;
        CAPTURE(entry.path().string());
        const Scenario s = read_scenario_file(entry.path().string());
        const Scenario again = parse_scenario(print_scenario(s));
        CHECK(again == s);
        CHECK(print_scenario(again) == print_scenario(s));
    }
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse_scenario("[bath]\nbeta = 1\n[run\n");
        FAIL("expected a syntax error");
    } catch (const ScenarioSyntaxError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(parse_scenario("beta = 1\n"), ScenarioSyntaxError);
    CHECK_THROWS_AS(parse_scenario("[run]\nkind = rates\nkind = rates\n"), ScenarioSyntaxError);
    CHECK_THROWS_AS(parse_scenario("[run]\nkind = rates extra\n"), ScenarioSyntaxError);
    CHECK_THROWS_AS(parse_scenario("[run]\nkind = \"rates\n"), ScenarioSyntaxError);
}

TEST_CASE("semantic errors name the key") {
    auto key_of = [](const std::string& text) {
        try {
            parse_scenario(text);
        } catch (const ScenarioError& e) {
            return e.key();
        }
        return std::string("none");
    };
    const std::string base = kMinimal;
    CHECK(key_of(base + "kappa = -0.5\n") == "run.kappa");
    CHECK(key_of(base + "colour = 3\n") == "run.colour");
    CHECK(key_of(base + "[extras]\nx = 1\n") == "extras");
    std::string gill = base;
    gill.replace(gill.find("kind = rates"), 12, "kind = gillespie");
    CHECK(key_of(gill) == "run.seed");
    CHECK(key_of(gill + "seed = 4\n") == "none");
    CHECK(parse_scenario(gill, ParseOverrides{7}).run.seed == 7u);
    CHECK(key_of("[run]\nkind = rates\n") == "bath");
    CHECK(key_of("[run]\nkind = warp\n") == "run.kind");
    CHECK(key_of(base + "t_max = fast\n") == "run.t_max");
}

TEST_CASE("grid modes are sorted with alpha 0") {
    const Scenario s = parse_scenario(R"(
[bath]
beta = 1
omega_rot = 1
[modes]
omega_min = 0.5
omega_max = 1.5
omega_steps = 3
m_min = -1
m_max = 1
statistics = fermi
[run]
kind = rates
)");
    const auto modes = make_modes(*s.modes);
    REQUIRE(modes.size() == 9);
    CHECK(std::is_sorted(modes.begin(), modes.end()));
    for (const auto& m : modes) {
        CHECK(m.alpha() == "0");
        CHECK(m.statistics() == Statistics::Fermi);
    }
}

TEST_CASE("zero-temperature spectrum run") {
    const Scenario s = read_scenario_file(std::string(ROTBATH_SCENARIO_DIR) + "/spectrum_zero_t.scn");
    RunContext ctx;
    ctx.out_dir = scratch("spectrum").string();
    const auto report = run_scenario(s, ctx);
    REQUIRE(report.files.size() == 1);
    CHECK(report.exit_code() == 0);
    const double omega_rot = s.bath->omega_rot;
    for (const auto& row : csv_rows(slurp(report.files[0]))) {
        const double omega = std::stod(row[0]);
        const int m = std::stoi(row[1]);
        const double rate = std::stod(row[4]);
        if (omega >= m * omega_rot)
            CHECK(rate == 0.0);
        else
            CHECK(rate > 0.0);
    }
}

TEST_CASE("thermo run keeps sigma nonnegative") {
    const Scenario s = read_scenario_file(std::string(ROTBATH_SCENARIO_DIR) + "/thermo_stable.scn");
    RunContext ctx;
    ctx.out_dir = scratch("thermo").string();
    const auto report = run_scenario(s, ctx);
    REQUIRE(report.files.size() == 1);
    const std::string text = slurp(report.files[0]);
    CHECK(text.find("# seed: none") != std::string::npos);
    CHECK(text.find("time,S,sigma,J,U,Lz,res1,res2") != std::string::npos);
    const auto rows = csv_rows(text);
    CHECK(rows.size() == static_cast<std::size_t>(s.run.points));
    for (const auto& row : rows) CHECK(std::stod(row[2]) >= -1e-12);
}

TEST_CASE("runs are byte-identical across thread counts") {
    const Scenario s = read_scenario_file(std::string(ROTBATH_SCENARIO_DIR) + "/gillespie_stable.scn");
    RunContext a, b;
    a.out_dir = scratch("det_a").string();
    b.out_dir = scratch("det_b").string();
    a.threads = 1;
    b.threads = 6;
    const auto ra = run_scenario(s, a);
    const auto rb = run_scenario(s, b);
    CHECK(digests(ra) == digests(rb));
    const std::string header = slurp(ra.files[0]);
    CHECK(header.find("# seed: 42") != std::string::npos);
    CHECK(header.find("# rng: mt19937_64") != std::string::npos);
}

TEST_CASE("runaway keeps partial output and a nonzero exit code") {
    const Scenario s = parse_scenario(R"(
[bath]
family = flat
beta = 1
omega_rot = 1
[modes]
omega = [0.2]
m = [1]
[run]
kind = kinetics
t_max = 100
points = 101
ceiling = 1e6
)");
    RunContext ctx;
    ctx.out_dir = scratch("runaway").string();
    const auto report = run_scenario(s, ctx);
    CHECK(report.status == RunStatus::ExponentialRunaway);
    CHECK(report.exit_code() == 3);
    const std::string text = slurp(report.files.at(0));
    CHECK(text.find("# status: exponential-runaway") != std::string::npos);
    const auto rows = csv_rows(text);
    CHECK(rows.size() > 1);
    CHECK(rows.size() < 101);
}

TEST_CASE("kms report") {
    const Scenario s = read_scenario_file(std::string(ROTBATH_SCENARIO_DIR) + "/rates_ohmic.scn");
    const auto text = kms_report(s);
    const auto rows = csv_rows(text);
    REQUIRE(rows.size() == 5);
    for (const auto& row : rows) CHECK(std::stod(row.back()) <= 1e-12);
}
