#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rotbath/bathmodels.hpp"
#include "rotbath/core.hpp"
#include "rotbath/errors.hpp"

namespace rotbath {

// Malformed scenario text; carries the 1-based position of the offending token.
class ScenarioSyntaxError : public Error {
public:
    ScenarioSyntaxError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

// Well-formed text that does not describe a valid scenario. key() names the
// offending "section.key" (or section).
class ScenarioError : public Error {
public:
    ScenarioError(const std::string& key, const std::string& what);
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class RunKind { Rates, Kinetics, BirthDeath, Gillespie, Thermo, Spectrum, Shear, BhLedger };

std::string to_string(RunKind kind);
RunKind parse_run_kind(const std::string& text);

enum class InitialState { Point, Thermal };

struct BathParams {
    SpectrumFamily family = SpectrumFamily::Ohmic;
    double amplitude = 1.0;  // ohmic A
    double exponent = 1.0;   // ohmic s
    double cutoff = 10.0;    // ohmic x_c
    double level = 1.0;      // flat level, or constant |f|^2 for hawking
    std::string correlation_file;
    double beta = 1.0;       // +inf for zero temperature
    double omega_rot = 0.0;
    friend bool operator==(const BathParams&, const BathParams&) = default;
};

struct ModeGrid {
    double omega_min = 0.0;
    double omega_max = 1.0;
    int omega_steps = 2;
    int m_min = 0;
    int m_max = 0;
    friend bool operator==(const ModeGrid&, const ModeGrid&) = default;
};

struct ModesParams {
    // Explicit list (parallel arrays) or a grid; exactly one is used.
    std::vector<double> omega;
    std::vector<int> m;
    std::vector<std::string> alpha;
    std::vector<Statistics> statistics;  // empty, one entry, or one per mode
    std::optional<ModeGrid> grid;
    friend bool operator==(const ModesParams&, const ModesParams&) = default;
};

struct RunParams {
    RunKind kind = RunKind::Rates;
    double t_max = 10.0;
    int points = 101;
    std::int64_t n_traj = 10000;
    std::optional<std::uint64_t> seed;
    double kappa = 0.0;
    double tail_tol = 1e-10;
    double ceiling = 1e12;
    double n0 = 0.0;
    InitialState initial = InitialState::Point;
    friend bool operator==(const RunParams&, const RunParams&) = default;
};

struct ShearParams {
    double V = 1.0;
    double v = 1.0;
    double k = 1.0;
    friend bool operator==(const ShearParams&, const ShearParams&) = default;
};

struct BhParams {
    double t_hawking = 1.0;
    double omega_horizon = 0.0;
    std::vector<double> omega;
    std::vector<int> m;
    std::vector<double> count;
    friend bool operator==(const BhParams&, const BhParams&) = default;
};

struct OutputParams {
    std::string dir = "out";
    std::string format = "csv";
    friend bool operator==(const OutputParams&, const OutputParams&) = default;
};

struct Scenario {
    std::optional<BathParams> bath;
    std::optional<ModesParams> modes;
    RunParams run;
    std::optional<ShearParams> shear;
    std::optional<BhParams> bh;
    OutputParams output;
    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ParseOverrides {
    std::optional<std::uint64_t> seed;
};

// Parses and validates; defaults applied, unknown keys rejected.
Scenario parse_scenario(const std::string& text, const ParseOverrides& overrides = {});
Scenario read_scenario_file(const std::string& path, const ParseOverrides& overrides = {});

// Canonical text with every field written out; parse_scenario(print_scenario(s)) == s.
std::string print_scenario(const Scenario& s);

// Materialized objects; modes sorted by (omega, m, alpha).
BathSpec make_bath(const BathParams& params, const std::string& base_dir = ".");
std::vector<Mode> make_modes(const ModesParams& params);

// 17 significant digits (round-trips exactly); "inf"/"-inf" for infinities.
std::string format_double(double x);

}  // namespace rotbath
