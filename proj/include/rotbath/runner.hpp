#pragma once

#include <string>
#include <vector>

#include "rotbath/kinetics.hpp"
#include "rotbath/scenario.hpp"

namespace rotbath {

struct RunContext {
    std::string out_dir;        // overrides the scenario's output.dir when nonempty
    unsigned threads = 1;
    std::string base_dir = "."; // resolves relative correlation files
};

struct RunReport {
    RunStatus status = RunStatus::Completed;
    std::vector<std::string> files;  // written paths, in write order
    std::vector<std::string> warnings;

    // 0 completed, 3 runaway (partial output kept).
    int exit_code() const noexcept { return status == RunStatus::Completed ? 0 : 3; }
};

// Runs the scenario and writes its CSV files. Output bytes depend only on the
// scenario (seed included), never on the thread count.
RunReport run_scenario(const Scenario& scenario, const RunContext& ctx = {});

// Bath and rotating-bath KMS residuals as CSV text (rows: target, omega, m, alpha, residual).
// Per-mode rows need a finite beta and are omitted at zero temperature.
std::string kms_report(const Scenario& scenario, const std::string& base_dir = ".");

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

// Version string baked into output headers.
std::string tool_version();

}  // namespace rotbath
