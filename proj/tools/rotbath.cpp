// Command-line front end: run, check and kms subcommands over scenario files.
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "rotbath/runner.hpp"
#include "rotbath/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

std::string parent_dir(const std::string& file) {
    const auto parent = std::filesystem::path(file).parent_path();
    return parent.empty() ? std::string(".") : parent.string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotbath: rotating-bath superradiance simulator"};
    app.set_version_flag("--version", "rotbath " + rotbath::tool_version());
    app.require_subcommand(1);

    std::string run_file, out_dir;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    auto* run = app.add_subcommand("run", "run a scenario and write its CSV outputs");
    run->add_option("scenario", run_file, "scenario file")->required();
    run->add_option("--out", out_dir, "output directory (overrides output.dir)");
    run->add_option("--seed", seed, "RNG seed (overrides run.seed)");
    run->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));

    std::string check_file;
    auto* check = app.add_subcommand("check", "validate a scenario and print its canonical form");
    check->add_option("scenario", check_file, "scenario file")->required();

    std::string kms_file;
    auto* kms = app.add_subcommand("kms", "print KMS residuals of the scenario's bath");
    kms->add_option("scenario", kms_file, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            rotbath::ParseOverrides overrides;
            overrides.seed = seed;
            const auto scenario = rotbath::read_scenario_file(run_file, overrides);
            rotbath::RunContext ctx;
            ctx.out_dir = out_dir;
            ctx.threads = threads;
            ctx.base_dir = parent_dir(run_file);
            const auto report = rotbath::run_scenario(scenario, ctx);
            for (const auto& f : report.files) std::cout << f << "\n";
            if (report.exit_code() != 0)
                std::cerr << "rotbath: run ended with status " << rotbath::to_string(report.status)
                          << "; partial output kept\n";
            return report.exit_code();
        }
        if (*check) {
            std::cout << rotbath::print_scenario(rotbath::read_scenario_file(check_file));
            return kExitOk;
        }
        if (*kms) {
            std::cout << rotbath::kms_report(rotbath::read_scenario_file(kms_file), parent_dir(kms_file));
            return kExitOk;
        }
    } catch (const rotbath::ScenarioSyntaxError& e) {
        std::cerr << "rotbath: syntax error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const rotbath::ScenarioError& e) {
        std::cerr << "rotbath: invalid scenario: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "rotbath: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
