#include "rotbath/runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rotbath/birthdeath.hpp"
#include "rotbath/classical.hpp"
#include "rotbath/parallel.hpp"
#include "rotbath/thermo.hpp"

namespace rotbath {

namespace fs = std::filesystem;

std::string tool_version() { return ROTBATH_VERSION; }

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

namespace {

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path resolve(const std::string& file, const std::string& base_dir) {
    fs::path p(file);
    return p.is_relative() ? fs::path(base_dir) / p : p;
}

std::string model_description(const BathParams& b, const std::string& base_dir) {
    const auto f = format_double;
    switch (b.family) {
        case SpectrumFamily::Ohmic:
            return "ohmic A=" + f(b.amplitude) + " s=" + f(b.exponent) + " x_c=" + f(b.cutoff);
        case SpectrumFamily::Flat: return "flat c=" + f(b.level);
        case SpectrumFamily::HawkingFormFactor: return "hawking |f|^2=" + f(b.level);
        case SpectrumFamily::FromCorrelation:
            return "correlation file=" + b.correlation_file +
                   " sha256=" + sha256_hex(read_bytes(resolve(b.correlation_file, base_dir)));
        case SpectrumFamily::Custom: break;
    }
    return "custom";
}

std::vector<double> time_grid(const RunParams& run) {
    std::vector<double> t(static_cast<std::size_t>(run.points));
    const double last = static_cast<double>(run.points - 1);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = run.t_max * (static_cast<double>(i) / last);
    return t;
}

RunStatus worse(RunStatus a, RunStatus b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

std::string mode_prefix(const Mode& m) {
    return format_double(m.omega()) + "," + std::to_string(m.m()) + "," + m.alpha() + "," +
           to_string(m.statistics());
}

// Everything needed to reproduce a file, followed by the canonical scenario.
class Writer {
public:
    Writer(const Scenario& s, const RunContext& ctx, fs::path dir)
        : scenario_(s), ctx_(ctx), dir_(std::move(dir)), canonical_(print_scenario(s)) {
        fs::create_directories(dir_);
    }

    void write(const std::string& name, RunStatus status, const std::vector<std::string>& extra,
               const std::string& columns, const std::string& body, RunReport& report) const {
        std::ostringstream out;
        out << "# tool: rotbath " << tool_version() << "\n"
            << "# units: hbar = k_B = 1\n"
            << "# run: " << to_string(scenario_.run.kind) << "\n"
            << "# scenario_sha256: " << sha256_hex(canonical_) << "\n";
        if (scenario_.bath) {
            out << "# beta: " << format_double(scenario_.bath->beta) << "\n"
                << "# omega_rot: " << format_double(scenario_.bath->omega_rot) << "\n"
                << "# model: " << model_description(*scenario_.bath, ctx_.base_dir) << "\n";
        }
        out << "# seed: " << (scenario_.run.seed ? std::to_string(*scenario_.run.seed) : "none") << "\n"
            << "# status: " << to_string(status) << "\n";
        for (const auto& line : extra) out << "# " << line << "\n";
        std::istringstream lines(canonical_);
        for (std::string line; std::getline(lines, line);) out << "# scenario: " << line << "\n";
        out << columns << "\n" << body;

        const fs::path path = dir_ / name;
        std::ofstream file(path, std::ios::binary);
        if (!file) throw Error("cannot write " + path.string());
        const std::string text = out.str();
        file.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!file) throw Error("write failed for " + path.string());
        report.files.push_back(path.string());
    }

private:
    const Scenario& scenario_;
    const RunContext& ctx_;
    fs::path dir_;
    std::string canonical_;
};

ModeDistribution initial_distribution(const Mode& mode, const RunParams& run) {
    if (run.initial == InitialState::Thermal) return thermal_distribution(mode, run.n0, run.tail_tol);
    return point_distribution(mode, static_cast<std::size_t>(run.n0), 32);
}

void run_rates(const BathSpec& bath, const std::vector<Mode>& modes, const Writer& w, RunReport& report) {
    std::string body;
    for (const auto& mode : modes) {
        const RateSet r = rates(bath, mode);
        body += mode_prefix(mode) + "," + format_double(r.gamma_down) + "," + format_double(r.gamma_up) + "," +
                (r.beta_loc ? format_double(*r.beta_loc) : std::string("undefined")) + "," +
                to_string(r.classification) + "\n";
    }
    w.write("rates.csv", RunStatus::Completed, {},
            "omega,m,alpha,statistics,gamma_down,gamma_up,beta_loc,classification", body, report);
}

void run_spectrum(const BathSpec& bath, const std::vector<Mode>& modes, unsigned threads, const Writer& w,
                  RunReport& report) {
    std::string body;
    for (const auto& line : emission_spectrum(bath, modes, threads))
        body += mode_prefix(line.mode) + "," + format_double(line.spontaneous_rate) + "," +
                to_string(line.classification) + "\n";
    w.write("spectrum.csv", RunStatus::Completed, {"rate: spontaneous emission rate d nbar/dt at nbar = 0"},
            "omega,m,alpha,statistics,rate,classification", body, report);
}

void run_kinetics(const BathSpec& bath, const std::vector<Mode>& modes, const RunParams& run, unsigned threads,
                  const Writer& w, RunReport& report) {
    const auto grid = time_grid(run);
    std::vector<std::string> bodies(modes.size());
    std::vector<RunStatus> statuses(modes.size(), RunStatus::Completed);
    MeanOptions opts;
    opts.population_ceiling = run.ceiling;
    parallel_for(modes.size(), threads, [&](std::size_t i) {
        const RateSet r = rates(bath, modes[i]);
        const MeanTrajectory traj = evolve_mean(r, modes[i], run.n0, grid, opts);
        std::string body;
        for (std::size_t j = 0; j < traj.times.size(); ++j)
            body += mode_prefix(modes[i]) + "," + format_double(traj.times[j]) + "," +
                    format_double(traj.nbar[j]) + "," +
                    format_double(closed_form_mean(r, modes[i].statistics(), run.n0, traj.times[j])) + "\n";
        bodies[i] = std::move(body);
        statuses[i] = traj.status;
    });
    std::string body;
    std::vector<std::string> extra;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        body += bodies[i];
        report.status = worse(report.status, statuses[i]);
        if (statuses[i] != RunStatus::Completed)
            extra.push_back("mode " + mode_prefix(modes[i]) + ": " + to_string(statuses[i]));
    }
    w.write("kinetics.csv", report.status, extra, "omega,m,alpha,statistics,time,nbar,closed_form", body, report);
}

void run_birthdeath(const BathSpec& bath, const std::vector<Mode>& modes, const RunParams& run,
                    unsigned threads, const Writer& w, RunReport& report) {
    const auto grid = time_grid(run);
    const NonlinearParams nl(run.kappa);
    DistributionOptions opts;
    opts.tail_tol = run.tail_tol;
    struct Result {
        std::string moments, distribution;
        DistributionRun run;
    };
    std::vector<Result> results(modes.size());
    parallel_for(modes.size(), threads, [&](std::size_t i) {
        const RateSet r = rates(bath, modes[i]);
        Result& res = results[i];
        res.run = evolve_distribution(r, nl, initial_distribution(modes[i], run), grid, opts,
                                      [&](const ModeDistribution& d) {
                                          const std::string t = format_double(d.time);
                                          res.moments += mode_prefix(modes[i]) + "," + t + "," +
                                                         format_double(d.mean()) + "," +
                                                         format_double(d.variance()) + "," +
                                                         format_double(d.total()) + "," +
                                                         std::to_string(d.cutoff()) + "\n";
                                          for (std::size_t n = 0; n < d.probs.size(); ++n)
                                              res.distribution += t + "," + std::to_string(n) + "," +
                                                                  format_double(d.probs[n]) + "\n";
                                      });
    });
    std::string moments;
    std::vector<std::string> extra{"kappa: " + format_double(run.kappa), "tail_tol: " + format_double(run.tail_tol)};
    for (std::size_t i = 0; i < modes.size(); ++i) {
        moments += results[i].moments;
        report.status = worse(report.status, results[i].run.status);
        if (results[i].run.status != RunStatus::Completed)
            extra.push_back("mode " + mode_prefix(modes[i]) + ": " + to_string(results[i].run.status));
    }
    w.write("moments.csv", report.status, extra, "omega,m,alpha,statistics,time,mean,variance,total,cutoff",
            moments, report);
    for (std::size_t i = 0; i < modes.size(); ++i)
        w.write("distribution_" + std::to_string(i) + ".csv", results[i].run.status,
                {"mode: " + mode_prefix(modes[i])}, "time,n,P_n", results[i].distribution, report);
}

void run_gillespie(const BathSpec& bath, const std::vector<Mode>& modes, const RunParams& run, unsigned threads,
                   const Writer& w, RunReport& report) {
    const auto grid = time_grid(run);
    const NonlinearParams nl(run.kappa);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        GillespieOptions opts;
        opts.n_traj = static_cast<std::size_t>(run.n_traj);
        opts.seed = *run.seed;
        opts.threads = threads;
        const GillespieResult res = gillespie(rates(bath, modes[i]), modes[i].statistics(), nl,
                                              static_cast<std::uint64_t>(run.n0), grid, opts);
        std::string body;
        for (std::size_t j = 0; j < res.times.size(); ++j)
            body += format_double(res.times[j]) + "," + format_double(res.mean[j]) + "," +
                    format_double(res.variance[j]) + "," + format_double(res.standard_error(j)) + "," +
                    std::to_string(res.n_traj) + "\n";
        w.write("gillespie_" + std::to_string(i) + ".csv", RunStatus::Completed,
                {"mode: " + mode_prefix(modes[i]), "rng: " + res.rng,
                 "batch_size: " + std::to_string(opts.batch_size), "kappa: " + format_double(run.kappa)},
                "time,mean,variance,standard_error,n_traj", body, report);
    }
}

void run_thermo(const BathSpec& bath, const std::vector<Mode>& modes, const RunParams& run, unsigned threads,
                const Writer& w, RunReport& report) {
    std::vector<ModeDistribution> initial;
    initial.reserve(modes.size());
    for (const auto& m : modes) initial.push_back(initial_distribution(m, run));
    LedgerOptions opts;
    opts.distribution.tail_tol = run.tail_tol;
    opts.threads = threads;
    const ThermoLedger ledger = build_ledger(bath, initial, NonlinearParams(run.kappa), time_grid(run), opts);
    bool regularized = false, cutoff_reference = false;
    std::string body;
    for (const auto& r : ledger.rows) {
        regularized = regularized || r.regularized;
        cutoff_reference = cutoff_reference || r.cutoff_reference;
        body += format_double(r.time) + "," + format_double(r.S) + "," + format_double(r.sigma) + "," +
                format_double(r.J) + "," + format_double(r.U) + "," + format_double(r.Lz) + "," +
                format_double(r.residual_first_law) + "," + format_double(r.residual_second_law) + "\n";
    }
    report.status = worse(report.status, ledger.status);
    std::vector<std::string> extra{
        "kappa: " + format_double(run.kappa),
        "rate_scale: " + format_double(ledger.rate_scale),
        "fd_step: " + format_double(ledger.fd_step),
        std::string("flag_regularized: ") + (regularized ? "yes" : "no"),
        std::string("flag_cutoff_reference: ") + (cutoff_reference ? "yes" : "no"),
    };
    for (const auto& m : modes) extra.push_back("mode: " + mode_prefix(m));
    w.write("ledger.csv", report.status, extra, "time,S,sigma,J,U,Lz,res1,res2", body, report);
}

void run_shear(const ShearParams& p, const Writer& w, RunReport& report) {
    const classical::ShearConfig cfg{p.V, p.v, p.k};
    const auto split = classical::energy_split(cfg);
    const double omega = p.v * p.k;
    const std::string body = format_double(p.V) + "," + format_double(p.v) + "," + format_double(p.k) + "," +
                             to_string(classical::shear_classify(cfg)) + "," + format_double(split.wave_fraction) +
                             "," + format_double(split.dissipated_fraction) + "," +
                             format_double(classical::comoving_frequency(omega, p.V, p.v)) + "\n";
    w.write("shear.csv", RunStatus::Completed, {},
            "V,v,k,classification,wave_fraction,dissipated_fraction,comoving_frequency", body, report);
}

void run_bh(const BhParams& p, const Writer& w, RunReport& report) {
    std::vector<Quantum> quanta;
    for (std::size_t i = 0; i < p.omega.size(); ++i) quanta.push_back({p.omega[i], p.m[i], p.count[i]});
    const BhLedgerEntry e = bh_ledger(quanta, p.omega_horizon, p.t_hawking);
    w.write("bh_ledger.csv", RunStatus::Completed,
            {"t_hawking: " + format_double(p.t_hawking), "omega_horizon: " + format_double(p.omega_horizon),
             "units: c = hbar = G = k_B = 1"},
            "dM,dL,dA", format_double(e.dM) + "," + format_double(e.dL) + "," + format_double(e.dA) + "\n",
            report);
}

}  // namespace

RunReport run_scenario(const Scenario& s, const RunContext& ctx) {
    RunReport report;
    const fs::path dir = ctx.out_dir.empty() ? resolve(s.output.dir, ctx.base_dir) : fs::path(ctx.out_dir);
    const unsigned threads = std::max(1u, ctx.threads);

    switch (s.run.kind) {
        case RunKind::Shear: {
            Writer w(s, ctx, dir);
            run_shear(*s.shear, w, report);
            return report;
        }
        case RunKind::BhLedger: {
            Writer w(s, ctx, dir);
            run_bh(*s.bh, w, report);
            return report;
        }
        default: break;
    }

    const BathSpec bath = make_bath(*s.bath, ctx.base_dir);
    const std::vector<Mode> modes = make_modes(*s.modes);
    Writer w(s, ctx, dir);
    switch (s.run.kind) {
        case RunKind::Rates: run_rates(bath, modes, w, report); break;
        case RunKind::Spectrum: run_spectrum(bath, modes, threads, w, report); break;
        case RunKind::Kinetics: run_kinetics(bath, modes, s.run, threads, w, report); break;
        case RunKind::BirthDeath: run_birthdeath(bath, modes, s.run, threads, w, report); break;
        case RunKind::Gillespie: run_gillespie(bath, modes, s.run, threads, w, report); break;
        case RunKind::Thermo: run_thermo(bath, modes, s.run, threads, w, report); break;
        default: break;
    }
    return report;
}

std::string kms_report(const Scenario& s, const std::string& base_dir) {
    if (!s.bath) throw ScenarioError("bath", "kms report needs a [bath] section");
    const BathSpec bath = make_bath(*s.bath, base_dir);
    const auto grid = log_grid(1e-3, 1e2, 100);
    std::ostringstream out;
    out << "# tool: rotbath " << tool_version() << "\n"
        << "# beta: " << format_double(s.bath->beta) << "\n"
        << "# omega_rot: " << format_double(s.bath->omega_rot) << "\n"
        << "# model: " << model_description(*s.bath, base_dir) << "\n"
        << "# grid: 100 log-spaced points on [1e-3, 1e2]\n"
        << "target,omega,m,alpha,residual\n"
        << "bath,,,," << format_double(kms_check(bath.spectrum(), bath.beta(), grid)) << "\n";
    if (s.modes && !bath.beta().is_infinite())
        for (const auto& mode : make_modes(*s.modes))
            out << "rotating," << format_double(mode.omega()) << "," << mode.m() << "," << mode.alpha() << ","
                << format_double(kms_check_rotating(bath, mode, grid)) << "\n";
    return out.str();
}

}  // namespace rotbath
