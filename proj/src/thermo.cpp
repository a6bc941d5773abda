#include "rotbath/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rotbath/errors.hpp"
#include "rotbath/parallel.hpp"

namespace rotbath {

namespace {

constexpr double kProbabilityFloor = 1e-300;

double first_moment_rate(std::span<const double> lp) {
    double s = 0.0;
    for (std::size_t n = 0; n < lp.size(); ++n) s += static_cast<double>(n) * lp[n];
    return s;
}

}  // namespace

double entropy(const ModeDistribution& p) {
    double s = 0.0;
    for (double q : p.probs)
        if (q > 0.0) s -= q * std::log(q);
    return s;
}

double entropy(std::span<const ModeDistribution> modes) {
    double s = 0.0;
    for (const auto& p : modes) s += entropy(p);
    return s;
}

EntropyProduction entropy_production(const ModeDistribution& p, const RateSet& rates,
                                     const NonlinearParams& nl) {
    EntropyProduction out;
    if (rates.gamma_up == 0.0 && rates.gamma_down == 0.0) return out;
    if (!(rates.gamma_up > 0.0) || !(rates.gamma_down > 0.0))
        throw DomainError("entropy production needs a finite-temperature reference (gamma_up, gamma_down > 0)");

    const double log_ratio = std::log(rates.gamma_up) - std::log(rates.gamma_down);
    const bool bose = p.mode.statistics() == Statistics::Bose;
    out.cutoff_reference = bose && log_ratio >= 0.0;

    const auto lp = bd_generator(rates, p.mode.statistics(), nl, p.probs);
    double sigma = 0.0;
    for (std::size_t n = 0; n < lp.size(); ++n) {
        if (lp[n] == 0.0) continue;
        double q = p.probs[n];
        if (!(q > 0.0)) {
            q = kProbabilityFloor;
            out.regularized = true;
        }
        sigma -= lp[n] * (std::log(q) - static_cast<double>(n) * log_ratio);
    }
    out.sigma = sigma;
    return out;
}

double heat_current(std::span<const Mode> modes, std::span<const double> dnbar_dt, const BathSpec& bath) {
    if (modes.size() != dnbar_dt.size()) throw AlignmentError("heat_current: one rate per mode required");
    double j = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) j += comoving_energy(bath, modes[i]) * dnbar_dt[i];
    return j;
}

std::vector<EnergyBalanceRow> energy_balance(std::span<const MeanTrajectory> trajectories,
                                             const BathSpec& bath) {
    std::vector<EnergyBalanceRow> rows;
    if (trajectories.empty()) return rows;
    const auto& times = trajectories.front().times;
    for (const auto& tr : trajectories) {
        if (tr.times != times || tr.nbar.size() != times.size())
            throw AlignmentError("energy_balance: trajectories are on different time grids");
    }
    const double omega_rot = bath.omega_rot();
    rows.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        EnergyBalanceRow& row = rows[i];
        row.time = times[i];
        double l_dot = 0.0;
        for (const auto& tr : trajectories) {
            const double n = tr.nbar[i];
            const double rate = mean_rhs(tr.rates, tr.mode.statistics(), n);
            row.U += tr.mode.omega() * n;
            row.Lz += tr.mode.m() * n;
            row.U_dot += tr.mode.omega() * rate;
            row.J += (tr.mode.omega() - tr.mode.m() * omega_rot) * rate;
            l_dot += tr.mode.m() * rate;
        }
        row.power = omega_rot * l_dot;
        row.residual = std::abs(row.U_dot - row.J - row.power);
    }
    return rows;
}

ThermoLedger build_ledger(const BathSpec& bath, std::span<const ModeDistribution> initial,
                          const NonlinearParams& nl, std::span<const double> t_grid,
                          const LedgerOptions& opts) {
    if (bath.beta().is_infinite()) throw DomainError("the entropy ledger needs a finite beta");
    ThermoLedger ledger;
    if (t_grid.empty()) return ledger;
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("ledger time grid must be increasing");

    const std::size_t n_modes = initial.size();
    std::vector<RateSet> mode_rates;
    mode_rates.reserve(n_modes);
    double gamma = 0.0;
    for (const auto& p : initial) {
        mode_rates.push_back(rates(bath, p.mode));
        gamma = std::max(gamma, mode_rates.back().gamma_up + mode_rates.back().gamma_down);
    }
    if (!(gamma > 0.0)) gamma = 1.0;
    const double h = 1e-3 / gamma;
    ledger.rate_scale = gamma;
    ledger.fd_step = h;

    // Every sample needs S at two neighbouring times: centred where possible,
    // one-sided second order at the start of the window.
    const double t0 = t_grid.front();
    std::vector<double> all_times;
    for (double t : t_grid) {
        all_times.push_back(t);
        if (t - h >= t0) {
            all_times.push_back(t - h);
            all_times.push_back(t + h);
        } else {
            all_times.push_back(t + h);
            all_times.push_back(t + 2.0 * h);
        }
    }
    std::sort(all_times.begin(), all_times.end());
    all_times.erase(std::unique(all_times.begin(), all_times.end()), all_times.end());
    std::map<double, std::size_t> index;
    for (std::size_t i = 0; i < all_times.size(); ++i) index[all_times[i]] = i;

    std::vector<DistributionRun> runs(n_modes);
    parallel_for(n_modes, opts.threads, [&](std::size_t k) {
        ModeDistribution start = initial[k];
        start.time = all_times.front();
        runs[k] = evolve_distribution(mode_rates[k], nl, start, all_times, opts.distribution);
    });

    std::size_t reached = all_times.size();
    for (const auto& run : runs) {
        reached = std::min(reached, run.snapshots.size());
        if (run.status != RunStatus::Completed) ledger.status = run.status;
    }

    auto entropy_at = [&](std::size_t i) {
        double s = 0.0;
        for (const auto& run : runs) s += entropy(run.snapshots[i]);
        return s;
    };

    const double beta = bath.beta().value();
    const double omega_rot = bath.omega_rot();
    for (double t : t_grid) {
        const bool centred = t - h >= t0;
        const std::size_t i = index.at(t);
        const std::size_t a = index.at(centred ? t - h : t + h);
        const std::size_t b = index.at(centred ? t + h : t + 2.0 * h);
        if (std::max({i, a, b}) >= reached) break;

        ThermoRow row;
        row.time = t;
        row.S = entropy_at(i);
        row.S_dot = centred ? (entropy_at(b) - entropy_at(a)) / (2.0 * h)
                            : (-3.0 * row.S + 4.0 * entropy_at(a) - entropy_at(b)) / (2.0 * h);
        double u_dot = 0.0;
        double l_dot = 0.0;
        for (std::size_t k = 0; k < n_modes; ++k) {
            const ModeDistribution& p = runs[k].snapshots[i];
            const Mode& mode = p.mode;
            const auto lp = bd_generator(mode_rates[k], mode.statistics(), nl, p.probs);
            const double n_dot = first_moment_rate(lp);
            const double nbar = p.mean();
            const auto ep = entropy_production(p, mode_rates[k], nl);
            row.sigma += ep.sigma;
            row.regularized = row.regularized || ep.regularized;
            row.cutoff_reference = row.cutoff_reference || ep.cutoff_reference;
            row.U += mode.omega() * nbar;
            row.Lz += mode.m() * nbar;
            row.J += (mode.omega() - mode.m() * omega_rot) * n_dot;
            u_dot += mode.omega() * n_dot;
            l_dot += mode.m() * n_dot;
        }
        row.U_dot = u_dot;
        row.residual_first_law = std::abs(u_dot - row.J - omega_rot * l_dot);
        row.residual_second_law = std::abs(row.S_dot - row.sigma - beta * row.J);
        ledger.rows.push_back(row);
    }
    return ledger;
}

BhLedgerEntry bh_ledger(std::span<const Quantum> quanta, double omega_horizon, double t_hawking) {
    if (!(t_hawking > 0.0) || !std::isfinite(t_hawking))
        throw DomainError("Hawking temperature must be finite and > 0");
    BhLedgerEntry out;
    for (const auto& q : quanta) {
        if (!(q.count >= 0.0)) throw DomainError("quantum counts must be >= 0");
        out.dM -= q.count * q.omega;
        out.dL -= q.count * q.m;
    }
    out.dA = 4.0 * (out.dM - omega_horizon * out.dL) / t_hawking;
    return out;
}

}  // namespace rotbath
