#include "rotbath/kinetics.hpp"

#include <cmath>

#include "rotbath/errors.hpp"
#include "rotbath/ode.hpp"
#include "rotbath/parallel.hpp"

namespace rotbath {

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::ExponentialRunaway: return "exponential-runaway";
        case RunStatus::RunawayTruncation: return "runaway-truncation";
    }
    return "unknown";
}

double mean_rhs(const RateSet& rates, Statistics statistics, double nbar) {
    const double sign = statistics == Statistics::Bose ? 1.0 : -1.0;
    return rates.gamma_up * (1.0 + sign * nbar) - rates.gamma_down * nbar;
}

double relaxation_constant(const RateSet& rates, Statistics statistics) {
    return statistics == Statistics::Bose ? rates.gamma_down - rates.gamma_up
                                          : rates.gamma_down + rates.gamma_up;
}

double closed_form_mean(const RateSet& rates, Statistics statistics, double nbar0, double t) {
    if (t < 0.0) throw DomainError("closed_form_mean needs t >= 0");
    const double lambda = relaxation_constant(rates, statistics);
    if (lambda == 0.0) return nbar0 + rates.gamma_up * t;
    // nbar0 e^{-lambda t} + gamma_up (1 - e^{-lambda t}) / lambda, with the
    // second factor written through expm1 so it stays accurate near lambda = 0.
    const double x = -lambda * t;
    return nbar0 * std::exp(x) - rates.gamma_up * std::expm1(x) / lambda;
}

MeanTrajectory evolve_mean(const RateSet& rates, const Mode& mode, double nbar0,
                           std::span<const double> t_grid, const MeanOptions& opts) {
    const Statistics stats = mode.statistics();
    if (!(nbar0 >= 0.0)) throw DomainError("initial population must be >= 0");
    if (stats == Statistics::Fermi && nbar0 > 1.0)
        throw DomainError("fermion initial population must lie in [0, 1]");
    if (!t_grid.empty() && t_grid.front() != 0.0) throw DomainError("time grid must start at 0");

    ode::ScalarOptions so;
    so.rel_tol = opts.rel_tol;
    so.abs_tol = opts.abs_tol;
    so.ceiling = opts.population_ceiling;
    auto sol = ode::integrate_autonomous([&](double n) { return mean_rhs(rates, stats, n); }, nbar0,
                                         t_grid, so);

    MeanTrajectory out{{}, std::move(sol.values), mode, rates, RunStatus::Completed};
    out.times.assign(t_grid.begin(), t_grid.begin() + static_cast<std::ptrdiff_t>(out.nbar.size()));
    if (sol.hit_ceiling) out.status = RunStatus::ExponentialRunaway;
    return out;
}

double asymptotic_population(const BathSpec& bath, const Mode& mode) {
    const double energy = comoving_energy(bath, mode);
    const InverseTemperature beta = bath.beta();
    if (mode.statistics() == Statistics::Fermi) {
        if (beta.is_infinite()) return energy > 0.0 ? 0.0 : (energy < 0.0 ? 1.0 : 0.5);
        const double x = beta.value() * energy;
        if (x > 0.0) {
            const double e = std::exp(-x);
            return e / (1.0 + e);
        }
        return 1.0 / (std::exp(x) + 1.0);
    }
    if (!(energy > 0.0))
        throw NoStationaryPopulation("boson mode with omega <= m*Omega has no stationary population");
    if (beta.is_infinite()) return 0.0;
    return 1.0 / std::expm1(beta.value() * energy);
}

std::vector<EmissionLine> emission_spectrum(const BathSpec& bath, std::span<const Mode> modes,
                                            unsigned threads) {
    std::vector<EmissionLine> out(modes.size(), EmissionLine{Mode(0.0, 0), 0.0, Stability::Stable});
    parallel_for(modes.size(), threads, [&](std::size_t i) {
        const RateSet r = rates(bath, modes[i]);
        out[i] = EmissionLine{modes[i], r.gamma_up, r.classification};
    });
    return out;
}

}  // namespace rotbath
