#pragma once

#include <span>
#include <vector>

#include "rotbath/core.hpp"

namespace rotbath {

enum class RunStatus { Completed, ExponentialRunaway, RunawayTruncation };

std::string to_string(RunStatus s);

struct MeanTrajectory {
    std::vector<double> times;
    std::vector<double> nbar;
    Mode mode;
    RateSet rates;
    // ExponentialRunaway when the population ceiling cut the run short; times
    // and nbar then stop at the first sample above the ceiling.
    RunStatus status = RunStatus::Completed;
};

struct MeanOptions {
    double rel_tol = 1e-14;
    double abs_tol = 1e-15;
    double population_ceiling = 1e12;
};

// d nbar/dt = gamma_up (1 +- nbar) - gamma_down nbar  (+ Bose, - Fermi).
double mean_rhs(const RateSet& rates, Statistics statistics, double nbar);

// lambda = gamma_down -+ gamma_up, the decay constant of the linear flow;
// negative for superradiant bosons, zero for marginal ones.
double relaxation_constant(const RateSet& rates, Statistics statistics);

// Exact solution of the linear kinetic equation. Covers relaxation (lambda > 0),
// exponential growth (lambda < 0), the marginal limit nbar0 + gamma_up t, and
// the zero-temperature growth (1 + nbar0) e^{gamma_up t} - 1.
double closed_form_mean(const RateSet& rates, Statistics statistics, double nbar0, double t);

MeanTrajectory evolve_mean(const RateSet& rates, const Mode& mode, double nbar0,
                           std::span<const double> t_grid, const MeanOptions& opts = {});

// [e^{beta(omega - m Omega)} +- 1]^{-1}, + Fermi, - Bose.
// Throws NoStationaryPopulation for superradiant or marginal bosons.
double asymptotic_population(const BathSpec& bath, const Mode& mode);

struct EmissionLine {
    Mode mode;
    double spontaneous_rate = 0.0;  // d nbar/dt at nbar = 0, i.e. gamma_up
    Stability classification = Stability::Stable;
};

// One line per mode in input order; evaluated on up to `threads` threads.
std::vector<EmissionLine> emission_spectrum(const BathSpec& bath, std::span<const Mode> modes,
                                            unsigned threads = 1);

}  // namespace rotbath
