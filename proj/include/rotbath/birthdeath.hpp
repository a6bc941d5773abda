#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rotbath/core.hpp"
#include "rotbath/kinetics.hpp"

namespace rotbath {

// Quadratic absorption: the down-rate at occupation n is gamma_down (n + kappa n^2).
class NonlinearParams {
public:
    NonlinearParams() = default;
    explicit NonlinearParams(double kappa);
    double kappa() const noexcept { return kappa_; }
    friend bool operator==(const NonlinearParams&, const NonlinearParams&) = default;

private:
    double kappa_ = 0.0;
};

// Occupation-number distribution P_n, n = 0..cutoff, of one mode at one time.
struct ModeDistribution {
    std::vector<double> probs;
    Mode mode;
    double time = 0.0;

    std::size_t cutoff() const noexcept { return probs.empty() ? 0 : probs.size() - 1; }
    double mean() const;
    double variance() const;
    double total() const;
};

// delta_{n, n0} on 0..cutoff (cutoff forced to 1 for fermions).
ModeDistribution point_distribution(const Mode& mode, std::size_t n0, std::size_t cutoff);

// Thermal (geometric) distribution with the given mean, truncated where the
// tail drops below tail_tol and renormalized; Bernoulli(mean) for fermions.
ModeDistribution thermal_distribution(const Mode& mode, double mean, double tail_tol = 1e-16,
                                      std::size_t min_cutoff = 32);

// Transition propensities at occupation n on a window truncated at `cutoff`;
// the up-rate vanishes at the cutoff, so truncation conserves probability.
double up_rate(const RateSet& rates, Statistics statistics, std::size_t n, std::size_t cutoff);
double down_rate(const RateSet& rates, const NonlinearParams& nl, std::size_t n);

// (L P)_n of the birth-death master equation on the window 0..P.size()-1.
std::vector<double> bd_generator(const RateSet& rates, Statistics statistics,
                                 const NonlinearParams& nl, std::span<const double> probs);

// Normalized detailed-balance solution pi_{n+1}/pi_n = up(n)/down(n+1) on
// 0..cutoff. For superradiant modes this is the cutoff reference, not a
// physical steady state. Throws DomainError when gamma_down = 0 and gamma_up > 0.
std::vector<double> stationary_distribution(const RateSet& rates, Statistics statistics,
                                            const NonlinearParams& nl, std::size_t cutoff);

struct DistributionOptions {
    double tail_tol = 1e-10;           // max P_{cutoff} after an accepted step (bosons)
    std::size_t hard_ceiling = std::size_t{1} << 20;
    std::size_t initial_cutoff = 32;
    double rel_tol = 1e-10;
    double abs_tol = 1e-15;
};

struct DistributionRun {
    std::vector<ModeDistribution> snapshots;  // one per reached grid time
    RunStatus status = RunStatus::Completed;
    std::size_t steps = 0;
    std::size_t final_cutoff = 0;
};

// Integrates the master equation with a fourth-order Rosenbrock method whose
// linear stages are tridiagonal solves. The boson cutoff doubles (and the step
// is retried) whenever P_cutoff would exceed tail_tol; past hard_ceiling the
// run stops with status RunawayTruncation and keeps the snapshots it has.
DistributionRun evolve_distribution(const RateSet& rates, const NonlinearParams& nl,
                                    const ModeDistribution& initial, std::span<const double> t_grid,
                                    const DistributionOptions& opts = {});

// Same integration, but hands each grid-time snapshot to `observer` instead of
// storing it; suited to large cutoffs. Returns the run with empty snapshots.
DistributionRun evolve_distribution(const RateSet& rates, const NonlinearParams& nl,
                                    const ModeDistribution& initial, std::span<const double> t_grid,
                                    const DistributionOptions& opts,
                                    const std::function<void(const ModeDistribution&)>& observer);

struct GillespieOptions {
    std::size_t n_traj = 1000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t batch_size = 256;   // fixes the seed streams; independent of threads
    std::size_t sample_paths = 0;   // number of leading trajectories to return in full
};

struct GillespieResult {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> variance;  // unbiased sample variance
    std::size_t n_traj = 0;
    std::vector<std::vector<std::uint64_t>> sample_paths;  // states at `times`
    std::string rng = "mt19937_64 seeded by seed_seq{seed_lo, seed_hi, batch}; exp via -log(u)";

    double standard_error(std::size_t i) const;
};

// Exact event-driven simulation of the birth-death chain (up-propensity
// gamma_up (1 +- n), down-propensity gamma_down (n + kappa n^2)), sampled at
// the checkpoint times. Deterministic for a given seed and batch size.
GillespieResult gillespie(const RateSet& rates, Statistics statistics, const NonlinearParams& nl,
                          std::uint64_t n0, std::span<const double> checkpoints,
                          const GillespieOptions& opts);

// Nonnegative root of gamma_down kappa n^2 + (gamma_down - gamma_up) n - gamma_up = 0.
// For kappa = 0 this is gamma_up / (gamma_down - gamma_up) and requires gamma_up < gamma_down.
double saturation_fixed_point(const RateSet& rates, const NonlinearParams& nl);

struct PopulationTrajectory {
    std::vector<double> times;
    std::vector<double> nbar;
    RunStatus status = RunStatus::Completed;
};

// dn/dt = gamma_up (1 + n) - gamma_down (n + kappa n^2): the bosonic kinetics with
// <n^2> replaced by <n>^2.
double meanfield_rhs(const RateSet& rates, const NonlinearParams& nl, double n);

PopulationTrajectory meanfield_evolve(const RateSet& rates, const NonlinearParams& nl, double n0,
                                      std::span<const double> t_grid, const MeanOptions& opts = {});

}  // namespace rotbath
