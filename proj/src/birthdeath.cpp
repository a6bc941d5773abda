#include "rotbath/birthdeath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rotbath/errors.hpp"
#include "rotbath/ode.hpp"
#include "rotbath/parallel.hpp"

namespace rotbath {

NonlinearParams::NonlinearParams(double kappa) : kappa_(kappa) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be finite and >= 0");
}

double ModeDistribution::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double ModeDistribution::mean() const {
    double s = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) s += static_cast<double>(n) * probs[n];
    return s;
}

double ModeDistribution::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        const double d = static_cast<double>(n) - mu;
        s += d * d * probs[n];
    }
    return s;
}

ModeDistribution point_distribution(const Mode& mode, std::size_t n0, std::size_t cutoff) {
    if (mode.statistics() == Statistics::Fermi) {
        if (n0 > 1) throw DomainError("fermion occupation must be 0 or 1");
        cutoff = 1;
    }
    cutoff = std::max(cutoff, n0);
    ModeDistribution out{std::vector<double>(cutoff + 1, 0.0), mode, 0.0};
    out.probs[n0] = 1.0;
    return out;
}

ModeDistribution thermal_distribution(const Mode& mode, double mean, double tail_tol,
                                      std::size_t min_cutoff) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("thermal mean must be finite and >= 0");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw DomainError("tail_tol must lie in (0, 1)");
    if (mode.statistics() == Statistics::Fermi) {
        if (mean > 1.0) throw DomainError("fermion occupation cannot exceed 1");
        return ModeDistribution{{1.0 - mean, mean}, mode, 0.0};
    }
    const double q = mean / (1.0 + mean);
    std::size_t cutoff = min_cutoff;
    if (q > 0.0) {
        const double needed = std::ceil(std::log(tail_tol) / std::log(q));
        if (needed > static_cast<double>(std::size_t{1} << 26))
            throw DomainError("thermal distribution too wide for the requested tail");
        cutoff = std::max(cutoff, static_cast<std::size_t>(needed));
    }
    ModeDistribution out{std::vector<double>(cutoff + 1, 0.0), mode, 0.0};
    double w = 1.0, sum = 0.0;
    for (auto& p : out.probs) {
        p = w;
        sum += w;
        w *= q;
    }
    for (auto& p : out.probs) p /= sum;
    return out;
}

double up_rate(const RateSet& rates, Statistics statistics, std::size_t n, std::size_t cutoff) {
    if (n >= cutoff) return 0.0;
    const double nd = static_cast<double>(n);
    if (statistics == Statistics::Fermi) return rates.gamma_up * (1.0 - nd);
    return rates.gamma_up * (1.0 + nd);
}

double down_rate(const RateSet& rates, const NonlinearParams& nl, std::size_t n) {
    const double nd = static_cast<double>(n);
    return rates.gamma_down * (nd + nl.kappa() * nd * nd);
}

namespace {

// Tridiagonal birth-death generator on the window 0..N.
class Generator {
public:
    Generator(const RateSet& rates, Statistics stats, const NonlinearParams& nl, std::size_t cutoff)
        : up_(cutoff + 1), down_(cutoff + 1) {
        for (std::size_t n = 0; n <= cutoff; ++n) {
            up_[n] = up_rate(rates, stats, n, cutoff);
            down_[n] = down_rate(rates, nl, n);
        }
    }

    std::size_t size() const noexcept { return up_.size(); }

    void apply(std::span<const double> p, std::span<double> out) const {
        const std::size_t last = size() - 1;
        for (std::size_t n = 0; n <= last; ++n) {
            double v = -(up_[n] + down_[n]) * p[n];
            if (n > 0) v += up_[n - 1] * p[n - 1];
            if (n < last) v += down_[n + 1] * p[n + 1];
            out[n] = v;
        }
    }

    // LU factors of (shift I - L). Columns of L sum to zero, so the matrix is
    // column diagonally dominant and needs no pivoting.
    void factor(double shift) {
        const std::size_t size_n = size();
        inv_pivot_.resize(size_n);
        upper_.resize(size_n);
        for (std::size_t n = 0; n < size_n; ++n) {
            const double diag = shift + up_[n] + down_[n];
            const double pivot = n > 0 ? diag + up_[n - 1] * upper_[n - 1] : diag;
            inv_pivot_[n] = 1.0 / pivot;
            upper_[n] = n + 1 < size_n ? -down_[n + 1] * inv_pivot_[n] : 0.0;
        }
    }

    void solve(std::span<double> x) const {
        const std::size_t size_n = size();
        x[0] *= inv_pivot_[0];
        for (std::size_t n = 1; n < size_n; ++n) x[n] = (x[n] + up_[n - 1] * x[n - 1]) * inv_pivot_[n];
        for (std::size_t n = size_n - 1; n-- > 0;) x[n] -= upper_[n] * x[n + 1];
    }

private:
    std::vector<double> up_, down_, inv_pivot_, upper_;
};

// Shampine's L-stable Rosenbrock 4(3) coefficients.
constexpr double kGamma = 0.5;
constexpr double kA21 = 2.0, kA31 = 48.0 / 25.0, kA32 = 6.0 / 25.0;
constexpr double kC21 = -8.0, kC31 = 372.0 / 25.0, kC32 = 12.0 / 5.0;
constexpr double kC41 = -112.0 / 125.0, kC42 = -54.0 / 125.0, kC43 = -2.0 / 5.0;
constexpr double kB1 = 19.0 / 9.0, kB2 = 0.5, kB3 = 25.0 / 108.0, kB4 = 125.0 / 108.0;
constexpr double kE1 = 17.0 / 54.0, kE2 = 7.0 / 36.0, kE4 = 125.0 / 108.0;

struct Workspace {
    std::vector<double> g1, g2, g3, g4, y, f, next, err;
    void resize(std::size_t n) {
        for (auto* v : {&g1, &g2, &g3, &g4, &y, &f, &next, &err}) v->assign(n, 0.0);
    }
};

// One Rosenbrock step of size h from p; fills ws.next and ws.err.
void rosenbrock_step(Generator& gen, std::span<const double> p, double h, Workspace& ws) {
    const std::size_t n = p.size();
    gen.factor(1.0 / (kGamma * h));

    gen.apply(p, ws.g1);
    gen.solve(ws.g1);

    for (std::size_t i = 0; i < n; ++i) ws.y[i] = p[i] + kA21 * ws.g1[i];
    gen.apply(ws.y, ws.g2);
    for (std::size_t i = 0; i < n; ++i) ws.g2[i] += kC21 * ws.g1[i] / h;
    gen.solve(ws.g2);

    for (std::size_t i = 0; i < n; ++i) ws.y[i] = p[i] + kA31 * ws.g1[i] + kA32 * ws.g2[i];
    gen.apply(ws.y, ws.f);
    for (std::size_t i = 0; i < n; ++i) ws.g3[i] = ws.f[i] + (kC31 * ws.g1[i] + kC32 * ws.g2[i]) / h;
    gen.solve(ws.g3);

    for (std::size_t i = 0; i < n; ++i)
        ws.g4[i] = ws.f[i] + (kC41 * ws.g1[i] + kC42 * ws.g2[i] + kC43 * ws.g3[i]) / h;
    gen.solve(ws.g4);

    for (std::size_t i = 0; i < n; ++i) {
        ws.next[i] = p[i] + kB1 * ws.g1[i] + kB2 * ws.g2[i] + kB3 * ws.g3[i] + kB4 * ws.g4[i];
        ws.err[i] = kE1 * ws.g1[i] + kE2 * ws.g2[i] + kE4 * ws.g4[i];
    }
}

}  // namespace

std::vector<double> bd_generator(const RateSet& rates, Statistics statistics,
                                 const NonlinearParams& nl, std::span<const double> probs) {
    if (probs.empty()) return {};
    Generator gen(rates, statistics, nl, probs.size() - 1);
    std::vector<double> out(probs.size());
    gen.apply(probs, out);
    return out;
}

std::vector<double> stationary_distribution(const RateSet& rates, Statistics statistics,
                                            const NonlinearParams& nl, std::size_t cutoff) {
    if (statistics == Statistics::Fermi) cutoff = 1;
    std::vector<double> pi(cutoff + 1, 0.0);
    // Work in logs: superradiant references grow geometrically with n.
    std::vector<double> log_pi(cutoff + 1, 0.0);
    for (std::size_t n = 0; n < cutoff; ++n) {
        const double up = up_rate(rates, statistics, n, cutoff);
        const double down = down_rate(rates, nl, n + 1);
        if (up == 0.0) {
            log_pi[n + 1] = -std::numeric_limits<double>::infinity();
            continue;
        }
        if (down == 0.0) throw DomainError("no detailed-balance state: pumping without decay");
        log_pi[n + 1] = log_pi[n] + std::log(up) - std::log(down);
    }
    const double top = *std::max_element(log_pi.begin(), log_pi.end());
    double z = 0.0;
    for (std::size_t n = 0; n <= cutoff; ++n) z += (pi[n] = std::exp(log_pi[n] - top));
    for (double& p : pi) p /= z;
    return pi;
}

DistributionRun evolve_distribution(const RateSet& rates, const NonlinearParams& nl,
                                    const ModeDistribution& initial, std::span<const double> t_grid,
                                    const DistributionOptions& opts,
                                    const std::function<void(const ModeDistribution&)>& observer) {
    const Statistics stats = initial.mode.statistics();
    const bool bose = stats == Statistics::Bose;
    if (initial.probs.empty()) throw DomainError("initial distribution is empty");
    for (double p : initial.probs)
        if (!(p >= 0.0)) throw DomainError("initial distribution has a negative entry");
    if (std::abs(initial.total() - 1.0) > 1e-9) throw DomainError("initial distribution is not normalized");
    if (!bose && initial.probs.size() != 2) throw DomainError("fermion distributions live on {0, 1}");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] < t_grid[i - 1]) throw DomainError("time grid must be nondecreasing");

    DistributionRun run;
    if (t_grid.empty()) return run;

    std::vector<double> p = initial.probs;
    if (bose) {
        std::size_t cutoff = std::max(p.size() - 1, opts.initial_cutoff);
        p.resize(cutoff + 1, 0.0);
    }
    auto tail_exceeded = [&](std::span<const double> q) { return bose && q.back() > opts.tail_tol; };
    while (tail_exceeded(p)) {
        const std::size_t cutoff = 2 * (p.size() - 1);
        if (cutoff > opts.hard_ceiling) {
            run.status = RunStatus::RunawayTruncation;
            run.final_cutoff = p.size() - 1;
            return run;
        }
        p.resize(cutoff + 1, 0.0);
    }

    Generator gen(rates, stats, nl, p.size() - 1);
    Workspace ws;
    ws.resize(p.size());

    double t = t_grid.front();
    ModeDistribution snap{p, initial.mode, t};
    observer(snap);

    const double rate_scale = rates.gamma_up + rates.gamma_down;
    double h = rate_scale > 0.0 ? 1e-3 / rate_scale : 1.0;
    const double negative_floor = -100.0 * opts.abs_tol;

    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        const double target = t_grid[k];
        while (t < target) {
            const double remaining = target - t;
            const bool clamped = h >= remaining;
            const double step = clamped ? remaining : h;
            if (step < 1e-14 * std::max(1.0, std::abs(t))) throw Error("birth-death step size underflow");

            rosenbrock_step(gen, p, step, ws);
            // Local error in the (1 + n)-weighted l1 norm, which bounds the
            // error of both the probabilities and the first moment.
            double weighted_err = 0.0;
            double weighted_size = 0.0;
            double lowest = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double w = 1.0 + static_cast<double>(i);
                weighted_err += w * std::abs(ws.err[i]);
                weighted_size += w * std::max(std::abs(p[i]), std::abs(ws.next[i]));
                lowest = std::min(lowest, ws.next[i]);
                finite = finite && std::isfinite(ws.next[i]);
            }
            const double err = weighted_err / (opts.abs_tol + opts.rel_tol * weighted_size);
            ++run.steps;
            if (!finite || err > 1.0) {
                h = step * (finite ? std::max(0.2, 0.9 * std::pow(err, -1.0 / 3.0)) : 0.25);
                continue;
            }
            if (lowest < negative_floor) {
                h = step * 0.5;
                continue;
            }
            if (tail_exceeded(ws.next)) {
                const std::size_t cutoff = 2 * (p.size() - 1);
                if (cutoff > opts.hard_ceiling) {
                    run.status = RunStatus::RunawayTruncation;
                    run.final_cutoff = p.size() - 1;
                    return run;
                }
                p.resize(cutoff + 1, 0.0);
                gen = Generator(rates, stats, nl, cutoff);
                ws.resize(p.size());
                continue;
            }
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(0.0, ws.next[i]);
            t = clamped ? target : t + step;
            const double grow = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -0.25)) : 5.0;
            const double proposal = step * std::max(0.2, grow);
            h = clamped ? std::max(h, proposal) : proposal;
        }
        snap.probs = p;
        snap.time = target;
        observer(snap);
    }
    run.final_cutoff = p.size() - 1;
    return run;
}

DistributionRun evolve_distribution(const RateSet& rates, const NonlinearParams& nl,
                                    const ModeDistribution& initial, std::span<const double> t_grid,
                                    const DistributionOptions& opts) {
    std::vector<ModeDistribution> snapshots;
    auto run = evolve_distribution(rates, nl, initial, t_grid, opts,
                                   [&](const ModeDistribution& d) { snapshots.push_back(d); });
    run.snapshots = std::move(snapshots);
    return run;
}

// ---------------------------------------------------------------------------
// Stochastic trajectories

double GillespieResult::standard_error(std::size_t i) const {
    return std::sqrt(variance.at(i) / static_cast<double>(n_traj));
}

namespace {

double unit_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

struct BatchMoments {
    std::vector<double> sum, sum_sq;
    std::vector<std::vector<std::uint64_t>> paths;
};

}  // namespace

GillespieResult gillespie(const RateSet& rates, Statistics statistics, const NonlinearParams& nl,
                          std::uint64_t n0, std::span<const double> checkpoints,
                          const GillespieOptions& opts) {
    if (opts.n_traj < 1) throw DomainError("gillespie needs n_traj >= 1");
    if (opts.batch_size < 1) throw DomainError("gillespie needs batch_size >= 1");
    if (statistics == Statistics::Fermi && n0 > 1) throw DomainError("fermion occupation must be 0 or 1");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 0.0 || (i > 0 && checkpoints[i] < checkpoints[i - 1]))
            throw DomainError("gillespie checkpoints must be nonnegative and nondecreasing");
    }

    const std::size_t n_points = checkpoints.size();
    const std::size_t n_batches = (opts.n_traj + opts.batch_size - 1) / opts.batch_size;
    const double sign = statistics == Statistics::Bose ? 1.0 : -1.0;
    std::vector<BatchMoments> batches(n_batches);

    parallel_for(n_batches, opts.threads, [&](std::size_t b) {
        BatchMoments& acc = batches[b];
        acc.sum.assign(n_points, 0.0);
        acc.sum_sq.assign(n_points, 0.0);
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(std::uint64_t{b} >> 32)};
        std::mt19937_64 rng(seq);
        const std::size_t first = b * opts.batch_size;
        const std::size_t last = std::min(opts.n_traj, first + opts.batch_size);
        for (std::size_t traj = first; traj < last; ++traj) {
            const bool keep = traj < opts.sample_paths;
            std::vector<std::uint64_t> path;
            if (keep) path.reserve(n_points);
            std::uint64_t n = n0;
            double t = 0.0;
            std::size_t k = 0;
            while (k < n_points) {
                const double nd = static_cast<double>(n);
                const double up = rates.gamma_up * (1.0 + sign * nd);
                const double down = rates.gamma_down * (nd + nl.kappa() * nd * nd);
                const double total = up + down;
                const double next = total > 0.0 ? t - std::log(unit_open(rng)) / total
                                                : std::numeric_limits<double>::infinity();
                while (k < n_points && checkpoints[k] < next) {
                    acc.sum[k] += nd;
                    acc.sum_sq[k] += nd * nd;
                    if (keep) path.push_back(n);
                    ++k;
                }
                if (k == n_points) break;
                if (unit_open(rng) * total < up) {
                    ++n;
                } else {
                    --n;
                }
                t = next;
            }
            if (keep) acc.paths.push_back(std::move(path));
        }
    });

    GillespieResult out;
    out.times.assign(checkpoints.begin(), checkpoints.end());
    out.n_traj = opts.n_traj;
    std::vector<double> sum(n_points, 0.0), sum_sq(n_points, 0.0);
    for (auto& batch : batches) {
        for (std::size_t k = 0; k < n_points; ++k) {
            sum[k] += batch.sum[k];
            sum_sq[k] += batch.sum_sq[k];
        }
        for (auto& path : batch.paths) out.sample_paths.push_back(std::move(path));
    }
    const double count = static_cast<double>(opts.n_traj);
    out.mean.resize(n_points);
    out.variance.resize(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        out.mean[k] = sum[k] / count;
        out.variance[k] = opts.n_traj > 1
                              ? std::max(0.0, (sum_sq[k] - sum[k] * sum[k] / count) / (count - 1.0))
                              : 0.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gain saturation

double saturation_fixed_point(const RateSet& rates, const NonlinearParams& nl) {
    const double up = rates.gamma_up;
    const double down = rates.gamma_down;
    const double kappa = nl.kappa();
    if (kappa == 0.0 || down == 0.0) {
        if (up < down) return up / (down - up);
        throw NoFixedPoint("linear kinetics with gamma_up >= gamma_down runs away");
    }
    const double a = down * kappa;
    const double b = down - up;
    const double disc = std::sqrt(b * b + 4.0 * a * up);
    // Pick the form without cancellation.
    return b <= 0.0 ? (-b + disc) / (2.0 * a) : 2.0 * up / (b + disc);
}

double meanfield_rhs(const RateSet& rates, const NonlinearParams& nl, double n) {
    return rates.gamma_up * (1.0 + n) - rates.gamma_down * (n + nl.kappa() * n * n);
}

PopulationTrajectory meanfield_evolve(const RateSet& rates, const NonlinearParams& nl, double n0,
                                      std::span<const double> t_grid, const MeanOptions& opts) {
    if (!(n0 >= 0.0)) throw DomainError("initial population must be >= 0");
    ode::ScalarOptions so;
    so.rel_tol = opts.rel_tol;
    so.abs_tol = opts.abs_tol;
    so.ceiling = opts.population_ceiling;
    auto sol = ode::integrate_autonomous([&](double n) { return meanfield_rhs(rates, nl, n); }, n0,
                                         t_grid, so);
    PopulationTrajectory out;
    out.nbar = std::move(sol.values);
    out.times.assign(t_grid.begin(), t_grid.begin() + static_cast<std::ptrdiff_t>(out.nbar.size()));
    if (sol.hit_ceiling) out.status = RunStatus::ExponentialRunaway;
    return out;
}

}  // namespace rotbath
