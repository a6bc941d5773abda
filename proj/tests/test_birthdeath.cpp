#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "rotbath/birthdeath.hpp"

using namespace rotbath;

namespace {

BathSpec flat_bath(double beta, double omega_rot, double level = 1.0) {
    const auto b = InverseTemperature::from_double(beta);
    return BathSpec(b, omega_rot, flat_spectrum(level, b));
}

std::vector<double> grid(double t_max, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = t_max * static_cast<double>(i) / (n - 1);
    return g;
}

// Exact stationary mean of the chain by detailed balance.
double chain_mean(double up, double down, double kappa) {
    double w = 1.0, z = 0.0, m = 0.0;
    for (int n = 0; n < 2000; ++n) {
        z += w;
        m += n * w;
        w *= up * (n + 1.0) / (down * ((n + 1.0) + kappa * (n + 1.0) * (n + 1.0)));
    }
    return m / z;
}

}  // namespace

TEST_CASE("generator structure") {
    const BathSpec bath = flat_bath(1.0, 1.0);
    const Mode fermion(0.5, 1, "0", Statistics::Fermi);
    const RateSet rf = rates(bath, fermion);
    const auto lp = bd_generator(rf, Statistics::Fermi, {}, point_distribution(fermion, 0, 1).probs);
    CHECK(lp[0] == doctest::Approx(-rf.gamma_up));
    CHECK(lp[1] == doctest::Approx(rf.gamma_up));

    const RateSet rb = rates(bath, Mode(2.0, 1));
    CHECK(down_rate(rb, NonlinearParams(0.3), 1) == doctest::Approx(rb.gamma_down * 1.3));
    CHECK_THROWS_AS(NonlinearParams(-0.1), DomainError);

    const auto pi = stationary_distribution(rb, Statistics::Bose, {}, 200);
    const auto residual = bd_generator(rb, Statistics::Bose, {}, pi);
    for (double v : residual) CHECK(std::abs(v) <= 1e-15);
    const double ratio = std::exp(-(2.0 - 1.0));
    for (std::size_t n = 0; n + 1 < 50; ++n) CHECK(pi[n + 1] / pi[n] == doctest::Approx(ratio).epsilon(1e-12));
}

TEST_CASE("first moment matches the closed form") {
    const BathSpec bath = flat_bath(0.8, 1.0, 0.7);
    for (const Mode& mode : {Mode(2.0, 1), Mode(0.4, 1, "0", Statistics::Fermi), Mode(1.6, 0)}) {
        const RateSet r = rates(bath, mode);
        const std::size_t n0 = mode.statistics() == Statistics::Bose ? 3 : 1;
        const auto run = evolve_distribution(r, {}, point_distribution(mode, n0, 16), grid(15.0, 16));
        REQUIRE(run.status == RunStatus::Completed);
        for (const auto& d : run.snapshots) {
            CHECK(std::abs(d.mean() - closed_form_mean(r, mode.statistics(), static_cast<double>(n0), d.time)) <= 1e-6);
            CHECK(std::abs(d.total() - 1.0) <= 1e-9);
            CHECK(*std::min_element(d.probs.begin(), d.probs.end()) >= 0.0);
        }
    }
}

TEST_CASE("relaxation to the geometric distribution") {
    const BathSpec bath = flat_bath(1.0, 0.5);
    const Mode mode(1.2, 1);
    const RateSet r = rates(bath, mode);
    const auto run = evolve_distribution(r, {}, point_distribution(mode, 4, 16), std::vector<double>{0.0, 80.0});
    const auto& last = run.snapshots.back();
    const double q = std::exp(-(1.2 - 0.5));
    CHECK(last.mean() == doctest::Approx(1.0 / std::expm1(0.7)).epsilon(1e-8));
    for (std::size_t n = 0; n + 1 < 20; ++n) CHECK(last.probs[n + 1] / last.probs[n] == doctest::Approx(q).epsilon(1e-6));

    RateSet decay;
    decay.gamma_down = 1.0;
    const auto drained = evolve_distribution(decay, {}, point_distribution(mode, 5, 16), std::vector<double>{0.0, 40.0});
    CHECK(drained.snapshots.back().probs[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adaptive cutoff and runaway truncation") {
    const BathSpec bath = flat_bath(1.0, 1.0);
    const Mode mode(0.5, 1);
    const RateSet r = rates(bath, mode);
    const auto run = evolve_distribution(r, {}, point_distribution(mode, 0, 8), grid(8.0, 9));
    REQUIRE(run.status == RunStatus::Completed);
    CHECK(run.final_cutoff > 8);
    for (const auto& d : run.snapshots)
        CHECK(std::abs(d.mean() - closed_form_mean(r, Statistics::Bose, 0.0, d.time)) <= 1e-6);

    DistributionOptions tight;
    tight.hard_ceiling = 256;
    const auto capped = evolve_distribution(r, {}, point_distribution(mode, 0, 8), grid(40.0, 41), tight);
    CHECK(capped.status == RunStatus::RunawayTruncation);
    CHECK(capped.snapshots.size() < 41);
    CHECK_FALSE(capped.snapshots.empty());
}

TEST_CASE("thermal initial distribution") {
    const auto d = thermal_distribution(Mode(1.0, 0), 2.0, 1e-16);
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.mean() == doctest::Approx(2.0).epsilon(1e-12));
    const auto f = thermal_distribution(Mode(1.0, 0, "0", Statistics::Fermi), 0.25);
    CHECK(f.probs == std::vector<double>{0.75, 0.25});
    CHECK_THROWS_AS(thermal_distribution(Mode(1.0, 0, "0", Statistics::Fermi), 1.5), DomainError);
}

TEST_CASE("gillespie") {
    const BathSpec bath = flat_bath(1.0, 1.0);
    const std::vector<double> checkpoints{0.5, 1.0, 2.0, 4.0, 8.0};

    GillespieOptions opts;
    opts.n_traj = 4000;
    opts.seed = 1234;
    opts.threads = 2;
    opts.sample_paths = 20;

    const Mode fermion(0.4, 1, "0", Statistics::Fermi);
    const auto fres = gillespie(rates(bath, fermion), Statistics::Fermi, {}, 0, checkpoints, opts);
    for (const auto& path : fres.sample_paths)
        for (auto n : path) CHECK(n <= 1);

    RateSet frozen;
    const auto still = gillespie(frozen, Statistics::Bose, {}, 7, checkpoints, opts);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        CHECK(still.mean[i] == 7.0);
        CHECK(still.variance[i] == 0.0);
    }

    const Mode boson(1.7, 1);
    const RateSet r = rates(bath, boson);
    const auto res = gillespie(r, Statistics::Bose, {}, 2, checkpoints, opts);
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        CHECK(std::abs(res.mean[i] - closed_form_mean(r, Statistics::Bose, 2.0, checkpoints[i])) <=
              3.5 * res.standard_error(i));

    GillespieOptions other = opts;
    other.threads = 5;
    const auto again = gillespie(r, Statistics::Bose, {}, 2, checkpoints, other);
    CHECK(again.mean == res.mean);
    CHECK(again.variance == res.variance);
    CHECK(again.sample_paths == res.sample_paths);
}

TEST_CASE("saturation") {
    const BathSpec bath = flat_bath(1.0, 1.0);
    const Mode mode(1.0 - std::log(2.0), 1);  // gamma_up / gamma_down = 2
    const RateSet r = rates(bath, mode);
    CHECK(r.gamma_up / r.gamma_down == doctest::Approx(2.0).epsilon(1e-14));
    const NonlinearParams nl(0.1);
    const double n_star = saturation_fixed_point(r, nl);
    CHECK(n_star == doctest::Approx((1.0 + std::sqrt(1.8)) / 0.2).epsilon(1e-13));

    const auto from_zero = meanfield_evolve(r, nl, 0.0, grid(20.0 / r.gamma_down, 201));
    for (std::size_t i = 1; i < from_zero.nbar.size(); ++i) CHECK(from_zero.nbar[i] >= from_zero.nbar[i - 1]);
    CHECK(std::abs(from_zero.nbar.back() - n_star) <= 1e-6);
    const auto at_fixed = meanfield_evolve(r, nl, n_star, grid(10.0, 11));
    for (double n : at_fixed.nbar) CHECK(n == doctest::Approx(n_star).epsilon(1e-12));

    // The exact chain saturates below the mean-field root; the stochastic mean follows the chain.
    const double exact = chain_mean(r.gamma_up, r.gamma_down, 0.1);
    CHECK(exact == doctest::Approx(10.0585).epsilon(1e-4));
    GillespieOptions opts;
    opts.n_traj = 4000;
    opts.seed = 99;
    opts.threads = 3;
    const auto late = gillespie(r, Statistics::Bose, nl, 0, std::vector<double>{150.0}, opts);
    CHECK(std::abs(late.mean[0] - exact) <= 3.5 * late.standard_error(0));

    RateSet weak = r;
    weak.gamma_up = 1e-12;
    CHECK(saturation_fixed_point(weak, nl) <= 1e-11);
    double previous = n_star;
    for (double kappa : {1.0, 1e3, 1e6, 1e12}) {
        const double n = saturation_fixed_point(r, NonlinearParams(kappa));
        CHECK(n < previous);
        previous = n;
    }
    CHECK(previous <= 2e-6);
    CHECK_THROWS_AS(saturation_fixed_point(r, NonlinearParams(0.0)), NoFixedPoint);

    const Mode stable(2.0, 1);
    const RateSet rs = rates(bath, stable);
    const auto g = grid(10.0, 21);
    const auto mf = meanfield_evolve(rs, {}, 1.0, g);
    const auto kin = evolve_mean(rs, stable, 1.0, g);
    CHECK(mf.nbar == kin.nbar);
}
