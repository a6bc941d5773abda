#include <cmath>
#include <vector>

#include "doctest.h"
#include "rotbath/thermo.hpp"

using namespace rotbath;

namespace {

BathSpec ohmic_bath(double beta, double omega_rot) {
    const auto b = InverseTemperature::from_double(beta);
    return BathSpec(b, omega_rot, ohmic_spectrum(1.0, 1.0, 10.0, b));
}

std::vector<double> grid(double t_max, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = t_max * static_cast<double>(i) / (n - 1);
    return g;
}

}  // namespace

TEST_CASE("entropy") {
    const Mode boson(1.0, 0);
    CHECK(entropy(point_distribution(boson, 0, 10)) == 0.0);
    const ModeDistribution coin{{0.5, 0.5}, Mode(1.0, 0, "0", Statistics::Fermi), 0.0};
    CHECK(entropy(coin) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    for (double nbar : {0.1, 1.0, 7.5}) {
        const auto geo = thermal_distribution(boson, nbar, 1e-18);
        const double oracle = (nbar + 1.0) * std::log(nbar + 1.0) - nbar * std::log(nbar);
        CHECK(entropy(geo) == doctest::Approx(oracle).epsilon(1e-12));
    }
    const std::vector<ModeDistribution> both{coin, coin};
    CHECK(entropy(both) == doctest::Approx(2.0 * std::log(2.0)));
}

TEST_CASE("entropy production") {
    const BathSpec bath = ohmic_bath(1.0, 0.4);
    const Mode mode(1.5, 1);
    const RateSet r = rates(bath, mode);
    const auto pi = stationary_distribution(r, Statistics::Bose, {}, 300);
    const ModeDistribution eq{pi, mode, 0.0};
    CHECK(std::abs(entropy_production(eq, r).sigma) <= 1e-10);

    const auto run = evolve_distribution(r, {}, thermal_distribution(mode, 4.0), grid(10.0, 21));
    for (const auto& d : run.snapshots) CHECK(entropy_production(d, r).sigma >= -1e-12);

    const auto point = entropy_production(point_distribution(mode, 2, 10), r);
    CHECK(point.regularized);
    CHECK(point.sigma >= 0.0);
}

TEST_CASE("heat current signs") {
    const BathSpec cold = ohmic_bath(INFINITY, 1.0);
    const std::vector<Mode> set{Mode(0.3, 1), Mode(0.9, 2)};
    std::vector<double> n_dot;
    double oracle = 0.0;
    for (const auto& m : set) {
        const RateSet r = rates(cold, m);
        n_dot.push_back(r.gamma_up * (1.0 + 0.5));
        oracle += (m.omega() - m.m() * 1.0) * r.gamma_up * 1.5;
    }
    CHECK(heat_current(set, n_dot, cold) == doctest::Approx(oracle));
    CHECK(heat_current(set, n_dot, cold) < 0.0);
    CHECK(heat_current(set, std::vector<double>{0.0, 0.0}, cold) == 0.0);
    CHECK_THROWS_AS(heat_current(set, std::vector<double>{1.0}, cold), AlignmentError);

    const BathSpec warm = ohmic_bath(1.0, 0.3);
    const Mode m(1.0, 1);
    const RateSet r = rates(warm, m);
    const double above = asymptotic_population(warm, m) + 2.0;
    CHECK(heat_current(std::vector<Mode>{m}, std::vector<double>{mean_rhs(r, Statistics::Bose, above)}, warm) < 0.0);
}

TEST_CASE("energy balance") {
    for (double omega_rot : {0.0, 0.6}) {
        const BathSpec bath = ohmic_bath(INFINITY, omega_rot);
        std::vector<MeanTrajectory> trajs;
        const std::vector<Mode> modes = omega_rot > 0.0 ? std::vector<Mode>{Mode(0.3, 1), Mode(1.4, 3)}
                                                        : std::vector<Mode>{Mode(0.3, 1), Mode(2.0, 0)};
        for (const Mode& m : modes)
            trajs.push_back(evolve_mean(rates(bath, m), m, 0.5, grid(2.0, 11)));
        for (const auto& row : energy_balance(trajs, bath)) {
            CHECK(row.residual <= 1e-10 * std::max(std::abs(row.U_dot), 1.0));
            if (omega_rot == 0.0) CHECK(row.U_dot == doctest::Approx(row.J).epsilon(1e-15));
            if (omega_rot > 0.0) {
                CHECK(row.U_dot > 0.0);
                CHECK(row.J < 0.0);
            }
        }
    }
}

TEST_CASE("ledger on exact trajectories") {
    const BathSpec bath = ohmic_bath(1.2, 0.3);
    std::vector<ModeDistribution> init{thermal_distribution(Mode(1.0, 1), 2.0),
                                       thermal_distribution(Mode(0.5, 2, "f", Statistics::Fermi), 0.1)};
    LedgerOptions opts;
    opts.threads = 2;
    opts.distribution.tail_tol = 1e-14;
    const auto ledger = build_ledger(bath, init, {}, grid(6.0, 13), opts);
    REQUIRE(ledger.rows.size() == 13);
    for (const auto& row : ledger.rows) {
        CHECK(row.sigma >= -1e-12);
        CHECK(row.residual_second_law <= 1e-5 * std::max(std::abs(row.S_dot), ledger.rate_scale));
        CHECK(row.residual_first_law <= 1e-10 * std::max(std::abs(row.U_dot), ledger.rate_scale));
    }
    CHECK_THROWS_AS(build_ledger(ohmic_bath(INFINITY, 0.3), init, {}, grid(1.0, 3)), DomainError);
}

TEST_CASE("black hole ledger") {
    const auto e = bh_ledger(std::vector<Quantum>{{0.5, 1, 1.0}}, 1.0, 1.0);
    CHECK(e.dM == -0.5);
    CHECK(e.dL == -1.0);
    CHECK(e.dA == 2.0);
    const auto boundary = bh_ledger(std::vector<Quantum>{{2.0, 2, 3.0}}, 1.0, 0.7);
    CHECK(boundary.dA == 0.0);
    CHECK_THROWS_AS(bh_ledger(std::vector<Quantum>{}, 1.0, 0.0), DomainError);
}
