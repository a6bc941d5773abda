#include <cmath>
#include <vector>

#include "doctest.h"
#include "rotbath/kinetics.hpp"

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

}  // namespace

TEST_CASE("kinetic right-hand side") {
    const BathSpec bath = flat_bath(1.0, 1.0, 0.8);
    const Mode stable(2.0, 1);
    const RateSet r = rates(bath, stable);
    const double n_inf = asymptotic_population(bath, stable);
    CHECK(std::abs(mean_rhs(r, Statistics::Bose, n_inf)) <= 1e-15);

    const RateSet marginal = rates(bath, Mode(1.0, 1));
    for (double n : {0.0, 3.0, 100.0}) CHECK(mean_rhs(marginal, Statistics::Bose, n) == doctest::Approx(marginal.gamma_down));

    const BathSpec cold = flat_bath(INFINITY, 1.0, 0.8);
    const RateSet super = rates(cold, Mode(0.4, 1));
    for (double n : {0.0, 2.5}) CHECK(mean_rhs(super, Statistics::Bose, n) == doctest::Approx(super.gamma_up * (1 + n)));
}

TEST_CASE("closed form") {
    const BathSpec bath = flat_bath(1.0, 1.0);
    const RateSet r = rates(bath, Mode(1.5, 1));
    CHECK(closed_form_mean(r, Statistics::Bose, 3.0, 0.0) == 3.0);
    const Mode fermion(0.3, 1, "0", Statistics::Fermi);
    const RateSet rf = rates(bath, fermion);
    CHECK(closed_form_mean(rf, Statistics::Fermi, 0.0, 200.0) ==
          doctest::Approx(1.0 / (std::exp(0.3 - 1.0) + 1.0)).epsilon(1e-14));

    RateSet growth;
    growth.gamma_up = 1.0;
    CHECK(closed_form_mean(growth, Statistics::Bose, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
}

TEST_CASE("evolve_mean tracks the closed form") {
    const BathSpec bath = flat_bath(0.7, 1.0, 0.6);
    for (const Mode& mode : {Mode(2.0, 1), Mode(0.5, 1), Mode(1.0, 1), Mode(0.5, 1, "0", Statistics::Fermi)}) {
        const RateSet r = rates(bath, mode);
        const double n0 = mode.statistics() == Statistics::Bose ? 1.5 : 0.2;
        const auto g = grid(10.0 / (r.gamma_up + r.gamma_down), 51);
        const auto traj = evolve_mean(r, mode, n0, g);
        REQUIRE(traj.status == RunStatus::Completed);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(std::abs(traj.nbar[i] - closed_form_mean(r, mode.statistics(), n0, g[i])) <= 1e-8);
    }

    RateSet decoupled;
    const auto flat = evolve_mean(decoupled, Mode(1.0, 0), 2.0, grid(5.0, 6));
    for (double n : flat.nbar) CHECK(n == 2.0);

    CHECK_THROWS_AS(evolve_mean(decoupled, Mode(1.0, 0, "0", Statistics::Fermi), 1.5, grid(1.0, 3)), DomainError);
    CHECK_THROWS_AS(evolve_mean(decoupled, Mode(1.0, 0), 1.0, std::vector<double>{0.5, 1.0}), DomainError);
}

TEST_CASE("superradiant growth rate and runaway status") {
    const double beta = 1.0;
    const BathSpec bath = flat_bath(beta, 1.0, 0.5);
    const Mode mode(0.4, 1);
    const RateSet r = rates(bath, mode);
    const double slope = r.gamma_down * (std::exp(-beta * (0.4 - 1.0)) - 1.0);
    const auto g = grid(60.0, 61);
    const auto traj = evolve_mean(r, mode, 0.0, g);
    const double n_inf = r.gamma_up / (r.gamma_down - r.gamma_up);
    const double measured = (std::log(traj.nbar[60] - n_inf) - std::log(traj.nbar[50] - n_inf)) / 10.0;
    CHECK(measured == doctest::Approx(slope).epsilon(1e-9));

    MeanOptions opts;
    opts.population_ceiling = 1e3;
    const auto capped = evolve_mean(r, mode, 0.0, g, opts);
    CHECK(capped.status == RunStatus::ExponentialRunaway);
    CHECK(capped.nbar.size() < g.size());
    CHECK(capped.nbar.back() > 1e3);
}

TEST_CASE("asymptotic populations") {
    CHECK(asymptotic_population(flat_bath(2.0, 1.0), Mode(1.0, 1, "0", Statistics::Fermi)) == 0.5);
    CHECK(asymptotic_population(flat_bath(1.0, 0.0), Mode(std::log(2.0), 0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(asymptotic_population(flat_bath(1.0, 0.0), Mode(std::log(1.5), 0)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(asymptotic_population(flat_bath(1.0, 1.0), Mode(0.5, 1)), NoStationaryPopulation);
    CHECK_THROWS_AS(asymptotic_population(flat_bath(1.0, 1.0), Mode(1.0, 1)), NoStationaryPopulation);
    CHECK(asymptotic_population(flat_bath(INFINITY, 1.0), Mode(0.5, 1, "0", Statistics::Fermi)) == 1.0);
}

TEST_CASE("emission spectrum") {
    const auto cold = InverseTemperature::infinite();
    const BathSpec bath(cold, 1.0, ohmic_spectrum(1.0, 1.0, 10.0, cold));
    std::vector<Mode> modes;
    for (double w : {0.25, 0.5, 1.0, 1.5, 2.5})
        for (int m = -1; m <= 2; ++m) modes.emplace_back(w, m);
    const auto lines = emission_spectrum(bath, modes, 3);
    REQUIRE(lines.size() == modes.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        CHECK(lines[i].mode == modes[i]);
        const double gap = modes[i].m() * 1.0 - modes[i].omega();
        if (gap > 0.0)
            CHECK(lines[i].spontaneous_rate == doctest::Approx(gap * std::exp(-gap / 10.0)).epsilon(1e-15));
        else
            CHECK(lines[i].spontaneous_rate == 0.0);
    }

    const auto warm = InverseTemperature::finite(2.0);
    const BathSpec still(warm, 0.0, ohmic_spectrum(1.0, 1.0, 10.0, warm));
    const Mode m(1.3, 2);
    const auto line = emission_spectrum(still, std::vector<Mode>{m}).front();
    CHECK(line.spontaneous_rate == doctest::Approx(1.3 * std::exp(-0.13) * std::exp(-2.6)).epsilon(1e-14));
}
