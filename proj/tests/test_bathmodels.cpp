#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "rotbath/bathmodels.hpp"
#include "rotbath/errors.hpp"

using namespace rotbath;

TEST_CASE("ohmic closed form and KMS branch") {
    const auto beta = InverseTemperature::finite(1.0);
    const auto spec = ohmic_spectrum(1.0, 1.0, 10.0, beta);
    CHECK(spec(0.0) == 0.0);
    CHECK(spec(2.0) == doctest::Approx(2.0 * std::exp(-0.2)).epsilon(1e-15));
    CHECK(spec(-2.0) == doctest::Approx(std::exp(-2.0) * 2.0 * std::exp(-0.2)).epsilon(1e-15));
    const auto cold = ohmic_spectrum(1.0, 1.0, 10.0, InverseTemperature::infinite());
    CHECK(cold(-2.0) == 0.0);
    CHECK(cold(2.0) > 0.0);
    CHECK(spec.family() == SpectrumFamily::Ohmic);
    CHECK(spec.kms_by_construction());
}

TEST_CASE("kms_extend") {
    const auto beta = InverseTemperature::finite(2.0);
    const auto flat = flat_spectrum(0.7, beta);
    for (double x : {0.1, 1.0, 5.0}) CHECK(flat(-x) == doctest::Approx(0.7 * std::exp(-2.0 * x)).epsilon(1e-15));
    const auto linear = kms_extend([](double x) { return x; }, beta);
    CHECK(linear(-1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(kms_check(linear, beta, log_grid(1e-3, 10.0, 50)) <= 1e-14);
    const auto cold = kms_extend([](double x) { return 1.0 + x; }, InverseTemperature::infinite());
    CHECK(cold(-0.5) == 0.0);
    CHECK(cold(-50.0) == 0.0);
    CHECK_THROWS_AS(kms_extend([](double x) { return 1.0 - x; }, beta), PositivityViolation);
}

TEST_CASE("hawking form factor") {
    const auto beta = InverseTemperature::finite(1.0);
    const auto spec = hawking_spectrum([](double) { return 1.0; }, beta);
    for (double w : {0.2, 1.0, 3.0}) CHECK(spec(-w) / spec(w) == doctest::Approx(std::exp(-w)).epsilon(1e-15));
    CHECK(kms_check(spec, beta, log_grid(1e-3, 20.0, 100)) <= 1e-14);
    const auto cold = hawking_spectrum([](double) { return 1.0; }, InverseTemperature::infinite());
    CHECK(cold(-0.1) == 0.0);
}

TEST_CASE("kms_check detects a corrupted model") {
    const double beta_v = 1e-3;
    const auto beta = InverseTemperature::finite(beta_v);
    const auto good = flat_spectrum(1.0, beta);
    const auto corrupted = arbitrary_spectrum(
        [good](double x) { return x == -1.0 ? 1.1 * good(x) : good(x); }, beta);
    const std::vector<double> grid{0.5, 1.0, 2.0};
    CHECK(kms_check(good, beta, grid) <= 1e-14);
    CHECK(kms_check(corrupted, beta, grid) == doctest::Approx(0.1).epsilon(1e-2));
}

TEST_CASE("spectrum from correlation: exponential kernel") {
    const auto F = CorrelationFunction::sample(
        [](double t) { return std::complex<double>(std::exp(-std::abs(t)), 0.0); }, 30.0, 1e-3);
    for (double w : {0.0, 0.5, 1.0, 3.0}) {
        const auto est = spectrum_from_correlation(F, w, {1e-9, 1e-8, 1e-8});
        CHECK(std::abs(est.value - 2.0 / (1.0 + w * w)) <= 1e-6);
        CHECK_FALSE(est.imag_warning);
    }
}

TEST_CASE("spectrum from correlation: gaussian kernels") {
    const double pi = std::numbers::pi;
    const auto narrow = CorrelationFunction::sample(
        [](double t) { return std::complex<double>(std::exp(-t * t / (2 * 0.01)), 0.0); }, 2.0, 1e-3);
    CHECK(spectrum_from_correlation(narrow, 0.0).value == doctest::Approx(std::sqrt(2 * pi * 0.01)).epsilon(1e-8));

    const double w0 = 3.0;
    const auto F = CorrelationFunction::sample(
        [w0](double t) { return std::complex<double>(std::cos(w0 * t) * std::exp(-t * t), 0.0); }, 8.0, 1e-3);
    auto oracle = [&](double w) {
        return 0.5 * std::sqrt(pi) * (std::exp(-(w - w0) * (w - w0) / 4) + std::exp(-(w + w0) * (w + w0) / 4));
    };
    for (double w : {-4.0, -3.0, 0.0, 1.0, 3.0})
        CHECK(std::abs(spectrum_from_correlation(F, w).value - oracle(w)) <= 1e-8);
    CHECK(spectrum_from_correlation(F, 3.0).value == doctest::Approx(spectrum_from_correlation(F, -3.0).value));
}

TEST_CASE("correlation import and tail check") {
    const std::string text = "tau,re_F\n-1,0\n-0.5,0.5\n0,1\n0.5,0.5\n1,0\n";
    const auto F = parse_correlation_text(text);
    CHECK(F.samples().size() == 5);
    CHECK(F.dt() == 0.5);
    CHECK(F.hermiticity_residual() == 0.0);
    CHECK_THROWS_AS(parse_correlation_text("0,1\n0.5,2\n1.5,3\n"), DomainError);

    const auto wide = CorrelationFunction::sample(
        [](double t) { return std::complex<double>(std::exp(-std::abs(t)), 0.0); }, 2.0, 1e-2);
    CHECK_THROWS(spectrum_from_correlation(wide, 0.0));
}

TEST_CASE("log grid") {
    const auto g = log_grid(1e-2, 1e2, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(1e-2));
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK(g.back() == doctest::Approx(1e2));
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), DomainError);
}
