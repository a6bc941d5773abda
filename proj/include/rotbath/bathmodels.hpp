#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotbath/beta.hpp"

namespace rotbath {

enum class SpectrumFamily { Ohmic, Flat, HawkingFormFactor, FromCorrelation, Custom };

std::string to_string(SpectrumFamily family);

// A rate as a function of frequency.
using RateFunction = std::function<double(double)>;

// Coupling spectrum gamma0(x) of a non-rotating bath: the Fourier transform of
// the bath autocorrelation. Total on the real line and nonnegative. Every
// factory except arbitrary_spectrum() builds the x < 0 branch from the x > 0
// branch by the KMS relation at beta_ref, so detailed balance holds by
// construction. gamma0 already includes the squared coupling constant.
class CouplingSpectrum {
public:
    double operator()(double x) const;

    SpectrumFamily family() const noexcept { return family_; }
    // Family parameters in declaration order: Ohmic {A, s, x_c}, Flat {c}, others {}.
    const std::vector<double>& params() const noexcept { return params_; }
    InverseTemperature beta_ref() const noexcept { return beta_ref_; }
    bool kms_by_construction() const noexcept { return kms_; }

private:
    friend CouplingSpectrum kms_extend_family(RateFunction, InverseTemperature, SpectrumFamily,
                                              std::vector<double>, std::optional<double>);
    friend CouplingSpectrum arbitrary_spectrum(RateFunction, InverseTemperature);

    CouplingSpectrum(SpectrumFamily family, std::vector<double> params, InverseTemperature beta,
                     RateFunction positive_part, double origin, bool kms);

    SpectrumFamily family_;
    std::vector<double> params_;
    InverseTemperature beta_ref_;
    std::shared_ptr<const RateFunction> positive_part_;
    double origin_;
    bool kms_;
};

// gamma(x) = positive_part(x) for x > 0 and gamma(-x) = e^{-beta x} positive_part(x).
// gamma(0) is the right limit of positive_part when finite, else 0.
// Evaluating where positive_part is negative throws PositivityViolation.
CouplingSpectrum kms_extend(RateFunction positive_part, InverseTemperature beta);

// Internal building block shared by the named families.
CouplingSpectrum kms_extend_family(RateFunction positive_part, InverseTemperature beta,
                                   SpectrumFamily family, std::vector<double> params,
                                   std::optional<double> origin);

// Wraps a full-line function with no KMS guarantee (fault injection, external data).
CouplingSpectrum arbitrary_spectrum(RateFunction full_line, InverseTemperature beta_ref);

// A * x^s * e^{-x/x_c} on x > 0, zero at the origin.
CouplingSpectrum ohmic_spectrum(double amplitude, double exponent, double cutoff,
                                InverseTemperature beta);

// Constant c on x > 0 (and at the origin).
CouplingSpectrum flat_spectrum(double level, InverseTemperature beta);

// Absorption channel |f|^2 on x > 0; emission channel e^{-beta_H |x|} |f|^2 on x < 0,
// i.e. |g|^2/|f|^2 = e^{-beta_H omega}.
CouplingSpectrum hawking_spectrum(RateFunction formfactor_sq, InverseTemperature beta_hawking);

// Bath autocorrelation F(tau) sampled on the symmetric uniform window
// tau_j = -T + j*dt, j = 0..2M.
class CorrelationFunction {
public:
    CorrelationFunction(std::vector<std::complex<double>> samples, double dt);

    static CorrelationFunction sample(const std::function<std::complex<double>(double)>& fn,
                                      double half_window, double dt);

    // Accepts (tau, F) pairs; spacing must be uniform and the window symmetric about 0.
    static CorrelationFunction from_columns(std::span<const double> tau,
                                            std::span<const std::complex<double>> values);

    const std::vector<std::complex<double>>& samples() const noexcept { return samples_; }
    double dt() const noexcept { return dt_; }
    double half_window() const noexcept;
    double tau(std::size_t j) const noexcept;
    // max_j |F(-tau_j) - conj F(tau_j)|
    double hermiticity_residual() const;

private:
    std::vector<std::complex<double>> samples_;
    double dt_;
};

// Two- or three-column delimited text (tau, Re F[, Im F]); '#' comments and an
// optional header line "tau,re_F[,im_F]". Comma or whitespace separated.
CorrelationFunction parse_correlation_text(const std::string& text);
CorrelationFunction read_correlation_file(const std::string& path);

struct QuadratureTolerances {
    double negative = 1e-9;   // results below -negative are a positivity violation
    double tail = 1e-8;       // |F(+-T)| must not exceed this
    double imaginary = 1e-8;  // |Im G| above this raises the warning flag
};

struct SpectralEstimate {
    double value = 0.0;
    double imag_residue = 0.0;
    bool imag_warning = false;
};

// G(omega) = int F(tau) e^{i omega tau} dtau by the trapezoidal rule.
SpectralEstimate spectrum_from_correlation(const CorrelationFunction& F, double omega,
                                           const QuadratureTolerances& tol = {});

// Spectrum whose positive branch is the transform of F, KMS-extended at beta.
CouplingSpectrum correlation_spectrum(CorrelationFunction F, InverseTemperature beta,
                                      const QuadratureTolerances& tol = {});

// max over grid of |gamma(-x) - e^{-beta x} gamma(x)| / max(gamma(x), eps).
double kms_check(const CouplingSpectrum& spectrum, InverseTemperature beta,
                 std::span<const double> grid);

// n points log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace rotbath
