#include "rotbath/bathmodels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rotbath/errors.hpp"

namespace rotbath {

namespace {

constexpr double kResidualFloor = 1e-300;

double checked_rate(const RateFunction& fn, double x) {
    const double v = fn(x);
    if (std::isnan(v)) throw PositivityViolation("coupling spectrum is NaN at x = " + std::to_string(x));
    if (v < 0.0)
        throw PositivityViolation("coupling spectrum is negative (" + std::to_string(v) +
                                  ") at x = " + std::to_string(x));
    return v;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be finite and > 0");
}

}  // namespace

std::string to_string(SpectrumFamily family) {
    switch (family) {
        case SpectrumFamily::Ohmic: return "ohmic";
        case SpectrumFamily::Flat: return "flat";
        case SpectrumFamily::HawkingFormFactor: return "hawking";
        case SpectrumFamily::FromCorrelation: return "correlation";
        case SpectrumFamily::Custom: return "custom";
    }
    return "unknown";
}

CouplingSpectrum::CouplingSpectrum(SpectrumFamily family, std::vector<double> params,
                                   InverseTemperature beta, RateFunction positive_part,
                                   double origin, bool kms)
    : family_(family),
      params_(std::move(params)),
      beta_ref_(beta),
      positive_part_(std::make_shared<const RateFunction>(std::move(positive_part))),
      origin_(origin),
      kms_(kms) {}

double CouplingSpectrum::operator()(double x) const {
    if (!kms_) return checked_rate(*positive_part_, x);
    if (x > 0.0) return checked_rate(*positive_part_, x);
    if (x == 0.0) return origin_;
    if (std::isnan(x)) throw DomainError("coupling spectrum evaluated at NaN");
    const double factor = beta_ref_.boltzmann(-x);
    if (factor == 0.0) return 0.0;
    return factor * checked_rate(*positive_part_, -x);
}

CouplingSpectrum kms_extend_family(RateFunction positive_part, InverseTemperature beta,
                                   SpectrumFamily family, std::vector<double> params,
                                   std::optional<double> origin) {
    if (!positive_part) throw DomainError("positive_part must be callable");
    double at_origin = 0.0;
    if (origin) {
        at_origin = *origin;
    } else {
        const double limit = positive_part(std::numeric_limits<double>::min());
        if (std::isfinite(limit)) at_origin = limit;
    }
    if (at_origin < 0.0) throw PositivityViolation("coupling spectrum is negative at the origin");

    // Probe the positive branch so that gross sign errors surface at construction.
    for (double x : log_grid(1e-6, 1e6, 61)) checked_rate(positive_part, x);

    return CouplingSpectrum(family, std::move(params), beta, std::move(positive_part), at_origin, true);
}

CouplingSpectrum kms_extend(RateFunction positive_part, InverseTemperature beta) {
    return kms_extend_family(std::move(positive_part), beta, SpectrumFamily::Custom, {}, std::nullopt);
}

CouplingSpectrum arbitrary_spectrum(RateFunction full_line, InverseTemperature beta_ref) {
    if (!full_line) throw DomainError("spectrum function must be callable");
    return CouplingSpectrum(SpectrumFamily::Custom, {}, beta_ref, std::move(full_line), 0.0, false);
}

CouplingSpectrum ohmic_spectrum(double amplitude, double exponent, double cutoff,
                                InverseTemperature beta) {
    require_positive(amplitude, "ohmic amplitude");
    require_positive(exponent, "ohmic exponent");
    require_positive(cutoff, "ohmic cutoff");
    auto fn = [amplitude, exponent, cutoff](double x) {
        return amplitude * std::pow(x, exponent) * std::exp(-x / cutoff);
    };
    return kms_extend_family(fn, beta, SpectrumFamily::Ohmic, {amplitude, exponent, cutoff}, 0.0);
}

CouplingSpectrum flat_spectrum(double level, InverseTemperature beta) {
    require_positive(level, "flat spectrum level");
    auto fn = [level](double) { return level; };
    return kms_extend_family(fn, beta, SpectrumFamily::Flat, {level}, level);
}

CouplingSpectrum hawking_spectrum(RateFunction formfactor_sq, InverseTemperature beta_hawking) {
    return kms_extend_family(std::move(formfactor_sq), beta_hawking,
                             SpectrumFamily::HawkingFormFactor, {}, std::nullopt);
}

// ---------------------------------------------------------------------------
// Correlation functions

CorrelationFunction::CorrelationFunction(std::vector<std::complex<double>> samples, double dt)
    : samples_(std::move(samples)), dt_(dt) {
    require_positive(dt_, "correlation sample spacing");
    if (samples_.size() < 3 || samples_.size() % 2 == 0)
        throw DomainError("correlation window needs an odd number (>= 3) of samples centred on tau = 0");
}

CorrelationFunction CorrelationFunction::sample(
    const std::function<std::complex<double>(double)>& fn, double half_window, double dt) {
    require_positive(half_window, "correlation half window");
    require_positive(dt, "correlation sample spacing");
    const auto half = static_cast<std::size_t>(std::llround(half_window / dt));
    std::vector<std::complex<double>> values(2 * half + 1);
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double tau = (static_cast<double>(j) - static_cast<double>(half)) * dt;
        values[j] = fn(tau);
    }
    return CorrelationFunction(std::move(values), dt);
}

CorrelationFunction CorrelationFunction::from_columns(std::span<const double> tau,
                                                      std::span<const std::complex<double>> values) {
    if (tau.size() != values.size()) throw DomainError("tau and F columns differ in length");
    if (tau.size() < 3) throw DomainError("correlation needs at least three samples");
    const double dt = (tau.back() - tau.front()) / static_cast<double>(tau.size() - 1);
    require_positive(dt, "correlation sample spacing");
    for (std::size_t j = 1; j < tau.size(); ++j) {
        if (std::abs((tau[j] - tau[j - 1]) - dt) > 1e-6 * dt)
            throw DomainError("correlation tau spacing is not uniform at row " + std::to_string(j));
    }
    if (std::abs(tau.front() + tau.back()) > 1e-6 * dt)
        throw DomainError("correlation window must be symmetric about tau = 0");
    return CorrelationFunction(std::vector<std::complex<double>>(values.begin(), values.end()), dt);
}

double CorrelationFunction::half_window() const noexcept {
    return static_cast<double>(samples_.size() / 2) * dt_;
}

double CorrelationFunction::tau(std::size_t j) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(samples_.size() / 2)) * dt_;
}

double CorrelationFunction::hermiticity_residual() const {
    double worst = 0.0;
    const std::size_t n = samples_.size();
    for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(samples_[n - 1 - j] - std::conj(samples_[j])));
    return worst;
}

CorrelationFunction parse_correlation_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> tau;
    std::vector<std::complex<double>> values;
    std::size_t columns = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::vector<double> cells;
        std::string cell;
        bool numeric = true;
        while (row >> cell) {
            try {
                std::size_t used = 0;
                cells.push_back(std::stod(cell, &used));
                if (used != cell.size()) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (tau.empty() && columns == 0) continue;  // header line
            throw DomainError("correlation file line " + std::to_string(lineno) + ": non-numeric cell");
        }
        if (cells.size() != 2 && cells.size() != 3)
            throw DomainError("correlation file line " + std::to_string(lineno) +
                              ": expected 2 or 3 columns");
        if (columns == 0) columns = cells.size();
        if (cells.size() != columns)
            throw DomainError("correlation file line " + std::to_string(lineno) + ": column count changed");
        tau.push_back(cells[0]);
        values.emplace_back(cells[1], columns == 3 ? cells[2] : 0.0);
    }
    return CorrelationFunction::from_columns(tau, values);
}

CorrelationFunction read_correlation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open correlation file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_correlation_text(buf.str());
}

SpectralEstimate spectrum_from_correlation(const CorrelationFunction& F, double omega,
                                           const QuadratureTolerances& tol) {
    const auto& s = F.samples();
    if (std::abs(s.front()) > tol.tail || std::abs(s.back()) > tol.tail)
        throw DomainError("correlation window too short: |F(+-T)| exceeds the tail tolerance");

    const double dt = F.dt();
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double weight = (j == 0 || j + 1 == s.size()) ? 0.5 : 1.0;
        acc += weight * s[j] * std::polar(1.0, omega * F.tau(j));
    }
    acc *= dt;

    SpectralEstimate out;
    out.value = acc.real();
    out.imag_residue = acc.imag();
    out.imag_warning = std::abs(acc.imag()) > tol.imaginary;
    if (out.value < -tol.negative)
        throw PositivityViolation("correlation transform is negative (" + std::to_string(out.value) +
                                  ") at omega = " + std::to_string(omega));
    return out;
}

CouplingSpectrum correlation_spectrum(CorrelationFunction F, InverseTemperature beta,
                                      const QuadratureTolerances& tol) {
    auto shared = std::make_shared<const CorrelationFunction>(std::move(F));
    auto fn = [shared, tol](double x) {
        return std::max(0.0, spectrum_from_correlation(*shared, x, tol).value);
    };
    const double origin = std::max(0.0, spectrum_from_correlation(*shared, 0.0, tol).value);
    return kms_extend_family(fn, beta, SpectrumFamily::FromCorrelation, {}, origin);
}

double kms_check(const CouplingSpectrum& spectrum, InverseTemperature beta,
                 std::span<const double> grid) {
    if (grid.empty()) throw DomainError("kms_check needs a nonempty grid");
    double worst = 0.0;
    for (double x : grid) {
        if (!(x > 0.0)) throw DomainError("kms_check grid points must be > 0");
        const double forward = spectrum(x);
        const double backward = spectrum(-x);
        const double predicted = forward == 0.0 ? 0.0 : beta.boltzmann(x) * forward;
        worst = std::max(worst, std::abs(backward - predicted) / std::max(forward, kResidualFloor));
    }
    return worst;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_grid needs 0 < lo < hi and n >= 2");
    std::vector<double> out(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    out.back() = hi;
    return out;
}

}  // namespace rotbath
