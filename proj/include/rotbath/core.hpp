#pragma once

#include <optional>
#include <span>
#include <string>
#include <tuple>

#include "rotbath/bathmodels.hpp"
#include "rotbath/beta.hpp"

namespace rotbath {

enum class Statistics { Bose, Fermi };
enum class Stability { Stable, Marginal, Superradiant };

std::string to_string(Statistics s);
std::string to_string(Stability s);
Statistics parse_statistics(const std::string& text);

// One field mode |omega, m, alpha>. Units hbar = 1.
class Mode {
public:
    Mode(double omega, int m, std::string alpha = "0", Statistics statistics = Statistics::Bose);

    double omega() const noexcept { return omega_; }
    int m() const noexcept { return m_; }
    const std::string& alpha() const noexcept { return alpha_; }
    Statistics statistics() const noexcept { return statistics_; }

    // The time-reversed mode (omega, -m); alpha is an opaque label and is kept.
    Mode time_reversed() const;

    friend bool operator==(const Mode&, const Mode&) = default;

    // Output ordering: (omega, m, alpha).
    friend bool operator<(const Mode& a, const Mode& b) {
        return std::tie(a.omega_, a.m_, a.alpha_) < std::tie(b.omega_, b.m_, b.alpha_);
    }

private:
    double omega_;
    int m_;
    std::string alpha_;
    Statistics statistics_;
};

// A bath at inverse temperature beta rotating with angular velocity Omega.
// Immutable; the spectrum must have been built at the same beta.
class BathSpec {
public:
    BathSpec(InverseTemperature beta, double omega_rot, CouplingSpectrum spectrum);

    InverseTemperature beta() const noexcept { return beta_; }
    double omega_rot() const noexcept { return omega_rot_; }
    const CouplingSpectrum& spectrum() const noexcept { return spectrum_; }

private:
    InverseTemperature beta_;
    double omega_rot_;
    CouplingSpectrum spectrum_;
};

struct RateSet {
    double gamma_down = 0.0;
    double gamma_up = 0.0;
    // Empty when undefined (omega = 0 with m != 0).
    std::optional<double> beta_loc;
    Stability classification = Stability::Stable;
};

// Comoving energy omega - m*Omega.
inline double comoving_energy(const BathSpec& bath, const Mode& mode) noexcept {
    return mode.omega() - mode.m() * bath.omega_rot();
}

// gamma0(x + m*Omega): the diagonal spectrum seen by mode k in the rotating bath.
double shifted_spectrum(const BathSpec& bath, const Mode& mode, double x);

// Decay and pumping rates of a mode. Decay samples the rotating spectrum of the
// time-reversed mode at omega, i.e. gamma0(omega - m*Omega); pumping samples
// gamma0(m*Omega - omega). The larger of the two is read from the positive
// branch of gamma0 and the other follows from the Boltzmann factor
// e^{-beta(omega - m*Omega)}, which is exact for KMS spectra and keeps the
// ratio free of overflow. At beta = +inf the subdominant rate is zero.
RateSet rates(const BathSpec& bath, const Mode& mode);

// beta (1 - m*Omega/omega). Throws UndefinedLocalTemperature at omega = 0, m != 0.
double local_beta(const BathSpec& bath, const Mode& mode);

Stability classify(const BathSpec& bath, const Mode& mode);
Stability classify(const Mode& mode, double omega_rot);

// Rotating-bath KMS residual for one mode: max over grid of
// |g_k(-x) - e^{-beta(x - m Omega)} g_{-k}(x)| / max(|lhs|, |rhs|, eps)
// with g_k(x) = shifted_spectrum(bath, k, x).
double kms_check_rotating(const BathSpec& bath, const Mode& mode, std::span<const double> grid);

}  // namespace rotbath
