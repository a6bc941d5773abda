#include "rotbath/core.hpp"

#include <algorithm>
#include <cmath>

#include "rotbath/errors.hpp"

namespace rotbath {

std::string to_string(Statistics s) { return s == Statistics::Bose ? "bose" : "fermi"; }

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Marginal: return "marginal";
        case Stability::Superradiant: return "superradiant";
    }
    return "unknown";
}

Statistics parse_statistics(const std::string& text) {
    if (text == "bose") return Statistics::Bose;
    if (text == "fermi") return Statistics::Fermi;
    throw DomainError("unknown statistics '" + text + "' (expected bose or fermi)");
}

Mode::Mode(double omega, int m, std::string alpha, Statistics statistics)
    : omega_(omega), m_(m), alpha_(std::move(alpha)), statistics_(statistics) {
    if (!(omega_ >= 0.0) || !std::isfinite(omega_))
        throw DomainError("mode energy must be finite and >= 0");
}

Mode Mode::time_reversed() const { return Mode(omega_, -m_, alpha_, statistics_); }

BathSpec::BathSpec(InverseTemperature beta, double omega_rot, CouplingSpectrum spectrum)
    : beta_(beta), omega_rot_(omega_rot), spectrum_(std::move(spectrum)) {
    if (!(omega_rot_ >= 0.0) || !std::isfinite(omega_rot_))
        throw DomainError("bath angular velocity must be finite and >= 0");
    if (!(spectrum_.beta_ref() == beta_))
        throw DomainError("coupling spectrum was built at a different inverse temperature than the bath");
}

double shifted_spectrum(const BathSpec& bath, const Mode& mode, double x) {
    return bath.spectrum()(x + mode.m() * bath.omega_rot());
}

RateSet rates(const BathSpec& bath, const Mode& mode) {
    const double energy = comoving_energy(bath, mode);
    const auto& gamma0 = bath.spectrum();
    RateSet out;
    if (energy > 0.0) {
        out.gamma_down = gamma0(energy);
        out.gamma_up = bath.beta().boltzmann(energy) * out.gamma_down;
    } else if (energy < 0.0) {
        out.gamma_up = gamma0(-energy);
        out.gamma_down = bath.beta().boltzmann(-energy) * out.gamma_up;
    } else {
        out.gamma_down = out.gamma_up = gamma0(0.0);
    }
    // 0 * inf cannot arise: boltzmann() is only infinite for negative energy.
    if (mode.m() == 0 || mode.omega() > 0.0) out.beta_loc = local_beta(bath, mode);
    out.classification = classify(bath, mode);
    return out;
}

double local_beta(const BathSpec& bath, const Mode& mode) {
    const double beta = bath.beta().value();
    if (mode.m() == 0) return beta;
    if (mode.omega() == 0.0)
        throw UndefinedLocalTemperature("local inverse temperature undefined at omega = 0 with m != 0");
    const double factor = 1.0 - mode.m() * bath.omega_rot() / mode.omega();
    if (bath.beta().is_infinite()) {
        if (factor == 0.0) return 0.0;
        return factor > 0.0 ? beta : -beta;
    }
    return beta * factor;
}

Stability classify(const Mode& mode, double omega_rot) {
    // Pauli blocking: the pumping feedback is negative, every fermion mode relaxes.
    if (mode.statistics() == Statistics::Fermi) return Stability::Stable;
    const double threshold = mode.m() * omega_rot;
    if (mode.omega() > threshold) return Stability::Stable;
    if (mode.omega() < threshold) return Stability::Superradiant;
    return Stability::Marginal;
}

Stability classify(const BathSpec& bath, const Mode& mode) { return classify(mode, bath.omega_rot()); }

double kms_check_rotating(const BathSpec& bath, const Mode& mode, std::span<const double> grid) {
    if (bath.beta().is_infinite()) throw DomainError("kms_check_rotating needs a finite beta");
    if (grid.empty()) throw DomainError("kms_check_rotating needs a nonempty grid");
    const Mode reversed = mode.time_reversed();
    const double shift = mode.m() * bath.omega_rot();
    double worst = 0.0;
    for (double x : grid) {
        const double lhs = shifted_spectrum(bath, mode, -x);
        const double rhs = bath.beta().boltzmann(x - shift) * shifted_spectrum(bath, reversed, x);
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

}  // namespace rotbath
