#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "rotbath/errors.hpp"

namespace rotbath {

// Inverse temperature (k_B = 1). Zero temperature is an explicit state, not a
// large float: the Boltzmann factor is evaluated by sign at beta = +inf.
class InverseTemperature {
public:
    static InverseTemperature finite(double beta) {
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw DomainError("inverse temperature must be finite and > 0, got " + std::to_string(beta));
        return InverseTemperature(beta);
    }

    static InverseTemperature infinite() {
        return InverseTemperature(std::numeric_limits<double>::infinity());
    }

    // Accepts +inf as the zero-temperature state.
    static InverseTemperature from_double(double beta) {
        if (std::isinf(beta) && beta > 0.0) return infinite();
        return finite(beta);
    }

    bool is_infinite() const noexcept { return std::isinf(value_); }
    double value() const noexcept { return value_; }

    // e^{-beta * energy}; at beta = +inf this is 0, 1 or +inf by the sign of energy.
    double boltzmann(double energy) const noexcept {
        if (is_infinite()) {
            if (energy > 0.0) return 0.0;
            if (energy < 0.0) return std::numeric_limits<double>::infinity();
            return 1.0;
        }
        return std::exp(-value_ * energy);
    }

    friend bool operator==(const InverseTemperature&, const InverseTemperature&) = default;

private:
    explicit InverseTemperature(double v) : value_(v) {}
    double value_;
};

}  // namespace rotbath
