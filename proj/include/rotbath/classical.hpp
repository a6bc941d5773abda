#pragma once

#include <string>

namespace rotbath::classical {

// Air layer moving at V over a surface wave with phase velocity v and wavenumber k.
struct ShearConfig {
    double V;
    double v;
    double k;
};

enum class ShearStability { Stable, Marginal, Unstable };

std::string to_string(ShearStability s);

ShearStability shear_classify(const ShearConfig& cfg);

struct EnergySplit {
    double wave_fraction;       // dE_wave / |dE_wind| = v / V
    double dissipated_fraction; // 1 - v / V
};

// Momentum conservation fixes the wind's energy loss per wave quantum at V*hbar*k
// while the wave gains hbar*omega = hbar*v*k. For V < v the wave fraction
// exceeds one: the wave could only grow with an external energy source.
EnergySplit energy_split(const ShearConfig& cfg);

// Wave frequency seen in the frame comoving with the air, omega (1 - V/v).
// Nonrelativistic (no Lorentz factor).
double comoving_frequency(double omega, double V, double v);

}  // namespace rotbath::classical
