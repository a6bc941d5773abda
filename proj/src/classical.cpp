#include "rotbath/classical.hpp"

#include <cmath>

#include "rotbath/errors.hpp"

namespace rotbath::classical {

namespace {

void validate(const ShearConfig& cfg) {
    for (double x : {cfg.V, cfg.v, cfg.k})
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("shear configuration needs V, v, k > 0");
}

}  // namespace

std::string to_string(ShearStability s) {
    switch (s) {
        case ShearStability::Stable: return "stable";
        case ShearStability::Marginal: return "marginal";
        case ShearStability::Unstable: return "unstable";
    }
    return "unknown";
}

ShearStability shear_classify(const ShearConfig& cfg) {
    validate(cfg);
    if (cfg.V > cfg.v) return ShearStability::Unstable;
    if (cfg.V < cfg.v) return ShearStability::Stable;
    return ShearStability::Marginal;
}

EnergySplit energy_split(const ShearConfig& cfg) {
    validate(cfg);
    const double wave = cfg.v / cfg.V;
    return {wave, 1.0 - wave};
}

double comoving_frequency(double omega, double V, double v) {
    if (v == 0.0 || !std::isfinite(v)) throw DomainError("comoving frequency undefined for v = 0");
    return omega * (1.0 - V / v);
}

}  // namespace rotbath::classical
