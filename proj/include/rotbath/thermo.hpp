#pragma once

#include <span>
#include <vector>

#include "rotbath/birthdeath.hpp"
#include "rotbath/core.hpp"
#include "rotbath/kinetics.hpp"

namespace rotbath {

// Shannon entropy -sum P ln P (0 ln 0 = 0); additive over modes of a diagonal product state.
double entropy(const ModeDistribution& p);
double entropy(std::span<const ModeDistribution> modes);

struct EntropyProduction {
    double sigma = 0.0;
    bool regularized = false;       // some P_n = 0 with (LP)_n != 0 was floored at 1e-300
    bool cutoff_reference = false;  // reference weights not normalizable without the cutoff
};

// sigma = -sum_n (LP)_n [ln P_n - ln pi_n] with raw reference weights
// pi_n = (gamma_up/gamma_down)^n = e^{-beta(omega - m Omega) n} on the current
// window. Requires gamma_up > 0 and gamma_down > 0 unless the mode is decoupled.
EntropyProduction entropy_production(const ModeDistribution& p, const RateSet& rates,
                                     const NonlinearParams& nl = {});

// J = sum_k (omega_k - m_k Omega) dnbar_k/dt.
double heat_current(std::span<const Mode> modes, std::span<const double> dnbar_dt, const BathSpec& bath);

struct EnergyBalanceRow {
    double time = 0.0;
    double U = 0.0;
    double Lz = 0.0;
    double U_dot = 0.0;
    double J = 0.0;
    double power = 0.0;     // Omega dLz/dt, work done by the rotating bath
    double residual = 0.0;  // |U_dot - J - power|
};

// First-law bookkeeping from mean trajectories; d nbar/dt from the kinetic equation.
// All trajectories must share one time grid (AlignmentError otherwise).
std::vector<EnergyBalanceRow> energy_balance(std::span<const MeanTrajectory> trajectories,
                                             const BathSpec& bath);

struct ThermoRow {
    double time = 0.0;
    double S = 0.0;
    double sigma = 0.0;
    double J = 0.0;
    double U = 0.0;
    double Lz = 0.0;
    double residual_first_law = 0.0;   // |U_dot - J - Omega dLz/dt|
    double residual_second_law = 0.0;  // |S_dot - sigma - beta J|, S_dot by finite differences
    double S_dot = 0.0;
    double U_dot = 0.0;
    bool regularized = false;
    bool cutoff_reference = false;
};

struct ThermoLedger {
    std::vector<ThermoRow> rows;
    double rate_scale = 0.0;  // Gamma = max over modes of gamma_up + gamma_down
    double fd_step = 0.0;     // 1e-3 / Gamma
    RunStatus status = RunStatus::Completed;
};

struct LedgerOptions {
    DistributionOptions distribution;
    unsigned threads = 1;
};

// Evolves the exact distribution of every mode and assembles the ledger on
// t_grid. Needs a finite beta.
ThermoLedger build_ledger(const BathSpec& bath, std::span<const ModeDistribution> initial,
                          const NonlinearParams& nl, std::span<const double> t_grid,
                          const LedgerOptions& opts = {});

struct Quantum {
    double omega = 0.0;
    int m = 0;
    double count = 1.0;
};

struct BhLedgerEntry {
    double dM = 0.0;
    double dL = 0.0;
    double dA = 0.0;
};

// Black-hole side of emitting the given quanta: dM = -sum count*omega,
// dL = -sum count*m, dA = 4 (dM - Omega dL) / T_H. Units c = hbar = G = k_B = 1;
// the charge channel is held fixed.
BhLedgerEntry bh_ledger(std::span<const Quantum> quanta, double omega_horizon, double t_hawking);

}  // namespace rotbath
