#pragma once

#include "hillstab/hill_core.hpp"
#include "hillstab/propagator.hpp"
#include "hillstab/signal.hpp"

#include <vector>

namespace hillstab::resonance {

/// Two-valued periodic stiffness modulation with an exactly computable
/// growing solution. The modulation alpha(t) equals omega^2 on
/// [0, pi/(2 omega)) and 1 on [pi/(2 omega), T), T-periodic with
/// T = pi/(2 omega) + pi/2.
struct ResonantSystem {
    Real omega;             ///< frequency parameter, > 1
    Real period;            ///< T = pi/(2 omega) + pi/2
    CoefficientSignal signal;  ///< alpha(t), T-periodic
    Real c0;                ///< damping below which solutions still grow

    /// Hill parameters of the damped variant: b = 1 + c^2/4, C = omega^2 - 1.
    SystemParams params(Real c) const;

    /// a(t) = alpha(t) - 1, taking values {omega^2 - 1, 0} within [0, C].
    CoefficientSignal hill_signal() const { return signal.shifted(-1); }
};

/// Assemble the system for a given omega > 1.
ResonantSystem build(Real omega);

struct ValueDeriv {
    Real value;
    Real deriv;
};

/// Closed-form solution of v'' + alpha(t) v = 0 with v(0) = 1, v'(0) = 0;
/// |v(k T)| = omega^k.
ValueDeriv exact_v(Real omega, Real t);

/// u(t) = exp(-(c/2) t) v(t), a solution of
/// u'' + c u' + (alpha(t) + c^2/4) u = 0.
Real damped_solution(Real omega, Real c, Real t);

/// Per-period amplitude ratio of the damped solution: omega exp(-c T / 2).
Real growth_factor(Real omega, Real c);

/// With omega = 1 + h and c = c0: the ratio C / (c0 sqrt(b)) where
/// b = 1 + c0^2/4 and C = omega^2 - 1. Decreases to pi as h -> 0.
Real sharpness_ratio(Real h);

struct GrowthReport {
    std::vector<Real> factors;  ///< measured per-period phase-norm ratios
    Real closed_form_factor = 0;
    Real max_factor_deviation = 0;
    Real initial_norm = 0;
    Real final_norm = 0;
    bool grew = false;
    Trajectory trajectory;
};

/// Propagate the damped system across whole periods, starting from the
/// closed-form solution's initial data (u, u')(0) = (1, -c/2), and compare
/// the measured per-period growth against growth_factor(omega, c).
GrowthReport verify_unbounded(Real omega, Real c, int n_periods);

struct SweepRow {
    Real h;
    Real omega;
    Real c0;
    Real C;
    Real ratio;
};

/// sharpness_ratio over a list of h values (CSV-ready).
std::vector<SweepRow> sharpness_sweep(const std::vector<Real>& hs);

}  // namespace hillstab::resonance
