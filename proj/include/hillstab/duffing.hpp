#pragma once

#include "hillstab/hill_core.hpp"
#include "hillstab/propagator.hpp"
#include "hillstab/signal.hpp"

#include <variant>
#include <vector>

namespace hillstab::duffing {

/// Parameters of u'' + c u' + g(u) = f(t) with restoring force
/// g(u) = b u + a_nl |u|^p u.
struct DuffingParams {
    Real b;     ///< linear stiffness, > 0
    Real c;     ///< damping, > 0
    Real a_nl;  ///< nonlinearity coefficient, >= 0
    Real p;     ///< nonlinearity exponent, > 0

    DuffingParams(Real b_, Real c_, Real a_nl_, Real p_);

    Real g(Real u) const;
    Real g_prime(Real u) const;  ///< b + a_nl (p+1) |u|^p
};

struct CosineForcing {
    Real amplitude = 0;
    Real frequency = 0;
    Real phase = 0;
};

/// Bounded forcing term. The declared bound is what the thresholds
/// consume; evaluations never exceed it in absolute value.
class Forcing {
public:
    Forcing() : kind_(CosineForcing{}), bound_(0) {}
    explicit Forcing(CosineForcing cosine);
    explicit Forcing(CoefficientSignal samples);

    static Forcing zero() { return Forcing(); }

    Real operator()(Real t) const;
    Real bound() const { return bound_; }

    /// Piece boundaries for integrator alignment (empty for cosine forcing).
    std::vector<Real> boundaries_in(Real t0, Real t1) const;

private:
    std::variant<CosineForcing, CoefficientSignal> kind_;
    Real bound_;
};

/// Ultimate displacement bound max{2/(c sqrt(b)), 1/b} * forcing_bound.
Real ultimate_bound(Real b, Real c, Real forcing_bound);

/// A = sup over [-M, M] of g'(s) - b = (p+1) a_nl M^p.
Real difference_ceiling(const DuffingParams& dp, Real M);

/// Forcing bound below which any two solutions converge to each other:
/// min of the two branch formulas, +infinity when a_nl = 0.
Real convergence_threshold(const DuffingParams& dp);

/// Step heuristic: 2 pi / (1000 sqrt(g'(u_scale))) with u_scale at least 1.
Real default_step(const DuffingParams& dp, Real u_scale);

struct PairRun {
    Trajectory first;
    Trajectory second;
    std::vector<Real> gap_times;
    std::vector<Real> gap;  ///< |u1 - u2| + |v1 - v2| per sample
    LogFit gap_fit;         ///< fitted decay of the gap over the trailing half
    bool diverged = false;
};

/// Integrate two solutions on the same RK4 grid and track their gap.
/// Pass h = 0 for the default step.
PairRun simulate_pair(const DuffingParams& dp, const Forcing& f, const PhaseState& s0,
                      const PhaseState& s1, Real t_end, Real h = 0,
                      int sample_stride = 1);

struct BoundReport {
    Real bound = 0;               ///< ultimate_bound(b, c, forcing bound)
    Real trailing_max_abs_u = 0;  ///< max |u| over the trailing half
    Real tolerance = 0;           ///< slack applied to the bound check
    bool within = false;
    bool diverged = false;
    Trajectory trajectory;
};

/// Simulate one solution and compare its trailing amplitude against the
/// ultimate bound (relative tolerance 1e-3).
BoundReport verify_ultimate_bound(const DuffingParams& dp, const Forcing& f,
                                  const PhaseState& s0, Real t_end, Real h = 0,
                                  int sample_stride = 1);

}  // namespace hillstab::duffing
