#pragma once

#include "hillstab/signal.hpp"
#include "hillstab/trajectory.hpp"
#include "hillstab/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace hillstab {

/// Exact state-transition matrix of u'' + c u' + q u = 0 over dt >= 0.
/// All three damping regimes are handled; the critically damped branch is
/// taken when |c^2 - 4q| < 1e-9 max(c^2, 4q).
Mat2 transition_matrix(Real q, Real c, Real dt);

/// Advance one constant-coefficient piece exactly.
PhaseState step_constant(Real q, Real c, const PhaseState& s, Real dt);

/// Exact sampled trajectory of u'' + c u' + (b + a(t)) u = 0 for a
/// piecewise-constant signal, from s0 up to t_end. Samples land on every
/// piece boundary; long pieces are subdivided so that no sample gap
/// exceeds max_sample_dt.
Trajectory propagate(const SystemParams& p, const CoefficientSignal& signal,
                     const PhaseState& s0, Real t_end,
                     Real max_sample_dt = std::numeric_limits<Real>::infinity());

/// Exact state at one time; chains the same pieces as propagate.
PhaseState hill_state_at(const SystemParams& p, const CoefficientSignal& signal,
                         const PhaseState& s0, Real t);

/// Default integrator step: min(smallest piece gap, 2 pi / (1000 sqrt(b + C))).
Real default_rk4_step(const SystemParams& p, const CoefficientSignal& signal);

using Rhs = std::function<void(Real, const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct Rk4Path {
    std::vector<Real> times;
    std::vector<Eigen::VectorXd> states;
    bool diverged = false;
    Real last_valid_time = 0;  ///< meaningful when diverged
};

/// Classical fixed-step 4th-order Runge-Kutta core. The span [t0, t1] is
/// split at the given boundary times; inside each span the step count is
/// the nearest integer to span/h (at least one step), so halving h halves
/// the effective step exactly. y is advanced in place; the observer is
/// called with (t, y) after every step and once with the initial state.
/// Returns false when a non-finite state appears (y keeps the last finite
/// state, *last_valid_time its time).
template <typename RhsFn, typename Observer>
inline bool rk4_run(RhsFn&& rhs, Eigen::VectorXd& y, Real t0, Real t1, Real h,
                    const std::vector<Real>& boundaries, Observer&& observe,
                    Real* last_valid_time = nullptr) {
    if (!(h > 0)) throw std::domain_error("rk4_run: step must be positive");
    if (!(t1 >= t0)) throw std::domain_error("rk4_run: t1 must be >= t0");
    const Eigen::Index n = y.size();
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), tmp(n), next(n);

    std::vector<Real> knots;
    knots.push_back(t0);
    for (Real b : boundaries)
        if (b > t0 && b < t1) knots.push_back(b);
    knots.push_back(t1);

    Real t = t0;
    observe(t, y);
    if (last_valid_time) *last_valid_time = t;
    for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
        const Real a = knots[s];
        const Real b = knots[s + 1];
        const Real span = b - a;
        if (!(span > 0)) continue;
        const long long nsteps = std::max<long long>(1, std::llround(span / h));
        const Real hs = span / static_cast<Real>(nsteps);
        for (long long i = 0; i < nsteps; ++i) {
            const Real ti = a + static_cast<Real>(i) * hs;
            // The final stage of the last step stays one ulp inside the
            // span so a right-continuous coefficient is still read from
            // the current piece.
            const Real t_end_stage =
                (i + 1 == nsteps) ? std::nextafter(b, a) : ti + hs;
            rhs(ti, y, k1);
            tmp = y + (hs / 2) * k1;
            rhs(ti + hs / 2, tmp, k2);
            tmp = y + (hs / 2) * k2;
            rhs(ti + hs / 2, tmp, k3);
            tmp = y + hs * k3;
            rhs(t_end_stage, tmp, k4);
            next = y + (hs / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
            if (!next.allFinite()) return false;
            y = next;
            t = (i + 1 == nsteps) ? b : ti + hs;
            observe(t, y);
            if (last_valid_time) *last_valid_time = t;
        }
    }
    return true;
}

/// Convenience wrapper collecting every sample_stride-th state (the final
/// state is always kept).
Rk4Path integrate_rk4(const Rhs& rhs, const Eigen::VectorXd& y0, Real t0, Real t1,
                      Real h, const std::vector<Real>& boundaries = {},
                      int sample_stride = 1);

/// RK4 trajectory of the Hill system on the signal's piece structure. The
/// coefficient is frozen per piece (exact for piecewise-constant signals)
/// and steps land on every piece boundary. Throws on divergence.
Trajectory hill_rk4(const SystemParams& p, const CoefficientSignal& signal,
                    const PhaseState& s0, Real t_end, Real h,
                    int sample_stride = 1);

struct ExponentialFit {
    Real m_emp = 1;      ///< fitted prefactor relative to the first sample
    Real delta_emp = 0;  ///< fitted decay rate of u^2 + v^2; negative = growth
    bool underflow = false;
};

/// Least-squares line through log(u^2 + v^2) over the trailing
/// window_fraction of the samples. Requires at least 10 samples. A zero
/// energy inside the window sets the underflow flag and an infinite rate.
ExponentialFit fit_exponential(const Trajectory& traj, Real window_fraction = 0.5);

struct LogFit {
    Real rate = 0;       ///< -slope of log(y)
    Real prefactor = 1;  ///< fitted value at t.front() divided by y.front()
    bool underflow = false;
};

/// Line fit of log(y) against t over the trailing window_fraction.
LogFit fit_log_series(const std::vector<Real>& t, const std::vector<Real>& y,
                      Real window_fraction);

}  // namespace hillstab
