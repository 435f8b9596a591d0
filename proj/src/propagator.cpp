#include "hillstab/propagator.hpp"

#include <algorithm>
#include <cmath>

namespace hillstab {

Mat2 transition_matrix(Real q, Real c, Real dt) {
    if (!(q > 0) || !std::isfinite(q))
        throw std::domain_error("transition_matrix: stiffness must be positive");
    if (!(c >= 0) || !std::isfinite(c))
        throw std::domain_error("transition_matrix: damping must be nonnegative");
    if (!(dt >= 0) || !std::isfinite(dt))
        throw std::domain_error("transition_matrix: dt must be nonnegative");

    const Real gamma = c / 2;
    const Real disc = c * c - 4 * q;
    Mat2 m;
    if (std::abs(disc) < 1e-9 * std::max(c * c, 4 * q)) {
        // Critical: u = e^{-gamma t}((1 + gamma t) u0 + t v0).
        const Real e = std::exp(-gamma * dt);
        m << e * (1 + gamma * dt), e * dt,
             -e * gamma * gamma * dt, e * (1 - gamma * dt);
    } else if (disc < 0) {
        const Real w = std::sqrt(-disc) / 2;  // damped angular frequency
        const Real e = std::exp(-gamma * dt);
        const Real s = std::sin(w * dt);
        const Real co = std::cos(w * dt);
        m << e * (co + gamma / w * s), e * s / w,
             -e * q * s / w, e * (co - gamma / w * s);
    } else {
        // Overdamped: two real decay rates; kept as separate exponentials so
        // heavy damping over long spans cannot overflow.
        const Real wh = std::sqrt(disc) / 2;
        const Real r1 = -gamma + wh;
        const Real r2 = -gamma - wh;
        const Real e1 = std::exp(r1 * dt);
        const Real e2 = std::exp(r2 * dt);
        const Real d = r1 - r2;  // = 2 wh > 0
        m << (-r2 * e1 + r1 * e2) / d, (e1 - e2) / d,
             q * (e2 - e1) / d, (r1 * e1 - r2 * e2) / d;
    }
    return m;
}

PhaseState step_constant(Real q, Real c, const PhaseState& s, Real dt) {
    if (!s.finite()) throw std::domain_error("step_constant: non-finite state");
    const Vec2 next = transition_matrix(q, c, dt) * s.vec();
    return {next(0), next(1), s.t + dt};
}

namespace {

// Shared piece walk: calls visit(q, t_piece_start, t_piece_end) for each
// constant-coefficient piece of [s0.t, t_end]. The signal is evaluated at
// piece midpoints; periodic breakpoint images can sit an ulp away from the
// nominal boundary and a midpoint query is insensitive to that.
template <typename Visit>
void walk_pieces(const SystemParams& p, const CoefficientSignal& signal, Real t0,
                 Real t_end, Visit&& visit) {
    if (!(t_end >= t0)) throw std::domain_error("propagate: t_end before start");
    if (!signal.covers(t0, t_end))
        throw std::domain_error("propagate: signal does not cover the requested span");
    std::vector<Real> knots = signal.boundaries_in(t0, t_end);
    knots.insert(knots.begin(), t0);
    knots.push_back(t_end);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const Real a = knots[i];
        const Real b = knots[i + 1];
        if (!(b > a)) continue;
        const Real value = signal(a / 2 + b / 2);
        const Real q = p.b + value;
        if (!(q > 0))
            throw std::domain_error("propagate: b + a(t) <= 0 on a piece");
        visit(q, a, b);
    }
}

}  // namespace

Trajectory propagate(const SystemParams& p, const CoefficientSignal& signal,
                     const PhaseState& s0, Real t_end, Real max_sample_dt) {
    if (!s0.finite()) throw std::domain_error("propagate: non-finite initial state");
    if (!(max_sample_dt > 0)) throw std::domain_error("propagate: max_sample_dt must be positive");

    Trajectory traj;
    traj.meta = TrajectoryMeta{p, signal, Method::Exact, 0};
    traj.samples.push_back(s0);

    Vec2 state = s0.vec();
    walk_pieces(p, signal, s0.t, t_end, [&](Real q, Real a, Real b) {
        const Real span = b - a;
        long long nsub = 1;
        if (std::isfinite(max_sample_dt) && span > max_sample_dt)
            nsub = static_cast<long long>(std::ceil(span / max_sample_dt));
        const Real hs = span / static_cast<Real>(nsub);
        const Mat2 m = transition_matrix(q, p.c, hs);
        for (long long i = 0; i < nsub; ++i) {
            state = m * state;
            const Real t = (i + 1 == nsub) ? b : a + static_cast<Real>(i + 1) * hs;
            traj.samples.push_back({state(0), state(1), t});
        }
    });
    return traj;
}

PhaseState hill_state_at(const SystemParams& p, const CoefficientSignal& signal,
                         const PhaseState& s0, Real t) {
    Vec2 state = s0.vec();
    walk_pieces(p, signal, s0.t, t, [&](Real q, Real a, Real b) {
        state = transition_matrix(q, p.c, b - a) * state;
    });
    return {state(0), state(1), t};
}

Real default_rk4_step(const SystemParams& p, const CoefficientSignal& signal) {
    Real gap = std::numeric_limits<Real>::infinity();
    const auto& bp = signal.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        gap = std::min(gap, bp[i + 1] - bp[i]);
    const Real pi = Real(3.14159265358979323846);
    return std::min(gap, 2 * pi / (1000 * std::sqrt(p.b + p.C)));
}

Rk4Path integrate_rk4(const Rhs& rhs, const Eigen::VectorXd& y0, Real t0, Real t1,
                      Real h, const std::vector<Real>& boundaries, int sample_stride) {
    if (sample_stride < 1) throw std::domain_error("integrate_rk4: bad sample stride");
    Rk4Path path;
    long long count = 0;
    Real t_last = t0;
    Eigen::VectorXd y = y0;
    const bool ok = rk4_run(
        rhs, y, t0, t1, h, boundaries,
        [&](Real t, const Eigen::VectorXd& yy) {
            if (count % sample_stride == 0) {
                path.times.push_back(t);
                path.states.push_back(yy);
            }
            t_last = t;
            ++count;
        },
        &path.last_valid_time);
    path.diverged = !ok;
    if (ok && (path.times.empty() || path.times.back() != t_last)) {
        path.times.push_back(t_last);
        path.states.push_back(y);
    }
    return path;
}

Trajectory hill_rk4(const SystemParams& p, const CoefficientSignal& signal,
                    const PhaseState& s0, Real t_end, Real h, int sample_stride) {
    if (!s0.finite()) throw std::domain_error("hill_rk4: non-finite initial state");
    if (sample_stride < 1) throw std::domain_error("hill_rk4: bad sample stride");
    Trajectory traj;
    traj.meta = TrajectoryMeta{p, signal, Method::Rk4, h};
    traj.samples.push_back(s0);

    Eigen::VectorXd y(2);
    y << s0.u, s0.v;
    long long count = 0;
    walk_pieces(p, signal, s0.t, t_end, [&](Real q, Real a, Real b) {
        const Real damping = p.c;
        auto rhs = [q, damping](Real, const Eigen::VectorXd& yy, Eigen::VectorXd& d) {
            d(0) = yy(1);
            d(1) = -damping * yy(1) - q * yy(0);
        };
        bool initial = true;
        const bool ok = rk4_run(rhs, y, a, b, h, {}, [&](Real t, const Eigen::VectorXd& yy) {
            if (initial) {  // span start was recorded by the previous span
                initial = false;
                return;
            }
            ++count;
            if (count % sample_stride == 0 || t == b)
                traj.samples.push_back({yy(0), yy(1), t});
        });
        if (!ok)
            throw std::runtime_error("hill_rk4: diverged before t = " + std::to_string(b));
    });
    if (!traj.samples.empty() && traj.samples.back().t != t_end && y.allFinite())
        traj.samples.push_back({y(0), y(1), t_end});
    return traj;
}

LogFit fit_log_series(const std::vector<Real>& t, const std::vector<Real>& y,
                      Real window_fraction) {
    if (t.size() != y.size() || t.size() < 2)
        throw std::domain_error("fit_log_series: need matching series with >= 2 points");
    if (!(window_fraction > 0) || !(window_fraction <= 1))
        throw std::domain_error("fit_log_series: window fraction in (0, 1]");
    const std::size_t n = t.size();
    std::size_t first = n - std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(
                                static_cast<Real>(n) * window_fraction)));
    LogFit fit;
    for (std::size_t i = first; i < n; ++i) {
        if (!(y[i] > 0)) {
            fit.underflow = true;
            fit.rate = std::numeric_limits<Real>::infinity();
            fit.prefactor = 0;
            return fit;
        }
    }
    Real st = 0, sl = 0, stt = 0, stl = 0;
    const Real m = static_cast<Real>(n - first);
    for (std::size_t i = first; i < n; ++i) {
        const Real li = std::log(y[i]);
        st += t[i];
        sl += li;
        stt += t[i] * t[i];
        stl += t[i] * li;
    }
    const Real denom = m * stt - st * st;
    const Real slope = denom != 0 ? (m * stl - st * sl) / denom : 0;
    const Real intercept = (sl - slope * st) / m;
    fit.rate = -slope;
    fit.prefactor = std::exp(intercept + slope * t.front()) / y.front();
    return fit;
}

ExponentialFit fit_exponential(const Trajectory& traj, Real window_fraction) {
    if (traj.samples.size() < 10)
        throw std::domain_error("fit_exponential: need at least 10 samples");
    std::vector<Real> t, e;
    t.reserve(traj.samples.size());
    e.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        t.push_back(s.t);
        e.push_back(s.norm_sq());
    }
    const LogFit fit = fit_log_series(t, e, window_fraction);
    return {fit.prefactor, fit.rate, fit.underflow};
}

}  // namespace hillstab
