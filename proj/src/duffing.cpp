#include "hillstab/duffing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hillstab::duffing {

namespace {
constexpr Real kPi = std::numbers::pi_v<Real>;
}

DuffingParams::DuffingParams(Real b_, Real c_, Real a_nl_, Real p_)
    : b(b_), c(c_), a_nl(a_nl_), p(p_) {
    if (!(b > 0) || !std::isfinite(b))
        throw std::domain_error("DuffingParams: b must be positive");
    if (!(c > 0) || !std::isfinite(c))
        throw std::domain_error("DuffingParams: c must be positive");
    if (!(a_nl >= 0) || !std::isfinite(a_nl))
        throw std::domain_error("DuffingParams: a_nl must be nonnegative");
    if (!(p > 0) || !std::isfinite(p))
        throw std::domain_error("DuffingParams: p must be positive");
}

Real DuffingParams::g(Real u) const {
    return b * u + a_nl * std::pow(std::abs(u), p) * u;
}

Real DuffingParams::g_prime(Real u) const {
    return b + a_nl * (p + 1) * std::pow(std::abs(u), p);
}

Forcing::Forcing(CosineForcing cosine)
    : kind_(cosine), bound_(std::abs(cosine.amplitude)) {}

Forcing::Forcing(CoefficientSignal samples) : kind_(std::move(samples)), bound_(0) {
    const auto& sig = std::get<CoefficientSignal>(kind_);
    bound_ = std::max(std::abs(sig.min_value()), std::abs(sig.max_value()));
}

Real Forcing::operator()(Real t) const {
    if (const auto* cosine = std::get_if<CosineForcing>(&kind_))
        return cosine->amplitude * std::cos(cosine->frequency * t + cosine->phase);
    return std::get<CoefficientSignal>(kind_)(t);
}

std::vector<Real> Forcing::boundaries_in(Real t0, Real t1) const {
    if (const auto* sig = std::get_if<CoefficientSignal>(&kind_))
        return sig->boundaries_in(t0, t1);
    return {};
}

Real ultimate_bound(Real b, Real c, Real forcing_bound) {
    if (!(b > 0) || !(c > 0))
        throw std::domain_error("ultimate_bound: b and c must be positive");
    if (!(forcing_bound >= 0))
        throw std::domain_error("ultimate_bound: forcing bound must be >= 0");
    return std::max(2 / (c * std::sqrt(b)), 1 / b) * forcing_bound;
}

Real difference_ceiling(const DuffingParams& dp, Real M) {
    if (!(M >= 0)) throw std::domain_error("difference_ceiling: M must be >= 0");
    return (dp.p + 1) * dp.a_nl * std::pow(M, dp.p);
}

Real convergence_threshold(const DuffingParams& dp) {
    if (dp.a_nl == 0) return std::numeric_limits<Real>::infinity();
    const Real denom = std::pow(dp.a_nl * (dp.p + 1), 1 / dp.p);
    const Real first = dp.b * std::pow(dp.c, 2 / dp.p) / denom;
    const Real second = std::pow(dp.c, (dp.p + 1) / dp.p) *
                        std::pow(dp.b, (dp.p + 1) / (2 * dp.p)) /
                        (std::pow(Real(2), (dp.p - 1) / dp.p) * denom);
    return std::min(first, second);
}

Real default_step(const DuffingParams& dp, Real u_scale) {
    const Real scale = std::max<Real>(1, std::abs(u_scale));
    return 2 * kPi / (1000 * std::sqrt(dp.g_prime(scale)));
}

namespace {

Rhs make_rhs(const DuffingParams& dp, const Forcing& f) {
    return [dp, f](Real t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
        dydt(0) = y(1);
        dydt(1) = f(t) - dp.c * y(1) - dp.g(y(0));
    };
}

Trajectory to_trajectory(const Rk4Path& path, Real h) {
    Trajectory traj;
    traj.meta.method = Method::Rk4;
    traj.meta.step = h;
    traj.samples.reserve(path.times.size());
    for (std::size_t i = 0; i < path.times.size(); ++i)
        traj.samples.push_back({path.states[i](0), path.states[i](1), path.times[i]});
    return traj;
}

}  // namespace

PairRun simulate_pair(const DuffingParams& dp, const Forcing& f, const PhaseState& s0,
                      const PhaseState& s1, Real t_end, Real h, int sample_stride) {
    if (s0.t != s1.t) throw std::domain_error("simulate_pair: initial times differ");
    if (h == 0)
        h = default_step(dp, std::max({std::abs(s0.u), std::abs(s0.v), std::abs(s1.u),
                                       std::abs(s1.v), ultimate_bound(dp.b, dp.c, f.bound())}));
    const Rhs rhs = make_rhs(dp, f);
    const std::vector<Real> bounds = f.boundaries_in(s0.t, t_end);

    Eigen::VectorXd y0(2), y1(2);
    y0 << s0.u, s0.v;
    y1 << s1.u, s1.v;
    const Rk4Path path0 = integrate_rk4(rhs, y0, s0.t, t_end, h, bounds, sample_stride);
    const Rk4Path path1 = integrate_rk4(rhs, y1, s1.t, t_end, h, bounds, sample_stride);

    PairRun run;
    run.diverged = path0.diverged || path1.diverged;
    run.first = to_trajectory(path0, h);
    run.second = to_trajectory(path1, h);
    const std::size_t n = std::min(path0.times.size(), path1.times.size());
    run.gap_times.reserve(n);
    run.gap.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        run.gap_times.push_back(path0.times[i]);
        run.gap.push_back(std::abs(path0.states[i](0) - path1.states[i](0)) +
                          std::abs(path0.states[i](1) - path1.states[i](1)));
    }
    if (!run.diverged && run.gap.size() >= 2) {
        bool positive = true;
        const std::size_t first = run.gap.size() / 2;
        for (std::size_t i = first; i < run.gap.size(); ++i)
            if (!(run.gap[i] > 0)) positive = false;
        if (positive)
            run.gap_fit = fit_log_series(run.gap_times, run.gap, 0.5);
        else
            run.gap_fit = LogFit{std::numeric_limits<Real>::infinity(), 0, true};
    }
    return run;
}

BoundReport verify_ultimate_bound(const DuffingParams& dp, const Forcing& f,
                                  const PhaseState& s0, Real t_end, Real h,
                                  int sample_stride) {
    if (h == 0)
        h = default_step(dp, std::max({std::abs(s0.u), std::abs(s0.v),
                                       ultimate_bound(dp.b, dp.c, f.bound())}));
    Eigen::VectorXd y0(2);
    y0 << s0.u, s0.v;
    const Rk4Path path = integrate_rk4(make_rhs(dp, f), y0, s0.t, t_end, h,
                                       f.boundaries_in(s0.t, t_end), sample_stride);
    BoundReport rep;
    rep.diverged = path.diverged;
    rep.trajectory = to_trajectory(path, h);
    rep.bound = ultimate_bound(dp.b, dp.c, f.bound());
    rep.tolerance = 1e-3 * std::max<Real>(rep.bound, 1);
    for (std::size_t i = path.times.size() / 2; i < path.times.size(); ++i)
        rep.trailing_max_abs_u = std::max(rep.trailing_max_abs_u, std::abs(path.states[i](0)));
    rep.within = !rep.diverged && rep.trailing_max_abs_u <= rep.bound + rep.tolerance;
    return rep;
}

}  // namespace hillstab::duffing
