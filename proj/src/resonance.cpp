#include "hillstab/resonance.hpp"

#include <cmath>
#include <numbers>

namespace hillstab::resonance {

namespace {
constexpr Real kPi = std::numbers::pi_v<Real>;
}

SystemParams ResonantSystem::params(Real c) const {
    if (!(c >= 0)) throw std::domain_error("ResonantSystem::params: c must be >= 0");
    return SystemParams(1 + c * c / 4, c, omega * omega - 1);
}

ResonantSystem build(Real omega) {
    if (!(omega > 1) || !std::isfinite(omega))
        throw std::domain_error("resonance::build: omega must exceed 1");
    const Real t_switch = kPi / (2 * omega);
    const Real period = t_switch + kPi / 2;
    CoefficientSignal alpha =
        CoefficientSignal::periodic({0, t_switch, period}, {omega * omega, 1});
    const Real c0 = 4 * omega * std::log(omega) / (kPi * (1 + omega));
    return ResonantSystem{omega, period, std::move(alpha), c0};
}

ValueDeriv exact_v(Real omega, Real t) {
    if (!(omega > 1)) throw std::domain_error("exact_v: omega must exceed 1");
    if (!(t >= 0)) throw std::domain_error("exact_v: t must be >= 0");
    const Real t_switch = kPi / (2 * omega);
    const Real period = t_switch + kPi / 2;
    long long k = static_cast<long long>(std::floor(t / period));
    Real tau = t - static_cast<Real>(k) * period;
    if (tau < 0) {
        --k;
        tau += period;
    } else if (tau >= period) {
        ++k;
        tau -= period;
    }
    const Real amp = std::pow(omega, static_cast<Real>(k));
    const Real sign = (k % 2 == 0) ? 1 : -1;
    const Real lead = sign * amp;  // (-omega)^k / omega^0 scaling
    if (tau <= t_switch) {
        return {lead * std::cos(omega * tau), -lead * omega * std::sin(omega * tau)};
    }
    const Real phase = tau - t_switch;
    return {-lead * omega * std::sin(phase), -lead * omega * std::cos(phase)};
}

Real damped_solution(Real omega, Real c, Real t) {
    if (!(c >= 0)) throw std::domain_error("damped_solution: c must be >= 0");
    return std::exp(-c / 2 * t) * exact_v(omega, t).value;
}

Real growth_factor(Real omega, Real c) {
    const Real period = kPi / (2 * omega) + kPi / 2;
    return omega * std::exp(-c * period / 2);
}

Real sharpness_ratio(Real h) {
    if (!(h > 0)) throw std::domain_error("sharpness_ratio: h must be positive");
    const ResonantSystem sys = build(1 + h);
    const Real b = 1 + sys.c0 * sys.c0 / 4;
    const Real C = sys.omega * sys.omega - 1;
    return C / (sys.c0 * std::sqrt(b));
}

GrowthReport verify_unbounded(Real omega, Real c, int n_periods) {
    if (n_periods < 1) throw std::domain_error("verify_unbounded: need >= 1 period");
    const ResonantSystem sys = build(omega);
    const SystemParams p = sys.params(c);
    const CoefficientSignal a = sys.hill_signal();

    // Initial data of the closed-form solution u = e^{-ct/2} v:
    // u(0) = v(0) = 1, u'(0) = v'(0) - (c/2) v(0) = -c/2.
    const PhaseState s0{1, -c / 2, 0};

    GrowthReport rep;
    rep.closed_form_factor = growth_factor(omega, c);
    rep.trajectory =
        propagate(p, a, s0, static_cast<Real>(n_periods) * sys.period);

    // Period multiples are piece boundaries, so exact samples exist there.
    std::vector<Real> norms(static_cast<std::size_t>(n_periods) + 1, -1);
    for (const auto& s : rep.trajectory.samples) {
        const Real k_real = s.t / sys.period;
        const long long k = std::llround(k_real);
        if (k >= 0 && k <= n_periods &&
            std::abs(k_real - static_cast<Real>(k)) < 1e-9)
            norms[static_cast<std::size_t>(k)] = std::sqrt(s.norm_sq());
    }
    for (std::size_t k = 0; k + 1 < norms.size(); ++k) {
        if (norms[k] <= 0 || norms[k + 1] < 0) continue;
        const Real f = norms[k + 1] / norms[k];
        rep.factors.push_back(f);
        rep.max_factor_deviation =
            std::max(rep.max_factor_deviation, std::abs(f - rep.closed_form_factor));
    }
    rep.initial_norm = norms.front();
    rep.final_norm = norms.back();
    rep.grew = rep.final_norm > rep.initial_norm;
    return rep;
}

std::vector<SweepRow> sharpness_sweep(const std::vector<Real>& hs) {
    std::vector<SweepRow> rows;
    rows.reserve(hs.size());
    for (Real h : hs) {
        const ResonantSystem sys = build(1 + h);
        rows.push_back({h, sys.omega, sys.c0, sys.omega * sys.omega - 1,
                        sharpness_ratio(h)});
    }
    return rows;
}

}  // namespace hillstab::resonance
