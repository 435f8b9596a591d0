#include "hillstab/evolution.hpp"

#include <cmath>
#include <numbers>

namespace hillstab::evolution {

namespace {
constexpr Real kPi = std::numbers::pi_v<Real>;
}

EvolutionParams::EvolutionParams(Real c_, Real Gamma_, Real rho_, Real eta_, Real b_,
                                 Real A_norm_)
    : c(c_), Gamma(Gamma_), rho(rho_), eta(eta_), b(b_), A_norm(A_norm_) {
    if (!(c > 0) || !(Gamma > 0) || !(rho > 0) || !(b > 0))
        throw std::domain_error("EvolutionParams: c, Gamma, rho, b must be positive");
    if (!(eta >= 0) || !(A_norm >= 0))
        throw std::domain_error("EvolutionParams: eta and A_norm must be nonnegative");
    if (!(c <= Gamma))
        throw std::domain_error("EvolutionParams: c cannot exceed Gamma");
}

Real abstract_threshold(Real c, Real rho, Real Gamma) {
    if (!(c > 0) || !(rho > 0) || !(Gamma > 0))
        throw std::domain_error("abstract_threshold: inputs must be positive");
    return std::sqrt(c * rho + c * c * Gamma * Gamma / 4) - c / 2 * Gamma;
}

Real scalar_threshold(Real b, Real c) {
    if (!(b > 0) || !(c > 0))
        throw std::domain_error("scalar_threshold: inputs must be positive");
    return c * std::sqrt(b + c * c / 4) - c * c / 2;
}

Real threshold(const EvolutionParams& ep) {
    return abstract_threshold(ep.c, ep.rho, ep.Gamma);
}

bool certifies(const EvolutionParams& ep) { return ep.A_norm < threshold(ep); }

Real wave_ultimate_bound(Real c, Real forcing_bound_sq) {
    if (!(c > 0)) throw std::domain_error("wave_ultimate_bound: c must be positive");
    if (!(forcing_bound_sq >= 0))
        throw std::domain_error("wave_ultimate_bound: forcing bound must be >= 0");
    return (1 / (kPi * kPi) + 4 / (c * c)) * forcing_bound_sq;
}

Real wave_sync_threshold(Real k, Real c) {
    if (!(k > 0) || !(c > 0))
        throw std::domain_error("wave_sync_threshold: inputs must be positive");
    return scalar_threshold(kPi * kPi, c) / (k * (3 / kPi) * (1 / (kPi * kPi) + 4 / (c * c)));
}

Real ModalState::v_norm_sq() const {
    Real sum = 0;
    for (int n = 0; n < q.size(); ++n) {
        const Real w = static_cast<Real>(n + 1) * kPi;
        sum += w * w * q(n) * q(n);
    }
    return sum;
}

SineTransform::SineTransform(int n_modes, int n_grid) : grid_(n_grid) {
    if (n_modes < 1) throw std::domain_error("SineTransform: need >= 1 mode");
    if (n_grid < 2 * n_modes + 1)
        throw std::domain_error("SineTransform: grid must have >= 2N+1 points");
    mat_.resize(grid_, n_modes);
    const Real root2 = std::sqrt(Real(2));
    for (int j = 0; j < grid_; ++j) {
        const Real x = static_cast<Real>(j + 1) / static_cast<Real>(grid_ + 1);
        for (int n = 0; n < n_modes; ++n)
            mat_(j, n) = root2 * std::sin(static_cast<Real>(n + 1) * kPi * x);
    }
}

VectorXd SineTransform::project(const VectorXd& grid_values) const {
    return mat_.transpose() * grid_values / static_cast<Real>(grid_ + 1);
}

VectorXd SineTransform::cubic_term(const VectorXd& q) const {
    const VectorXd w = to_grid(q);
    return project(w.array().cube().matrix());
}

Real SineTransform::quartic_integral(const VectorXd& q) const {
    const VectorXd w = to_grid(q);
    return w.array().pow(4).sum() / static_cast<Real>(grid_ + 1);
}

Real SineTransform::grid_max_abs(const VectorXd& q) const {
    return to_grid(q).cwiseAbs().maxCoeff();
}

Real default_wave_step(int n_modes) {
    return 2 / (Real(1000) * static_cast<Real>(n_modes));
}

namespace {

struct WaveSystem {
    const WaveConfig& cfg;
    const WaveForcing& f;
    SineTransform transform;
    VectorXd stiffness;  // (n pi)^2 per mode

    explicit WaveSystem(const WaveConfig& cfg_, const WaveForcing& f_)
        : cfg(cfg_), f(f_),
          transform(cfg_.n_modes, SineTransform::default_grid(cfg_.n_modes, cfg_.dealias)) {
        stiffness.resize(cfg.n_modes);
        for (int n = 0; n < cfg.n_modes; ++n) {
            const Real w = static_cast<Real>(n + 1) * kPi;
            stiffness(n) = w * w;
        }
    }

    VectorXd forcing_at(Real t) const {
        if (f.amplitude == 0 || f.profile.size() == 0)
            return VectorXd::Zero(cfg.n_modes);
        VectorXd out = VectorXd::Zero(cfg.n_modes);
        const int m = std::min<int>(cfg.n_modes, static_cast<int>(f.profile.size()));
        out.head(m) = f.amplitude * std::cos(f.frequency * t + f.phase) * f.profile.head(m);
        return out;
    }

    // State layout: [q, qdot, W] with W the running energy-balance integral.
    void rhs(Real t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) const {
        const int n = cfg.n_modes;
        const auto q = y.segment(0, n);
        const auto qdot = y.segment(n, n);
        const VectorXd force = forcing_at(t);
        dydt.segment(0, n) = qdot;
        dydt.segment(n, n) = force - cfg.c * qdot - stiffness.cwiseProduct(q).eval();
        if (cfg.k != 0) dydt.segment(n, n) -= cfg.k * transform.cubic_term(q);
        dydt(2 * n) = force.dot(qdot) - cfg.c * qdot.squaredNorm();
    }

    Real energy(const Eigen::VectorXd& y) const {
        const int n = cfg.n_modes;
        const auto q = y.segment(0, n);
        const auto qdot = y.segment(n, n);
        Real e = Real(0.5) * (qdot.squaredNorm() + stiffness.cwiseProduct(q).dot(q));
        if (cfg.k != 0) e += cfg.k / 4 * transform.quartic_integral(q);
        return e;
    }
};

}  // namespace

WaveRun simulate_wave(const WaveConfig& cfg, const WaveForcing& f,
                      const ModalState& s0, Real t_end) {
    if (s0.n_modes() != cfg.n_modes || s0.qdot.size() != cfg.n_modes)
        throw std::domain_error("simulate_wave: state size does not match n_modes");
    const WaveSystem sys(cfg, f);
    const Real h = cfg.h > 0 ? cfg.h : default_wave_step(cfg.n_modes);

    Eigen::VectorXd y(2 * cfg.n_modes + 1);
    y.segment(0, cfg.n_modes) = s0.q;
    y.segment(cfg.n_modes, cfg.n_modes) = s0.qdot;
    y(2 * cfg.n_modes) = 0;

    WaveRun run;
    Real e0 = 0;
    long long count = 0;
    std::vector<VectorXd> modes;
    const bool ok = rk4_run(
        [&sys](Real t, const Eigen::VectorXd& yy, Eigen::VectorXd& dydt) {
            sys.rhs(t, yy, dydt);
        },
        y, s0.t, t_end, h, {},
        [&](Real t, const Eigen::VectorXd& yy) {
            if (count == 0) e0 = sys.energy(yy);
            if (count % cfg.sample_stride == 0) {
                const Real e = sys.energy(yy);
                run.times.push_back(t);
                run.energy.push_back(e);
                run.balance_residual.push_back(std::abs(e - e0 - yy(2 * cfg.n_modes)));
                if (cfg.record_modes)
                    modes.push_back(yy.segment(0, cfg.n_modes));
            }
            ++count;
        },
        &run.last_valid_time);
    run.diverged = !ok;
    run.final_state.q = y.segment(0, cfg.n_modes);
    run.final_state.qdot = y.segment(cfg.n_modes, cfg.n_modes);
    run.final_state.t = ok ? t_end : run.last_valid_time;
    if (cfg.record_modes && !modes.empty()) {
        run.mode_amplitudes.resize(static_cast<Eigen::Index>(modes.size()), cfg.n_modes);
        for (std::size_t i = 0; i < modes.size(); ++i)
            run.mode_amplitudes.row(static_cast<Eigen::Index>(i)) = modes[i].transpose();
    }
    return run;
}

Real phi_form(const VectorXd& q, const VectorXd& qdot, Real c) {
    Real e = Real(0.25) * qdot.squaredNorm();
    for (int n = 0; n < q.size(); ++n) {
        const Real w = static_cast<Real>(n + 1) * kPi;
        e += Real(0.5) * w * w * q(n) * q(n);
    }
    e += Real(0.25) * (qdot + c * q).squaredNorm();
    return e;
}

SyncRun wave_sync_experiment(const WaveConfig& cfg, const WaveForcing& f,
                             const ModalState& init_u, const ModalState& init_v,
                             Real t_end) {
    if (init_u.n_modes() != cfg.n_modes || init_v.n_modes() != cfg.n_modes)
        throw std::domain_error("wave_sync_experiment: state size mismatch");
    const WaveSystem sys(cfg, f);
    const Real h = cfg.h > 0 ? cfg.h : default_wave_step(cfg.n_modes);
    const int n = cfg.n_modes;

    // Both solutions advance inside one state vector so they share the
    // forcing evaluations and step grid exactly.
    Eigen::VectorXd y(4 * n);
    y.segment(0, n) = init_u.q;
    y.segment(n, n) = init_u.qdot;
    y.segment(2 * n, n) = init_v.q;
    y.segment(3 * n, n) = init_v.qdot;

    VectorXd stiff = sys.stiffness;
    auto rhs = [&](Real t, const Eigen::VectorXd& yy, Eigen::VectorXd& dydt) {
        const VectorXd force = sys.forcing_at(t);
        for (int half = 0; half < 2; ++half) {
            const int off = 2 * n * half;
            const auto q = yy.segment(off, n);
            const auto qdot = yy.segment(off + n, n);
            dydt.segment(off, n) = qdot;
            dydt.segment(off + n, n) = force - cfg.c * qdot - stiff.cwiseProduct(q).eval();
            if (cfg.k != 0)
                dydt.segment(off + n, n) -= cfg.k * sys.transform.cubic_term(q);
        }
    };

    SyncRun run;
    run.coeff_threshold = scalar_threshold(kPi * kPi, cfg.c);
    long long count = 0;
    std::vector<Real> vnorm_max;  // max(||u_x||^2, ||v_x||^2) per sample
    Real lvt = 0;
    const bool ok = rk4_run(
        rhs, y, init_u.t, t_end, h, {},
        [&](Real t, const Eigen::VectorXd& yy) {
            if (count % cfg.sample_stride == 0) {
                const VectorXd dq = yy.segment(0, n) - yy.segment(2 * n, n);
                const VectorXd dqdot = yy.segment(n, n) - yy.segment(3 * n, n);
                Real gap = dqdot.squaredNorm();
                Real vu = 0, vv = 0;
                for (int m = 0; m < n; ++m) {
                    const Real w = static_cast<Real>(m + 1) * kPi;
                    gap += w * w * dq(m) * dq(m);
                    vu += w * w * yy(m) * yy(m);
                    vv += w * w * yy(2 * n + m) * yy(2 * n + m);
                }
                run.times.push_back(t);
                run.gap_energy.push_back(gap);
                run.gap_phi.push_back(phi_form(dq, dqdot, cfg.c));
                vnorm_max.push_back(std::max(vu, vv));
            }
            ++count;
        },
        &lvt);
    run.diverged = !ok;

    if (!run.times.empty()) {
        for (std::size_t i = vnorm_max.size() / 2; i < vnorm_max.size(); ++i)
            run.coeff_bound = std::max(run.coeff_bound, 3 / kPi * vnorm_max[i]);
        run.coeff_within_threshold = run.coeff_bound < run.coeff_threshold;
        bool positive = true;
        for (std::size_t i = run.gap_energy.size() / 2; i < run.gap_energy.size(); ++i)
            if (!(run.gap_energy[i] > 0)) positive = false;
        if (positive && run.gap_energy.size() >= 2)
            run.gap_fit = fit_log_series(run.times, run.gap_energy, 0.5);
        else
            run.gap_fit = LogFit{std::numeric_limits<Real>::infinity(), 0, true};
    }
    return run;
}

}  // namespace hillstab::evolution
