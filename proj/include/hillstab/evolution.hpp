#pragma once

#include "hillstab/propagator.hpp"
#include "hillstab/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hillstab::evolution {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Hypothesis constants for u'' + (B + A(t)) u + gamma u' = 0 on a Hilbert
/// space: coercivity c and norm Gamma of the dissipation, cross-coercivity
/// <B v, gamma v> >= rho |v|^2 + eta ||v||^2, coercivity b of B, and the
/// ceiling A_norm on ||A(t)||.
struct EvolutionParams {
    Real c;
    Real Gamma;
    Real rho;
    Real eta;
    Real b;
    Real A_norm;

    EvolutionParams(Real c_, Real Gamma_, Real rho_, Real eta_, Real b_, Real A_norm_);
};

/// Ceiling sqrt(c rho + c^2 Gamma^2 / 4) - (c/2) Gamma on ||A||.
Real abstract_threshold(Real c, Real rho, Real Gamma);

/// Scalar-dissipation case gamma = c I: c sqrt(b + c^2/4) - c^2/2.
/// Equals abstract_threshold(c, c b, c).
Real scalar_threshold(Real b, Real c);

Real threshold(const EvolutionParams& ep);
bool certifies(const EvolutionParams& ep);

/// Bound (1/pi^2 + 4/c^2) * forcing_bound_sq on limsup ||u_x||^2 for the
/// 1-D damped wave problem on (0, 1).
Real wave_ultimate_bound(Real c, Real forcing_bound_sq);

/// Largest limsup |f|_H^2 for which two solutions of
/// u_tt - u_xx + k u^3 + c u_t = f synchronize exponentially:
/// [c sqrt(pi^2 + c^2/4) - c^2/2] / [k (3/pi)(1/pi^2 + 4/c^2)].
Real wave_sync_threshold(Real k, Real c);

/// Truncated sine-series state: u(x) = sum_n q_n sqrt(2) sin(n pi x).
struct ModalState {
    VectorXd q;
    VectorXd qdot;
    Real t = 0;

    int n_modes() const { return static_cast<int>(q.size()); }
    Real h_norm_sq() const { return q.squaredNorm(); }     ///< |u|_H^2
    Real v_norm_sq() const;                                ///< ||u_x||^2
    Real kinetic_sq() const { return qdot.squaredNorm(); } ///< |u_t|_H^2
};

/// Separable forcing f(t, x) = amplitude cos(frequency t + phase) *
/// profile(x), profile given by modal coefficients.
struct WaveForcing {
    VectorXd profile;
    Real amplitude = 0;
    Real frequency = 0;
    Real phase = 0;

    Real bound_sq() const { return amplitude * amplitude * profile.squaredNorm(); }
};

/// Collocation grid transform for the sine basis: x_j = j/(M+1), j = 1..M.
/// The default grid M = 2N+1 integrates products of modes up to 3N+N
/// exactly, so the projected cubic term is alias-free.
class SineTransform {
public:
    SineTransform(int n_modes, int n_grid);
    static int default_grid(int n_modes, bool dealias) {
        return dealias ? 3 * n_modes + 2 : 2 * n_modes + 1;
    }

    int n_grid() const { return grid_; }
    VectorXd to_grid(const VectorXd& q) const { return mat_ * q; }
    VectorXd project(const VectorXd& grid_values) const;
    VectorXd cubic_term(const VectorXd& q) const;   ///< modal coefficients of u^3
    Real quartic_integral(const VectorXd& q) const; ///< integral of u^4 over (0,1)
    Real grid_max_abs(const VectorXd& q) const;

private:
    int grid_;
    MatrixXd mat_;  // grid_ x n_modes, entries sqrt(2) sin(n pi x_j)
};

struct WaveConfig {
    int n_modes = 32;
    Real k = 1;          ///< cubic coefficient
    Real c = 0;          ///< damping
    Real h = 0;          ///< RK4 step; 0 means 2/(1000 n_modes)
    bool dealias = false;
    int sample_stride = 10;
    bool record_modes = false;
};

Real default_wave_step(int n_modes);

struct WaveRun {
    std::vector<Real> times;
    std::vector<Real> energy;            ///< (|u_t|^2 + ||u_x||^2)/2 + (k/4) int u^4
    std::vector<Real> balance_residual;  ///< |E(t) - E(0) - int(<f,u_t> - c|u_t|^2)|
    MatrixXd mode_amplitudes;            ///< samples x n_modes when recorded
    ModalState final_state;
    bool diverged = false;
    Real last_valid_time = 0;
};

/// RK4 integration of the sine-Galerkin truncation of
/// u_tt - u_xx + k u^3 + c u_t = f(t, x). The energy-balance integral is
/// carried as an extra state variable so its residual is O(h^4).
WaveRun simulate_wave(const WaveConfig& cfg, const WaveForcing& f,
                      const ModalState& s0, Real t_end);

/// Quadratic form (1/4)|u_t|^2 + (1/2)||u_x||^2 + (1/4)|u_t + c u|^2 used as
/// the decay diagnostic for gaps.
Real phi_form(const VectorXd& q, const VectorXd& qdot, Real c);

struct SyncRun {
    std::vector<Real> times;
    std::vector<Real> gap_energy;  ///< ||(u-v)_x||^2 + |u_t - v_t|^2
    std::vector<Real> gap_phi;     ///< phi_form of the gap
    LogFit gap_fit;                ///< fitted decay of gap_energy, trailing half
    Real coeff_bound = 0;          ///< trailing max of (3/pi) max(||u_x||^2, ||v_x||^2)
    Real coeff_threshold = 0;      ///< scalar_threshold(pi^2, c)
    bool coeff_within_threshold = false;
    bool diverged = false;
};

/// Run two solutions side by side and track the energy-norm gap, its decay
/// fit, and the measured cubic-coefficient bound against the scalar
/// threshold.
SyncRun wave_sync_experiment(const WaveConfig& cfg, const WaveForcing& f,
                             const ModalState& init_u, const ModalState& init_v,
                             Real t_end);

}  // namespace hillstab::evolution
