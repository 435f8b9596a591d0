#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace hillstab {

using Real = double;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Parameter triple of u'' + c u' + (b + a(t)) u = 0 with 0 <= a(t) <= C.
/// The certification operations require c > 0; c = 0 is admitted here so
/// undamped systems can be propagated with the same machinery.
struct SystemParams {
    Real b;  ///< stiffness floor (1/time^2)
    Real c;  ///< damping coefficient (1/time)
    Real C;  ///< ceiling on the variable coefficient (1/time^2)

    SystemParams(Real b_, Real c_, Real C_) : b(b_), c(c_), C(C_) {
        if (!(b > 0) || !std::isfinite(b))
            throw std::domain_error("SystemParams: b must be positive and finite");
        if (!(c >= 0) || !std::isfinite(c))
            throw std::domain_error("SystemParams: c must be nonnegative and finite");
        if (!(C >= 0) || !std::isfinite(C))
            throw std::domain_error("SystemParams: C must be nonnegative and finite");
    }
};

/// One (u, u') sample at time t.
struct PhaseState {
    Real u = 0;
    Real v = 0;
    Real t = 0;

    Vec2 vec() const { return Vec2(u, v); }
    Real norm_sq() const { return u * u + v * v; }
    bool finite() const {
        return std::isfinite(u) && std::isfinite(v) && std::isfinite(t);
    }
};

/// Symmetric quadratic form q_uu u^2 + 2 q_uv u v + q_vv v^2 of a phase state.
struct QuadForm2 {
    Real q_uu = 0;
    Real q_uv = 0;
    Real q_vv = 0;

    Real value(Real u, Real v) const {
        return q_uu * u * u + 2 * q_uv * u * v + q_vv * v * v;
    }
    Real value(const PhaseState& s) const { return value(s.u, s.v); }

    Mat2 matrix() const {
        Mat2 m;
        m << q_uu, q_uv, q_uv, q_vv;
        return m;
    }

    Real det() const { return q_uu * q_vv - q_uv * q_uv; }
    bool positive_definite() const { return q_uu > 0 && det() > 0; }
};

enum class LyapunovForm { None, F, G };

inline const char* to_string(LyapunovForm f) {
    switch (f) {
        case LyapunovForm::F: return "F";
        case LyapunovForm::G: return "G";
        default: return "none";
    }
}

/// Outcome of evaluating the stability criteria for one parameter triple.
struct Certificate {
    bool holds_main = false;           ///< C < c max{c, 2 sqrt(b)} (strict)
    bool holds_legacy_strong = false;  ///< C < c sqrt(b) (strict)
    bool holds_legacy_weak = false;    ///< C <= c^2/4 + c sqrt(b + c^2/16)
    Real margin = 0;                   ///< c max{c, 2 sqrt(b)} - C
    Real delta = 0;                    ///< certified decay rate; 0 when holds_main is false
    LyapunovForm chosen_form = LyapunovForm::None;  ///< form attaining delta
};

}  // namespace hillstab
