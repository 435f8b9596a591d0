#pragma once

#include "hillstab/types.hpp"

#include <utility>

namespace hillstab {

/// Ceiling c * max{c, 2 sqrt(b)} on the coefficient bound C below which
/// every solution of u'' + c u' + (b + a(t)) u = 0, 0 <= a <= C, decays
/// exponentially.
Real stability_threshold(Real b, Real c);

/// Earlier sufficient bounds, returned as (strong, weak) =
/// (c sqrt(b), c^2/4 + c sqrt(b + c^2/16)). Both sit below
/// stability_threshold for all positive b, c.
std::pair<Real, Real> legacy_thresholds(Real b, Real c);

/// F(u, v) = v^2/2 + b u^2/2 + (c/2) u v + (c^2/4) u^2, equivalently
/// v^2/4 + b u^2/2 + (v + c u)^2 / 4; positive definite for every c > 0.
Real lyapunov_F(const SystemParams& p, const PhaseState& s);

/// G = F + (C/4) u^2, the variant adapted to the centred coefficient
/// alpha = a - C/2.
Real lyapunov_G(const SystemParams& p, const PhaseState& s);

QuadForm2 lyapunov_F_form(const SystemParams& p);
QuadForm2 lyapunov_G_form(const SystemParams& p);

/// Dissipation bounds at an instantaneous coefficient value a:
/// F' <= -phi and G' <= -psi along every solution with a(t) = a_value.
struct DissipationForms {
    QuadForm2 phi;  ///< diag(c b / 2, c/2 - a/(2c))
    QuadForm2 psi;  ///< c b/2 on u^2, c/2 on v^2, cross term (a - C/2)/2
};

DissipationForms dissipation_forms(const SystemParams& p, Real a_value);

/// Smallest generalized eigenvalue of the symmetric pencil (A, B);
/// B must be positive definite.
Real min_generalized_eigenvalue(const QuadForm2& A, const QuadForm2& B);

/// Certified worst-case decay rate: the largest delta such that the
/// applicable form L in {F, G} satisfies L(t) <= L(s) exp(-delta (t-s))
/// along every solution with an admissible coefficient. 0 when no
/// criterion holds.
Real decay_rate(const SystemParams& p);

/// decay_rate together with the form attaining it.
std::pair<Real, LyapunovForm> decay_rate_with_form(const SystemParams& p);

/// lambda_max / lambda_min of the form's matrix: the constant M for which
/// u^2 + v^2 <= M (u^2 + v^2)(s) exp(-delta (t-s)) follows from the form's
/// decay.
Real equivalence_ratio(const SystemParams& p, LyapunovForm form);

/// Evaluate all three criteria (strict/non-strict comparisons as defined
/// on Certificate) and the decay rate.
Certificate certify(const SystemParams& p);

}  // namespace hillstab
