#include "hillstab/hill_core.hpp"

#include <algorithm>
#include <cmath>

namespace hillstab {

namespace {

void require_positive(Real b, Real c) {
    if (!(b > 0) || !std::isfinite(b))
        throw std::domain_error("threshold: b must be positive and finite");
    if (!(c > 0) || !std::isfinite(c))
        throw std::domain_error("threshold: c must be positive and finite");
}

}  // namespace

Real stability_threshold(Real b, Real c) {
    require_positive(b, c);
    return c * std::max(c, 2 * std::sqrt(b));
}

std::pair<Real, Real> legacy_thresholds(Real b, Real c) {
    require_positive(b, c);
    const Real strong = c * std::sqrt(b);
    const Real weak = c * c / 4 + c * std::sqrt(b + c * c / 16);
    return {strong, weak};
}

Real lyapunov_F(const SystemParams& p, const PhaseState& s) {
    return lyapunov_F_form(p).value(s);
}

Real lyapunov_G(const SystemParams& p, const PhaseState& s) {
    return lyapunov_G_form(p).value(s);
}

QuadForm2 lyapunov_F_form(const SystemParams& p) {
    return {p.b / 2 + p.c * p.c / 4, p.c / 4, Real(0.5)};
}

QuadForm2 lyapunov_G_form(const SystemParams& p) {
    QuadForm2 f = lyapunov_F_form(p);
    f.q_uu += p.C / 4;
    return f;
}

DissipationForms dissipation_forms(const SystemParams& p, Real a_value) {
    if (!(p.c > 0))
        throw std::domain_error("dissipation_forms: c must be positive");
    if (!(a_value >= 0) || !(a_value <= p.C))
        throw std::domain_error("dissipation_forms: a_value outside [0, C]");
    const Real alpha = a_value - p.C / 2;
    DissipationForms d;
    d.phi = {p.c * p.b / 2, Real(0), p.c / 2 - a_value / (2 * p.c)};
    d.psi = {p.c * p.b / 2, alpha / 2, p.c / 2};
    return d;
}

Real min_generalized_eigenvalue(const QuadForm2& A, const QuadForm2& B) {
    if (!B.positive_definite())
        throw std::domain_error("min_generalized_eigenvalue: B not positive definite");
    // det(A - lambda B) = det(B) lambda^2 - m lambda + det(A)
    const Real det_b = B.det();
    const Real det_a = A.det();
    const Real m = A.q_uu * B.q_vv + A.q_vv * B.q_uu - 2 * A.q_uv * B.q_uv;
    const Real disc = m * m - 4 * det_a * det_b;  // real for a symmetric pencil
    const Real root = std::sqrt(std::max<Real>(disc, 0));
    return (m - root) / (2 * det_b);
}

std::pair<Real, LyapunovForm> decay_rate_with_form(const SystemParams& p) {
    Real rate_f = 0;
    Real rate_g = 0;
    if (p.C < p.c * p.c) {
        // Phi_a is Loewner-nonincreasing in a, so the infimum over
        // a in [0, C] sits at a = C.
        const QuadForm2 f = lyapunov_F_form(p);
        rate_f = min_generalized_eigenvalue(dissipation_forms(p, p.C).phi, f);
    }
    if (p.C < 2 * p.c * std::sqrt(p.b)) {
        // The pencil min-eigenvalue is concave in alpha; the infimum over
        // alpha in [-C/2, C/2] sits at an endpoint.
        const QuadForm2 g = lyapunov_G_form(p);
        const Real lo = min_generalized_eigenvalue(dissipation_forms(p, 0).psi, g);
        const Real hi = min_generalized_eigenvalue(dissipation_forms(p, p.C).psi, g);
        rate_g = std::min(lo, hi);
    }
    if (rate_f <= 0 && rate_g <= 0) return {0, LyapunovForm::None};
    if (rate_f >= rate_g) return {rate_f, LyapunovForm::F};
    return {rate_g, LyapunovForm::G};
}

Real decay_rate(const SystemParams& p) { return decay_rate_with_form(p).first; }

Real equivalence_ratio(const SystemParams& p, LyapunovForm form) {
    if (form == LyapunovForm::None)
        throw std::domain_error("equivalence_ratio: no form chosen");
    const QuadForm2 q = form == LyapunovForm::F ? lyapunov_F_form(p) : lyapunov_G_form(p);
    Eigen::SelfAdjointEigenSolver<Mat2> es(q.matrix());
    return es.eigenvalues()(1) / es.eigenvalues()(0);
}

Certificate certify(const SystemParams& p) {
    const Real main = stability_threshold(p.b, p.c);
    const auto [strong, weak] = legacy_thresholds(p.b, p.c);
    Certificate cert;
    cert.holds_main = p.C < main;
    cert.holds_legacy_strong = p.C < strong;
    cert.holds_legacy_weak = p.C <= weak;
    cert.margin = main - p.C;
    std::tie(cert.delta, cert.chosen_form) = decay_rate_with_form(p);
    return cert;
}

}  // namespace hillstab
