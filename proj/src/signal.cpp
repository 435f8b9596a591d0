#include "hillstab/signal.hpp"

#include <algorithm>
#include <cmath>

namespace hillstab {

CoefficientSignal::CoefficientSignal(std::vector<Real> breakpoints,
                                     std::vector<Real> values,
                                     std::optional<Real> period)
    : bp_(std::move(breakpoints)), vals_(std::move(values)), period_(period) {
    if (bp_.size() < 2)
        throw std::domain_error("CoefficientSignal: need at least two breakpoints");
    if (vals_.size() + 1 != bp_.size())
        throw std::domain_error("CoefficientSignal: need one value per interval");
    for (std::size_t i = 0; i < bp_.size(); ++i) {
        if (!std::isfinite(bp_[i]))
            throw std::domain_error("CoefficientSignal: non-finite breakpoint");
        if (i > 0 && !(bp_[i] > bp_[i - 1]))
            throw std::domain_error("CoefficientSignal: breakpoints must increase strictly");
    }
    for (Real v : vals_)
        if (!std::isfinite(v))
            throw std::domain_error("CoefficientSignal: non-finite value");
    if (period_) {
        const Real span = bp_.back() - bp_.front();
        if (!(*period_ == span))
            throw std::domain_error("CoefficientSignal: period must equal the window span");
    }
}

CoefficientSignal CoefficientSignal::constant(Real value, Real t0, Real t1) {
    return CoefficientSignal({t0, t1}, {value});
}

CoefficientSignal CoefficientSignal::periodic(std::vector<Real> breakpoints,
                                              std::vector<Real> values) {
    const Real span = breakpoints.back() - breakpoints.front();
    return CoefficientSignal(std::move(breakpoints), std::move(values), span);
}

Real CoefficientSignal::operator()(Real t) const {
    Real tau = t;
    if (period_) {
        tau = bp_.front() + std::fmod(t - bp_.front(), *period_);
        if (tau < bp_.front()) tau += *period_;
    } else {
        if (t < bp_.front() || t > bp_.back())
            throw std::domain_error("CoefficientSignal: evaluation outside the window");
        if (t == bp_.back()) return vals_.back();
    }
    auto it = std::upper_bound(bp_.begin(), bp_.end(), tau);
    std::size_t i = static_cast<std::size_t>(it - bp_.begin());
    if (i == 0) return vals_.front();
    if (i - 1 >= vals_.size()) return vals_.back();
    return vals_[i - 1];
}

bool CoefficientSignal::covers(Real t0, Real t1) const {
    if (period_) return true;
    return t0 >= bp_.front() && t1 <= bp_.back();
}

Real CoefficientSignal::min_value() const {
    return *std::min_element(vals_.begin(), vals_.end());
}

Real CoefficientSignal::max_value() const {
    return *std::max_element(vals_.begin(), vals_.end());
}

CoefficientSignal CoefficientSignal::shifted(Real delta) const {
    std::vector<Real> vals = vals_;
    for (Real& v : vals) v += delta;
    return CoefficientSignal(bp_, std::move(vals), period_);
}

std::vector<Real> CoefficientSignal::boundaries_in(Real t0, Real t1) const {
    std::vector<Real> out;
    if (!(t1 > t0)) return out;
    if (!period_) {
        for (Real b : bp_)
            if (b > t0 && b < t1) out.push_back(b);
        return out;
    }
    const Real P = *period_;
    const Real base = bp_.front();
    // Image of breakpoint i in repetition k is base + k P + (bp_[i] - base);
    // each image is computed fresh so long spans do not accumulate error.
    const long long k0 = static_cast<long long>(std::floor((t0 - base) / P)) - 1;
    const long long k1 = static_cast<long long>(std::ceil((t1 - base) / P)) + 1;
    for (long long k = k0; k <= k1; ++k) {
        for (std::size_t i = 0; i + 1 < bp_.size(); ++i) {
            const Real t = base + static_cast<Real>(k) * P + (bp_[i] - base);
            if (t > t0 && t < t1) out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace hillstab
