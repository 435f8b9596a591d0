#pragma once

#include "hillstab/types.hpp"

#include <optional>
#include <vector>

namespace hillstab {

/// Piecewise-constant coefficient of time. values[i] rules the interval
/// [breakpoints[i], breakpoints[i+1]); evaluation at a breakpoint uses the
/// right-hand interval. With a period set, the window repeats over all of
/// the real line.
class CoefficientSignal {
public:
    CoefficientSignal(std::vector<Real> breakpoints, std::vector<Real> values,
                      std::optional<Real> period = std::nullopt);

    /// Single-piece signal on [t0, t1].
    static CoefficientSignal constant(Real value, Real t0, Real t1);

    /// Periodic extension of the given window; the period is the window span.
    static CoefficientSignal periodic(std::vector<Real> breakpoints,
                                      std::vector<Real> values);

    Real operator()(Real t) const;

    Real start() const { return bp_.front(); }
    Real window_end() const { return bp_.back(); }
    bool is_periodic() const { return period_.has_value(); }
    std::optional<Real> period() const { return period_; }

    /// True when [t0, t1] is inside the signal's domain.
    bool covers(Real t0, Real t1) const;

    Real min_value() const;
    Real max_value() const;

    /// Same breakpoints with every value shifted by delta.
    CoefficientSignal shifted(Real delta) const;

    const std::vector<Real>& breakpoints() const { return bp_; }
    const std::vector<Real>& values() const { return vals_; }

    /// Piece boundaries strictly inside (t0, t1), periodic images included,
    /// in increasing order.
    std::vector<Real> boundaries_in(Real t0, Real t1) const;

    bool operator==(const CoefficientSignal& other) const {
        return bp_ == other.bp_ && vals_ == other.vals_ && period_ == other.period_;
    }

private:
    std::vector<Real> bp_;
    std::vector<Real> vals_;
    std::optional<Real> period_;
};

}  // namespace hillstab
