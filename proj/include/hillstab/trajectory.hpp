#pragma once

#include "hillstab/signal.hpp"
#include "hillstab/types.hpp"

#include <optional>
#include <vector>

namespace hillstab {

enum class Method { Exact, Rk4 };

inline const char* to_string(Method m) {
    return m == Method::Exact ? "exact" : "rk4";
}

struct TrajectoryMeta {
    std::optional<SystemParams> params;
    std::optional<CoefficientSignal> signal;
    Method method = Method::Exact;
    Real step = 0;  ///< integrator step size; 0 for exact stepping

    bool operator==(const TrajectoryMeta& other) const {
        const bool p_eq = params.has_value() == other.params.has_value() &&
                          (!params.has_value() ||
                           (params->b == other.params->b && params->c == other.params->c &&
                            params->C == other.params->C));
        return p_eq && signal == other.signal && method == other.method &&
               step == other.step;
    }
};

/// Time-ordered (u, u') samples plus how they were produced.
struct Trajectory {
    std::vector<PhaseState> samples;
    TrajectoryMeta meta;
};

}  // namespace hillstab
