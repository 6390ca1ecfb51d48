#pragma once

#include <cstdint>
#include <vector>

#include "lyapcoalg/flows.hpp"
#include "lyapcoalg/lyapunov.hpp"
#include "lyapcoalg/settings.hpp"

namespace lyapcoalg {

/// Seeded, platform-independent randomness for the generated corpora.
using Rng = detail::Rng;

inline std::vector<std::size_t> random_endomap(Rng& rng, std::size_t n) {
    std::vector<std::size_t> f(n);
    for (auto& v : f) v = rng.below(n);
    return f;
}

/// Endomap with a fixed point at 0, for fixed-point stability corpora.
inline std::vector<std::size_t> random_endomap_fixing_zero(Rng& rng, std::size_t n) {
    std::vector<std::size_t> f = random_endomap(rng, n);
    f[0] = 0;
    return f;
}

inline StateFunction random_state_function(Rng& rng, std::size_t n, const MeasureScale& scale) {
    StateFunction v;
    v.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) v.values.push_back(scale.values[rng.below(scale.size())]);
    return v;
}

inline Flow random_flow(Rng& rng, const TimeMonoid& time, const FiniteSpace& space) {
    return Flow::from_step(time, space, random_endomap(rng, space.size()));
}

}  // namespace lyapcoalg
