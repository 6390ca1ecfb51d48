#pragma once

#include "lyapcoalg/lyapunov.hpp"

namespace lyapcoalg {

/// Base data used by every bundled setting: states 0..n-1 on the integer
/// line with the absolute-difference metric and the integer scale.
inline DynamicSetting basic_setting(const Endofunctor& functor, std::size_t state_count,
                                    std::size_t horizon) {
    DynamicSetting s;
    s.time = TimeMonoid::naturals(horizon);
    s.space = FiniteSpace::range(state_count);
    s.scale = MeasureScale::integers_up_to(static_cast<long long>(state_count) - 1);
    std::vector<Rat> coords;
    for (std::size_t i = 0; i < state_count; ++i) coords.emplace_back(static_cast<long long>(i));
    s.metric = Metric::absolute_difference(coords);
    s.functor = functor;
    s.clock = make_unit_clock(functor, s.time);
    s.stable = stationary_system(functor, scale_space(s.scale));
    s.forder = FOrder{functor, s.scale, std::nullopt, std::nullopt};
    s.monoidal = true;
    s.converse = true;
    return s;
}

/// Endomap dynamics, one-tick clock.
inline DynamicSetting discrete_setting(std::size_t state_count, std::size_t horizon = 16) {
    return basic_setting(Endofunctor::identity(), state_count, horizon);
}

/// Successor-set dynamics (directed graphs).
inline DynamicSetting graph_setting(std::size_t state_count, std::size_t horizon = 16) {
    return basic_setting(Endofunctor::powerset(), state_count, horizon);
}

/// Time-labeled transition systems: labels are the time carrier, so the
/// label set inherits the horizon.
inline DynamicSetting behavioral_setting(std::size_t state_count, std::size_t horizon = 16) {
    const TimeMonoid time = TimeMonoid::naturals(horizon);
    return basic_setting(Endofunctor::labeled(time.carrier_space()), state_count, horizon);
}

/// Finite-support probabilistic dynamics.
inline DynamicSetting markov_setting(std::size_t state_count, std::size_t horizon = 16) {
    return basic_setting(Endofunctor::findist(), state_count, horizon);
}

}  // namespace lyapcoalg
