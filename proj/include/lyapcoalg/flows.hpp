#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lyapcoalg/core.hpp"
#include "lyapcoalg/systems.hpp"

namespace lyapcoalg {

// ---------------------------------------------------------------------------
// Orbits
// ---------------------------------------------------------------------------

/// Eventually-periodic iteration data for one starting state: the states
/// visited before entering the cycle, then one full cycle.
struct Orbit {
    std::vector<std::size_t> prefix;
    std::vector<std::size_t> cycle;

    std::size_t cycle_start() const { return prefix.size(); }
    std::size_t cycle_length() const { return cycle.size(); }

    /// State reached after k steps, for any k (beyond any horizon).
    std::size_t at(std::size_t k) const {
        if (k < prefix.size()) return prefix[k];
        return cycle[(k - prefix.size()) % cycle.size()];
    }

    /// All states the orbit ever visits.
    std::vector<std::size_t> visited() const {
        std::vector<std::size_t> v = prefix;
        v.insert(v.end(), cycle.begin(), cycle.end());
        return v;
    }
};

inline Orbit orbit(const std::vector<std::size_t>& step, std::size_t x0) {
    if (x0 >= step.size()) throw input_error("orbit start outside the space");
    std::vector<std::optional<std::size_t>> position(step.size());
    std::vector<std::size_t> path;
    std::size_t x = x0;
    while (!position[x]) {
        position[x] = path.size();
        path.push_back(x);
        x = step[x];
    }
    const std::size_t entry = *position[x];
    Orbit o;
    o.prefix.assign(path.begin(), path.begin() + entry);
    o.cycle.assign(path.begin() + entry, path.end());
    return o;
}

// ---------------------------------------------------------------------------
// Flows
// ---------------------------------------------------------------------------

/// A time action stored compressed: the one-tick generator plus per-state
/// orbits. Queries are answered from the orbit decomposition, so suprema
/// over all of time are exact rather than horizon-truncated.
struct Flow {
    TimeMonoid time;
    FiniteSpace space;
    std::vector<std::size_t> step_map;
    std::vector<Orbit> orbits;

    static Flow from_step(const TimeMonoid& time, const FiniteSpace& space,
                          std::vector<std::size_t> step) {
        if (step.size() != space.size()) throw input_error("step map must be total");
        for (std::size_t s : step)
            if (s >= space.size()) throw input_error("step map leaves the space");
        Flow f{time, space, std::move(step), {}};
        f.orbits.reserve(space.size());
        for (std::size_t x = 0; x < space.size(); ++x) f.orbits.push_back(orbit(f.step_map, x));
        return f;
    }

    /// phi at (tick k, state x); valid for every k, not only in-horizon ones.
    std::size_t at(std::size_t k, std::size_t x) const { return orbits[x].at(k); }

    bool operator==(const Flow& other) const {
        return time == other.time && space == other.space && step_map == other.step_map;
    }

    /// Materialized in-horizon action table, time-major.
    std::vector<std::size_t> action_table() const {
        std::vector<std::size_t> table(time.size() * space.size());
        for (std::size_t t = 0; t < time.size(); ++t)
            for (std::size_t x = 0; x < space.size(); ++x)
                table[pair_index(t, x, space.size())] = at(t, x);
        return table;
    }
};

/// Initialization and composition squares on every in-horizon combination.
inline bool is_flow(const std::vector<std::size_t>& action, const TimeMonoid& time,
                    std::size_t state_count, std::string* witness = nullptr) {
    const std::size_t ticks = time.size();
    if (action.size() != ticks * state_count)
        throw input_error("action table must cover time x space");
    const auto phi = [&](std::size_t t, std::size_t x) {
        return action[pair_index(t, x, state_count)];
    };
    for (std::size_t x = 0; x < state_count; ++x)
        if (phi(0, x) != x) {
            if (witness) *witness = "initialization fails at state #" + std::to_string(x);
            return false;
        }
    for (std::size_t t1 = 0; t1 < ticks; ++t1)
        for (std::size_t t2 = 0; t2 + t1 < ticks; ++t2)
            for (std::size_t x = 0; x < state_count; ++x)
                if (phi(t1, phi(t2, x)) != phi(t1 + t2, x)) {
                    if (witness)
                        *witness = "composition fails at (t1=" + std::to_string(t1) +
                                   ", t2=" + std::to_string(t2) + ", state #" +
                                   std::to_string(x) + ")";
                    return false;
                }
    return true;
}

inline Flow flow_from_table(const std::vector<std::size_t>& action, const TimeMonoid& time,
                            const FiniteSpace& space) {
    std::string witness;
    if (!is_flow(action, time, space.size(), &witness))
        throw input_error("not a flow: " + witness);
    std::vector<std::size_t> step(space.size());
    for (std::size_t x = 0; x < space.size(); ++x)
        step[x] = action[pair_index(1, x, space.size())];
    return Flow::from_step(time, space, std::move(step));
}

// ---------------------------------------------------------------------------
// Derivative and integral
// ---------------------------------------------------------------------------

/// The derivative of an arbitrary (possibly partially defined) map
/// T x E -> E: evaluate the free system at time zero and push through the
/// map, with out-of-horizon images truncated away.
inline Coalgebra derivative_partial(const std::vector<std::optional<std::size_t>>& action,
                                    const UnitClock& clock, const FiniteSpace& space) {
    const Coalgebra l_e = free_system(clock, space);
    const std::size_t n = space.size();
    if (action.size() != clock.time.size() * n)
        throw input_error("action table must cover time x space");
    Coalgebra out{clock.system.functor, space, {}};
    out.dynamics.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
        const std::size_t p = pair_index(0, x, n);
        if (!l_e.defined(p)) continue;
        out.dynamics[x] = fmap_partial(out.functor, action, l_e.at(p));
    }
    return out;
}

/// D(phi) for a genuine flow. For the identity kind this collapses to
/// x -> phi(one tick, x); for the labeled kind it is the behavior of the
/// flow.
inline Coalgebra derivative(const Flow& phi, const UnitClock& clock) {
    if (clock.time != phi.time) throw input_error("clock and flow use different time monoids");
    std::vector<std::optional<std::size_t>> action;
    for (std::size_t v : phi.action_table()) action.emplace_back(v);
    return derivative_partial(action, clock, phi.space);
}

/// The behavior of a flow as a time-labeled transition system:
/// x carries the edge (t, phi(t, x)) for every in-horizon t.
inline Coalgebra behavior_lts(const Flow& phi) {
    const std::size_t ticks = phi.time.size();
    Coalgebra out{Endofunctor::labeled(phi.time.carrier_space()), phi.space, {}};
    out.dynamics.reserve(phi.space.size());
    for (std::size_t x = 0; x < phi.space.size(); ++x) {
        LabeledValue v;
        for (std::size_t t = 0; t < ticks; ++t) v.edges.emplace_back(t, phi.at(t, x));
        out.dynamics.push_back(std::move(v));
    }
    return out;
}

/// Raised when integration is asked of a system that does not determine
/// unique trajectories.
class incomplete_system_error : public std::runtime_error {
public:
    incomplete_system_error(std::string what, CompletenessReport r)
        : std::runtime_error(std::move(what)), report(std::move(r)) {}
    CompletenessReport report;
};

/// The unique solution flow of a complete system. For the labeled kind the
/// extracted flow is additionally checked against every edge, since local
/// determinism alone does not force the edge set to be a behavior.
inline Flow integral(const Coalgebra& f, const UnitClock& clock) {
    const CompletenessReport completeness = is_T_complete(f);
    if (!completeness.complete)
        throw incomplete_system_error("system does not determine unique trajectories",
                                      completeness);

    const std::size_t n = f.space.size();
    std::vector<std::size_t> step(n);
    for (std::size_t x = 0; x < n; ++x) {
        const FValue& v = f.at(x);
        switch (f.functor.kind) {
            case Endofunctor::Kind::Identity:
                step[x] = std::get<IdValue>(v).elem;
                break;
            case Endofunctor::Kind::Powerset:
                step[x] = std::get<SetValue>(v).elems.front();
                break;
            case Endofunctor::Kind::Labeled: {
                if (f.functor.labels.size() != clock.time.size())
                    throw input_error("labeled system labels do not match the time carrier");
                std::optional<std::size_t> next;
                for (const auto& [lab, e] : std::get<LabeledValue>(v).edges)
                    if (lab == 1) next = e;
                if (!next) throw input_error("labeled system missing the one-tick edge");
                step[x] = *next;
                break;
            }
            case Endofunctor::Kind::FinDist:
                step[x] = std::get<DistValue>(v).mass.front().first;
                break;
        }
    }
    Flow flow = Flow::from_step(clock.time, f.space, std::move(step));

    if (f.functor.kind == Endofunctor::Kind::Labeled) {
        const Coalgebra expected = behavior_lts(flow);
        for (std::size_t x = 0; x < n; ++x)
            if (!(expected.at(x) == f.at(x)))
                throw input_error(
                    "labeled system is deterministic but is not the behavior of any flow "
                    "(mismatch at state #" + std::to_string(x) + ")");
    }
    return flow;
}

// ---------------------------------------------------------------------------
// Equilibria and invariance
// ---------------------------------------------------------------------------

/// phi(t, x*) = x* for every in-horizon t.
inline bool equilibrium_check(std::size_t xstar, const Flow& phi) {
    if (xstar >= phi.space.size()) throw input_error("point outside the space");
    return phi.step_map[xstar] == xstar;
}

/// The system sense: the dynamics at x* is the standing-still value.
inline bool equilibrium_check_sys(std::size_t xstar, const Coalgebra& f) {
    if (xstar >= f.space.size()) throw input_error("point outside the space");
    return f.defined(xstar) && f.at(xstar) == stationary_value(f.functor, xstar);
}

/// The image of the generalized element is closed under the action at every
/// in-horizon time (equivalently, under the one-tick generator).
inline bool forward_invariant_check(const GeneralizedElement& x, const Flow& phi) {
    if (x.map.size() != x.domain.size())
        throw input_error("generalized element map must be total on its domain");
    std::vector<bool> in_image(phi.space.size(), false);
    for (std::size_t e : x.map) {
        if (e >= phi.space.size()) throw input_error("generalized element leaves the space");
        in_image[e] = true;
    }
    for (std::size_t t = 0; t < phi.time.size(); ++t)
        for (std::size_t e : x.map)
            if (!in_image[phi.at(t, e)]) return false;
    return true;
}

}  // namespace lyapcoalg
