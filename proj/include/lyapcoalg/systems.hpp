#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lyapcoalg/core.hpp"
#include "lyapcoalg/functors.hpp"

namespace lyapcoalg {

// ---------------------------------------------------------------------------
// Systems (coalgebras of the chosen functor)
// ---------------------------------------------------------------------------

/// A state space with one functor value per state. Entries are absent only
/// at horizon boundaries of time-derived systems; user systems are total.
struct Coalgebra {
    Endofunctor functor;
    FiniteSpace space;
    std::vector<std::optional<FValue>> dynamics;

    const FValue& at(std::size_t x) const {
        if (x >= dynamics.size() || !dynamics[x])
            throw input_error("dynamics undefined at state #" + std::to_string(x));
        return *dynamics[x];
    }

    bool defined(std::size_t x) const { return x < dynamics.size() && dynamics[x].has_value(); }

    bool total() const {
        return std::all_of(dynamics.begin(), dynamics.end(),
                           [](const auto& d) { return d.has_value(); });
    }

    void validate() const {
        if (dynamics.size() != space.size())
            throw input_error("dynamics table must cover the state space");
        for (const auto& d : dynamics)
            if (d) fvalue_validate(functor, *d, space.size());
    }

    bool operator==(const Coalgebra& other) const {
        return functor == other.functor && space == other.space && dynamics == other.dynamics;
    }
};

/// The standing-still system on a space.
inline Coalgebra stationary_system(const Endofunctor& f, const FiniteSpace& space) {
    Coalgebra c{f, space, {}};
    c.dynamics.reserve(space.size());
    for (std::size_t x = 0; x < space.size(); ++x) c.dynamics.push_back(stationary_value(f, x));
    return c;
}

/// Convenience for identity-kind systems given as an endomap.
inline Coalgebra endomap_system(const FiniteSpace& space, std::vector<std::size_t> step) {
    Coalgebra c{Endofunctor::identity(), space, {}};
    for (std::size_t x = 0; x < step.size(); ++x) {
        if (step[x] >= space.size()) throw input_error("endomap leaves the space");
        c.dynamics.push_back(IdValue{step[x]});
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Unit clocks
// ---------------------------------------------------------------------------

/// The system on the time carrier that advances one tick. Successors past
/// the horizon are absent (Identity/Powerset/FinDist); the labeled clock
/// carries every in-horizon jump and stays total.
struct UnitClock {
    TimeMonoid time;
    Coalgebra system;
};

inline UnitClock make_unit_clock(const Endofunctor& f, const TimeMonoid& time) {
    const std::size_t n = time.size();
    Coalgebra c{f, time.carrier_space(), {}};
    c.dynamics.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        switch (f.kind) {
            case Endofunctor::Kind::Identity:
                if (t + 1 < n) c.dynamics[t] = IdValue{t + 1};
                break;
            case Endofunctor::Kind::Powerset:
                if (t + 1 < n) c.dynamics[t] = SetValue{{t + 1}};
                break;
            case Endofunctor::Kind::Labeled: {
                if (f.labels.size() != n)
                    throw input_error("labeled clock requires the time carrier as label set");
                LabeledValue v;
                for (std::size_t m = 0; t + m < n; ++m) v.edges.emplace_back(m, t + m);
                c.dynamics[t] = std::move(v);
                break;
            }
            case Endofunctor::Kind::FinDist:
                if (t + 1 < n) c.dynamics[t] = dirac(t + 1);
                break;
        }
    }
    return UnitClock{time, std::move(c)};
}

// ---------------------------------------------------------------------------
// Morphisms and tensors
// ---------------------------------------------------------------------------

/// Checks the defining square state by state: applying the functor to g
/// commutes with the two dynamics. Horizon honesty: states with absent
/// source dynamics are skipped, and for the labeled kind the target is
/// compared only up to the source's highest label, since time-derived
/// labeled systems truncate high labels at the horizon.
inline bool is_system_morphism(const std::vector<std::size_t>& g, const Coalgebra& f,
                               const Coalgebra& f_prime,
                               std::size_t* witness = nullptr) {
    if (f.functor != f_prime.functor) throw input_error("functor kinds differ");
    if (g.size() != f.space.size()) throw input_error("morphism map must be total");
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (!f.defined(x)) continue;
        if (g[x] >= f_prime.space.size()) throw input_error("morphism map leaves the codomain");
        bool commutes = false;
        if (f_prime.defined(g[x])) {
            const FValue lhs = fmap(f.functor, g, f.at(x));
            FValue rhs = f_prime.at(g[x]);
            if (f.functor.kind == Endofunctor::Kind::Labeled) {
                const auto& lhs_edges = std::get<LabeledValue>(lhs).edges;
                if (!lhs_edges.empty()) {
                    std::size_t top = 0;
                    for (const auto& [lab, _] : lhs_edges) top = std::max(top, lab);
                    auto edges = std::get<LabeledValue>(rhs).edges;
                    std::erase_if(edges, [&](const auto& e) { return e.first > top; });
                    rhs = LabeledValue{std::move(edges)};
                }
            }
            commutes = lhs == rhs;
        }
        if (!commutes) {
            if (witness) *witness = x;
            return false;
        }
    }
    return true;
}

/// Combines two systems through the laxator; the result lives on the
/// product space (first factor major).
inline Coalgebra tensor(const Coalgebra& a, const Coalgebra& b) {
    if (a.functor != b.functor) throw input_error("functor kinds differ");
    Coalgebra out{a.functor, product_space(a.space, b.space), {}};
    out.dynamics.resize(a.space.size() * b.space.size());
    for (std::size_t i = 0; i < a.space.size(); ++i)
        for (std::size_t j = 0; j < b.space.size(); ++j) {
            if (!a.defined(i) || !b.defined(j)) continue;
            out.dynamics[pair_index(i, j, b.space.size())] =
                laxator(a.functor, a.at(i), b.at(j), b.space.size());
        }
    return out;
}

/// The free system on X: one tick on the time component, standing still on
/// X. Solutions of an arbitrary system are exactly the morphisms out of it.
inline Coalgebra free_system(const UnitClock& clock, const FiniteSpace& x) {
    return tensor(clock.system, stationary_system(clock.system.functor, x));
}

/// A curve T -> E is a trajectory when it is a morphism from the clock.
inline bool is_trajectory(const std::vector<std::size_t>& curve, const UnitClock& clock,
                          const Coalgebra& f) {
    return is_system_morphism(curve, clock.system, f);
}

/// phi : T x A -> E (time-major flattening) solves f when it is a morphism
/// from the free system on A.
inline bool is_solution(const std::vector<std::size_t>& phi, const UnitClock& clock,
                        const FiniteSpace& a, const Coalgebra& f) {
    return is_system_morphism(phi, free_system(clock, a), f);
}

// ---------------------------------------------------------------------------
// Completeness
// ---------------------------------------------------------------------------

struct CompletenessReport {
    enum class Reason { NoExtension, MultipleExtensions };

    bool complete = true;
    std::vector<std::pair<std::size_t, Reason>> failures;

    void fail(std::size_t state, Reason r) {
        complete = false;
        failures.emplace_back(state, r);
    }
};

/// Local decision: every state determines exactly one next state (per label
/// for labeled systems, as a Dirac for distributions). Absent entries are
/// horizon boundaries and do not count against the system.
inline CompletenessReport is_T_complete(const Coalgebra& f) {
    CompletenessReport report;
    for (std::size_t x = 0; x < f.space.size(); ++x) {
        if (!f.defined(x)) continue;
        const FValue& v = f.at(x);
        switch (f.functor.kind) {
            case Endofunctor::Kind::Identity:
                break;  // an endomap always extends uniquely
            case Endofunctor::Kind::Powerset: {
                const auto& s = std::get<SetValue>(v).elems;
                if (s.empty())
                    report.fail(x, CompletenessReport::Reason::NoExtension);
                else if (s.size() > 1)
                    report.fail(x, CompletenessReport::Reason::MultipleExtensions);
                break;
            }
            case Endofunctor::Kind::Labeled: {
                const auto& edges = std::get<LabeledValue>(v).edges;
                std::vector<std::size_t> per_label(f.functor.labels.size(), 0);
                for (const auto& [lab, _] : edges) ++per_label[lab];
                bool missing = false, duplicated = false;
                for (std::size_t c : per_label) {
                    missing |= (c == 0);
                    duplicated |= (c > 1);
                }
                if (duplicated)
                    report.fail(x, CompletenessReport::Reason::MultipleExtensions);
                else if (missing)
                    report.fail(x, CompletenessReport::Reason::NoExtension);
                break;
            }
            case Endofunctor::Kind::FinDist: {
                if (std::get<DistValue>(v).mass.size() != 1)
                    report.fail(x, CompletenessReport::Reason::MultipleExtensions);
                break;
            }
        }
    }
    return report;
}

/// Horizon-truncated compatibility square between the clock and the time
/// monoid: addition is a morphism from the free system on the time carrier
/// into the clock, with out-of-horizon images dropped on both sides.
inline bool clock_monoid_compatible(const UnitClock& clock) {
    const std::size_t n = clock.time.size();
    const Coalgebra l_t = free_system(clock, clock.time.carrier_space());

    std::vector<std::optional<std::size_t>> add(n * n);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < n; ++s) add[pair_index(t, s, n)] = clock.time.plus(t, s);

    for (std::size_t p = 0; p < l_t.space.size(); ++p) {
        if (!l_t.defined(p)) continue;
        const auto target = add[p];
        if (!target || !clock.system.defined(*target)) continue;
        const auto lhs = fmap_partial(clock.system.functor, add, l_t.at(p));
        if (!lhs) continue;
        if (!(*lhs == clock.system.at(*target))) return false;
    }
    return true;
}

}  // namespace lyapcoalg
