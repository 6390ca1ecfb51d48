#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lyapcoalg/flows.hpp"
#include "lyapcoalg/systems.hpp"

using namespace lyapcoalg;

namespace {

// floor(x/2) on {0..7}
Coalgebra halving_system() {
    const FiniteSpace e = FiniteSpace::range(8);
    std::vector<std::size_t> step(8);
    for (std::size_t x = 0; x < 8; ++x) step[x] = x / 2;
    return endomap_system(e, step);
}

std::vector<std::size_t> identity_map(std::size_t n) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i;
    return m;
}

}  // namespace

TEST_CASE("unit clocks follow the one-tick rule") {
    const TimeMonoid t = TimeMonoid::naturals(3);

    const UnitClock id_clock = make_unit_clock(Endofunctor::identity(), t);
    CHECK(id_clock.system.at(0) == FValue{IdValue{1}});
    CHECK_FALSE(id_clock.system.defined(3));  // successor absent past the horizon

    const UnitClock set_clock = make_unit_clock(Endofunctor::powerset(), t);
    CHECK(set_clock.system.at(2) == FValue{make_set({3})});

    const UnitClock dist_clock = make_unit_clock(Endofunctor::findist(), t);
    CHECK(dist_clock.system.at(1) == FValue{dirac(2)});

    const UnitClock lts_clock = make_unit_clock(Endofunctor::labeled(t.carrier_space()), t);
    CHECK(lts_clock.system.at(1) == FValue{make_labeled({{0, 1}, {1, 2}, {2, 3}})});
    CHECK(lts_clock.system.total());

    for (const auto& clock : {id_clock, set_clock, dist_clock, lts_clock})
        CHECK(clock_monoid_compatible(clock));
}

TEST_CASE("system morphisms: identity square and composite comparison") {
    const Coalgebra f = halving_system();
    CHECK(is_system_morphism(identity_map(8), f, f));

    // constant-0 map into the one-point fixed system
    const Coalgebra fixed = endomap_system(FiniteSpace::range(1), {0});
    CHECK(is_system_morphism(std::vector<std::size_t>(8, 0), f, fixed));

    // saturating +1 is not a morphism from halving to itself
    std::vector<std::size_t> plus1(8);
    for (std::size_t x = 0; x < 8; ++x) plus1[x] = std::min<std::size_t>(x + 1, 7);
    std::size_t witness = 99;
    CHECK_FALSE(is_system_morphism(plus1, f, f, &witness));
    CHECK(witness < 8);

    const Coalgebra graph = stationary_system(Endofunctor::powerset(), FiniteSpace::range(2));
    CHECK_THROWS_AS(is_system_morphism(identity_map(2), graph, fixed), input_error);
}

TEST_CASE("tensor of stationary systems is stationary on the product") {
    for (const Endofunctor& f :
         {Endofunctor::identity(), Endofunctor::powerset(),
          Endofunctor::labeled(FiniteSpace::range(2)), Endofunctor::findist()}) {
        const FiniteSpace a = FiniteSpace::range(3);
        const FiniteSpace b = FiniteSpace::range(2);
        const Coalgebra lhs = tensor(stationary_system(f, a), stationary_system(f, b));
        const Coalgebra rhs = stationary_system(f, product_space(a, b));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("tensor pairs identity-kind dynamics componentwise") {
    const Coalgebra f = endomap_system(FiniteSpace::range(2), {1, 0});
    const Coalgebra g = endomap_system(FiniteSpace::range(3), {0, 0, 1});
    const Coalgebra fg = tensor(f, g);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            CHECK(fg.at(pair_index(a, b, 3)) ==
                  FValue{IdValue{pair_index(std::get<IdValue>(f.at(a)).elem,
                                            std::get<IdValue>(g.at(b)).elem, 3)}});
}

TEST_CASE("free systems per kind") {
    const TimeMonoid t = TimeMonoid::naturals(3);
    const FiniteSpace x = FiniteSpace::range(2);

    SECTION("identity: one tick forward, same state") {
        const UnitClock clock = make_unit_clock(Endofunctor::identity(), t);
        const Coalgebra l = free_system(clock, x);
        CHECK(l == tensor(clock.system, stationary_system(clock.system.functor, x)));
        CHECK(l.at(pair_index(1, 0, 2)) == FValue{IdValue{pair_index(2, 0, 2)}});
        CHECK_FALSE(l.defined(pair_index(3, 0, 2)));
    }
    SECTION("distributions: point mass one tick forward") {
        const UnitClock clock = make_unit_clock(Endofunctor::findist(), t);
        const Coalgebra l = free_system(clock, x);
        CHECK(l.at(pair_index(0, 1, 2)) == FValue{dirac(pair_index(1, 1, 2))});
    }
    SECTION("labeled: every in-horizon jump, label-matched") {
        const UnitClock clock = make_unit_clock(Endofunctor::labeled(t.carrier_space()), t);
        const Coalgebra l = free_system(clock, x);
        CHECK(l.at(pair_index(1, 0, 2)) ==
              FValue{make_labeled({{0, pair_index(1, 0, 2)},
                                   {1, pair_index(2, 0, 2)},
                                   {2, pair_index(3, 0, 2)}})});
    }
}

TEST_CASE("free systems are natural in the space") {
    const TimeMonoid t = TimeMonoid::naturals(4);
    for (const Endofunctor& f :
         {Endofunctor::identity(), Endofunctor::powerset(), Endofunctor::findist(),
          Endofunctor::labeled(t.carrier_space())}) {
        const UnitClock clock = make_unit_clock(f, t);
        for (std::size_t nx = 1; nx <= 3; ++nx)
            for (std::size_t ny = 1; ny <= 3; ++ny)
                for (const auto& g : all_functions(nx, ny)) {
                    const Coalgebra lx = free_system(clock, FiniteSpace::range(nx));
                    const Coalgebra ly = free_system(clock, FiniteSpace::range(ny));
                    std::vector<std::size_t> id_x_g(t.size() * nx);
                    for (std::size_t k = 0; k < t.size(); ++k)
                        for (std::size_t v = 0; v < nx; ++v)
                            id_x_g[pair_index(k, v, nx)] = pair_index(k, g[v], ny);
                    CHECK(is_system_morphism(id_x_g, lx, ly));
                }
    }
}

TEST_CASE("trajectories against the identity-kind clock") {
    const TimeMonoid t = TimeMonoid::naturals(6);
    const UnitClock clock = make_unit_clock(Endofunctor::identity(), t);
    const Coalgebra f = halving_system();

    // c_k = step^k(x0) is a trajectory
    std::vector<std::size_t> curve(t.size());
    std::size_t x = 5;
    for (std::size_t k = 0; k < t.size(); ++k) {
        curve[k] = x;
        x = x / 2;
    }
    CHECK(is_trajectory(curve, clock, f));

    // constant curve at a fixed point
    CHECK(is_trajectory(std::vector<std::size_t>(t.size(), 0), clock, f));

    // skipping a step breaks the square
    std::vector<std::size_t> skipping(t.size());
    x = 7;
    for (std::size_t k = 0; k < t.size(); ++k) {
        skipping[k] = x;
        x = x / 4;
    }
    CHECK_FALSE(is_trajectory(skipping, clock, f));
}

TEST_CASE("solutions: iterates solve, shifted iterates do not") {
    const TimeMonoid t = TimeMonoid::naturals(6);
    const UnitClock clock = make_unit_clock(Endofunctor::identity(), t);
    const Coalgebra f = halving_system();
    const FiniteSpace e = f.space;

    std::vector<std::size_t> phi(t.size() * 8);
    std::vector<std::size_t> shifted(t.size() * 8);
    for (std::size_t x0 = 0; x0 < 8; ++x0) {
        std::size_t cur = x0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            phi[pair_index(k, x0, 8)] = cur;
            shifted[pair_index(k, x0, 8)] = cur / 2;
            cur = cur / 2;
        }
    }
    CHECK(is_solution(phi, clock, e, f));

    // shifted iterates still satisfy the morphism square, but their initial
    // condition is the step map rather than the identity, so they are not
    // the integral and fail the flow laws outright
    CHECK(is_solution(shifted, clock, e, f));
    bool shifted_initial_is_identity = true;
    for (std::size_t x0 = 0; x0 < 8; ++x0)
        shifted_initial_is_identity =
            shifted_initial_is_identity && shifted[pair_index(0, x0, 8)] == x0;
    CHECK_FALSE(shifted_initial_is_identity);
    CHECK_FALSE(is_flow(shifted, t, 8));

    // the projection solves the stationary system
    const FiniteSpace x2 = FiniteSpace::range(2);
    std::vector<std::size_t> projection(t.size() * 2);
    for (std::size_t k = 0; k < t.size(); ++k)
        for (std::size_t v = 0; v < 2; ++v) projection[pair_index(k, v, 2)] = v;
    CHECK(is_solution(projection, clock, x2, stationary_system(Endofunctor::identity(), x2)));
}

TEST_CASE("solutions restrict to trajectories at every initial point") {
    const TimeMonoid t = TimeMonoid::naturals(5);
    const UnitClock clock = make_unit_clock(Endofunctor::identity(), t);
    for (std::size_t n = 1; n <= 3; ++n) {
        const FiniteSpace e = FiniteSpace::range(n);
        for (const auto& step : all_functions(n, n)) {
            const Coalgebra f = endomap_system(e, step);
            std::vector<std::size_t> phi(t.size() * n);
            for (std::size_t x0 = 0; x0 < n; ++x0) {
                std::size_t cur = x0;
                for (std::size_t k = 0; k < t.size(); ++k) {
                    phi[pair_index(k, x0, n)] = cur;
                    cur = step[cur];
                }
            }
            REQUIRE(is_solution(phi, clock, e, f));
            for (std::size_t x0 = 0; x0 < n; ++x0) {
                std::vector<std::size_t> curve(t.size());
                for (std::size_t k = 0; k < t.size(); ++k)
                    curve[k] = phi[pair_index(k, x0, n)];
                CHECK(is_trajectory(curve, clock, f));
            }
        }
    }
}

TEST_CASE("completeness per kind") {
    SECTION("endomaps are always complete") {
        CHECK(is_T_complete(halving_system()).complete);
    }
    SECTION("graphs: sinks and branches") {
        Coalgebra g{Endofunctor::powerset(), FiniteSpace::range(3), {}};
        g.dynamics = {FValue{make_set({1})}, FValue{make_set({0, 2})}, FValue{make_set({})}};
        const CompletenessReport r = is_T_complete(g);
        CHECK_FALSE(r.complete);
        REQUIRE(r.failures.size() == 2);
        CHECK(r.failures[0] ==
              std::pair<std::size_t, CompletenessReport::Reason>{
                  1, CompletenessReport::Reason::MultipleExtensions});
        CHECK(r.failures[1] == std::pair<std::size_t, CompletenessReport::Reason>{
                                   2, CompletenessReport::Reason::NoExtension});
    }
    SECTION("labeled: two a-successors") {
        const Endofunctor lab = Endofunctor::labeled(FiniteSpace({"a", "b"}));
        Coalgebra g{lab, FiniteSpace::range(2), {}};
        g.dynamics = {FValue{make_labeled({{0, 0}, {0, 1}, {1, 0}})},
                      FValue{make_labeled({{0, 1}, {1, 1}})}};
        const CompletenessReport r = is_T_complete(g);
        CHECK_FALSE(r.complete);
        REQUIRE(r.failures.size() == 1);
        CHECK(r.failures[0].first == 0);
        CHECK(r.failures[0].second == CompletenessReport::Reason::MultipleExtensions);
    }
    SECTION("distributions: spread mass") {
        Coalgebra g{Endofunctor::findist(), FiniteSpace::range(2), {}};
        g.dynamics = {FValue{dirac(0)}, FValue{make_dist({{0, Rat(1, 2)}, {1, Rat(1, 2)}})}};
        const CompletenessReport r = is_T_complete(g);
        CHECK_FALSE(r.complete);
        CHECK(r.failures[0].first == 1);
    }
}

TEST_CASE("local completeness criterion agrees with bounded extension search") {
    // brute-force oracle: enumerate all curves T -> E extending each start
    const TimeMonoid t = TimeMonoid::naturals(3);
    const UnitClock clock = make_unit_clock(Endofunctor::powerset(), t);

    const auto extension_count = [&](const Coalgebra& f, std::size_t x0) {
        const std::size_t n = f.space.size();
        std::size_t count = 0;
        std::vector<std::size_t> curve(t.size(), 0);
        const std::size_t total = [&] {
            std::size_t p = 1;
            for (std::size_t k = 1; k < t.size(); ++k) p *= n;
            return p;
        }();
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t c = code;
            curve[0] = x0;
            for (std::size_t k = 1; k < t.size(); ++k) {
                curve[k] = c % n;
                c /= n;
            }
            if (is_trajectory(curve, clock, f)) ++count;
        }
        return count;
    };

    for (std::size_t n = 1; n <= 2; ++n) {
        const FiniteSpace e = FiniteSpace::range(n);
        const auto subsets = all_subsets(n);
        // enumerate all powerset systems on n states
        std::vector<std::size_t> choice(n, 0);
        while (true) {
            Coalgebra f{Endofunctor::powerset(), e, {}};
            for (std::size_t x = 0; x < n; ++x) f.dynamics.push_back(SetValue{subsets[choice[x]]});
            const bool local = is_T_complete(f).complete;
            bool unique_everywhere = true;
            for (std::size_t x0 = 0; x0 < n; ++x0)
                unique_everywhere = unique_everywhere && extension_count(f, x0) == 1;
            CHECK(local == unique_everywhere);

            std::size_t pos = 0;
            while (pos < n && ++choice[pos] == subsets.size()) choice[pos++] = 0;
            if (pos == n) break;
        }
    }
}

TEST_CASE("tensor is associative on triples of small systems") {
    const FiniteSpace e2 = FiniteSpace::range(2);
    SECTION("identity kind, exhaustive") {
        for (const auto& sa : all_functions(2, 2))
            for (const auto& sb : all_functions(2, 2))
                for (const auto& sc : all_functions(2, 2)) {
                    const Coalgebra a = endomap_system(e2, sa);
                    const Coalgebra b = endomap_system(e2, sb);
                    const Coalgebra c = endomap_system(e2, sc);
                    const Coalgebra left = tensor(tensor(a, b), c);
                    const Coalgebra right = tensor(a, tensor(b, c));
                    CHECK(left.dynamics == right.dynamics);
                }
    }
    SECTION("powerset kind, exhaustive") {
        const auto subsets = all_subsets(2);
        std::vector<Coalgebra> systems;
        for (const auto& s0 : subsets)
            for (const auto& s1 : subsets) {
                Coalgebra f{Endofunctor::powerset(), e2, {}};
                f.dynamics = {FValue{SetValue{s0}}, FValue{SetValue{s1}}};
                systems.push_back(std::move(f));
            }
        for (const auto& a : systems)
            for (const auto& b : systems)
                for (const auto& c : systems)
                    CHECK(tensor(tensor(a, b), c).dynamics == tensor(a, tensor(b, c)).dynamics);
    }
    SECTION("distribution kind, exhaustive at denominator 2") {
        std::vector<Coalgebra> systems;
        const auto dists = all_distributions(2, 2);
        for (const auto& d0 : dists)
            for (const auto& d1 : dists) {
                const auto to_value = [](const std::vector<Rat>& w) {
                    std::vector<std::pair<std::size_t, Rat>> mass;
                    for (std::size_t e = 0; e < w.size(); ++e)
                        if (w[e] > Rat(0)) mass.emplace_back(e, w[e]);
                    return DistValue{std::move(mass)};
                };
                Coalgebra f{Endofunctor::findist(), e2, {}};
                f.dynamics = {FValue{to_value(d0)}, FValue{to_value(d1)}};
                systems.push_back(std::move(f));
            }
        for (const auto& a : systems)
            for (const auto& b : systems)
                for (const auto& c : systems)
                    CHECK(tensor(tensor(a, b), c).dynamics == tensor(a, tensor(b, c)).dynamics);
    }
    SECTION("labeled kind, exhaustive on one-state spaces plus a seeded sample") {
        const Endofunctor lab = Endofunctor::labeled(FiniteSpace::range(2));
        const FiniteSpace e1 = FiniteSpace::range(1);
        std::vector<Coalgebra> small;
        for (const auto& s : all_subsets(2)) {
            Coalgebra f{lab, e1, {}};
            LabeledValue v;
            for (std::size_t label : s) v.edges.emplace_back(label, 0);
            f.dynamics = {FValue{std::move(v)}};
            small.push_back(std::move(f));
        }
        for (const auto& a : small)
            for (const auto& b : small)
                for (const auto& c : small)
                    CHECK(tensor(tensor(a, b), c).dynamics == tensor(a, tensor(b, c)).dynamics);

        std::mt19937_64 eng(13);
        std::vector<Coalgebra> sampled;
        for (int i = 0; i < 12; ++i) {
            Coalgebra f{lab, e2, {}};
            for (std::size_t x = 0; x < 2; ++x) {
                std::vector<std::pair<std::size_t, std::size_t>> edges;
                for (std::size_t label = 0; label < 2; ++label)
                    for (std::size_t y = 0; y < 2; ++y)
                        if (eng() % 2 == 0) edges.emplace_back(label, y);
                f.dynamics.push_back(make_labeled(std::move(edges)));
            }
            sampled.push_back(std::move(f));
        }
        for (const auto& a : sampled)
            for (const auto& b : sampled)
                for (const auto& c : sampled)
                    CHECK(tensor(tensor(a, b), c).dynamics == tensor(a, tensor(b, c)).dynamics);
    }
}
