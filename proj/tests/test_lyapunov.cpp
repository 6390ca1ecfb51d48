#include <catch2/catch_amalgamated.hpp>

#include "lyapcoalg/generators.hpp"
#include "lyapcoalg/lyapunov.hpp"
#include "lyapcoalg/settings.hpp"

using namespace lyapcoalg;

namespace {

std::vector<std::size_t> halving_step() {
    std::vector<std::size_t> step(8);
    for (std::size_t x = 0; x < 8; ++x) step[x] = x / 2;
    return step;
}

std::vector<std::size_t> saturating_doubling_step() {
    std::vector<std::size_t> step(8);
    for (std::size_t x = 0; x < 8; ++x) step[x] = std::min<std::size_t>(2 * x, 7);
    return step;
}

}  // namespace

TEST_CASE("bundled settings validate") {
    LawSizes sizes;
    sizes.max_size = 2;
    sizes.curve_count = 60;
    CHECK(validate_setting(discrete_setting(4, 6), sizes).valid());
    CHECK(validate_setting(graph_setting(3, 6), sizes).valid());
    CHECK(validate_setting(behavioral_setting(3, 6), sizes).valid());
    CHECK(validate_setting(markov_setting(3, 6), sizes).valid());
}

TEST_CASE("a broken order table invalidates the setting with a witness") {
    DynamicSetting s = discrete_setting(3, 4);
    FOrder::ExplicitTable tbl;
    tbl.values = {FValue{IdValue{0}}, FValue{IdValue{1}}, FValue{IdValue{2}}};
    tbl.leq = {true, true, false, false, true, true, false, false, true};
    s.forder.table = tbl;
    const auto report = validate_setting(s, {});
    CHECK_FALSE(report.valid());
    bool witnessed = false;
    for (const auto& v : report.entries)
        if (v.clause == "order-transitivity" && !v.informational &&
            v.detail.find("triple") != std::string::npos)
            witnessed = true;
    CHECK(witnessed);
}

TEST_CASE("a clock that breaks the one-tick rule invalidates the setting") {
    DynamicSetting s = discrete_setting(3, 4);
    s.clock.system.dynamics[1] = IdValue{1};  // should advance to 2
    LawSizes sizes;
    sizes.max_size = 2;
    sizes.curve_count = 40;
    const auto report = validate_setting(s, sizes);
    CHECK_FALSE(report.valid());
    bool clock_flagged = false;
    for (const auto& v : report.entries)
        if (v.clause == "clock-rule" && !v.informational) clock_flagged = true;
    CHECK(clock_flagged);
}

TEST_CASE("certify rejects non-equilibria") {
    const DynamicSetting s = discrete_setting(8, 8);
    const StateFunction norm = norm_to_point(s.metric, 1);
    std::vector<std::size_t> step(8);
    for (std::size_t x = 0; x < 8; ++x) step[x] = x / 2;
    const Coalgebra f = endomap_system(s.space, step);
    const CertificateReport r =
        certify(s, f, std::nullopt, 1, Certificate{norm, std::nullopt, std::nullopt}, false);
    CHECK(r.status == CertificateReport::Status::Rejected);
    bool equilibrium_failed = false;
    for (const auto& c : r.checks)
        if (c.check == "equilibrium-system" && !c.pass) equilibrium_failed = true;
    CHECK(equilibrium_failed);
}

TEST_CASE("a non-stationary stable system is rejected only under the converse flags") {
    DynamicSetting s = discrete_setting(3, 4);
    // sigma collapsing everything to 0 still makes the comparison lemma hold
    std::vector<std::size_t> to_zero(s.scale.size(), 0);
    s.stable = endomap_system(scale_space(s.scale), to_zero);

    LawSizes sizes;
    sizes.max_size = 2;
    sizes.curve_count = 40;
    CHECK_FALSE(validate_setting(s, sizes).valid());
    s.converse = false;
    CHECK(validate_setting(s, sizes).valid());
}

TEST_CASE("positive definiteness") {
    const DynamicSetting s = discrete_setting(8, 8);
    const StateFunction norm = norm_to_point(s.metric, 0);

    SECTION("the norm itself is positive definite with identity bounds") {
        const PDReport r = positive_definite_check(norm, 0, s.metric, s.scale);
        REQUIRE(r.pass);
        CHECK(r.lower == ClassK::identity(s.scale.size()));
        CHECK(r.upper == ClassK::identity(s.scale.size()));
    }
    SECTION("explicit identity bounds verify pointwise") {
        const ClassK id = ClassK::identity(s.scale.size());
        CHECK(positive_definite_check(norm, 0, s.metric, s.scale, id, id).pass);
    }
    SECTION("a non-bijective doubling bound is rejected") {
        // 0->0, 1->2, 2->4, ... saturating at the top is not a permutation
        ClassK doubling;
        for (std::size_t i = 0; i < s.scale.size(); ++i)
            doubling.perm.push_back(std::min(2 * i, s.scale.size() - 1));
        const PDReport r =
            positive_definite_check(norm, 0, s.metric, s.scale, ClassK::identity(8), doubling);
        CHECK_FALSE(r.pass);
        CHECK(r.obstruction.find("class-K") != std::string::npos);
    }
    SECTION("vanishing away from the base point is an obstruction") {
        StateFunction v = norm;
        v.values[3] = Rat(0);
        const PDReport r = positive_definite_check(v, 0, s.metric, s.scale);
        CHECK_FALSE(r.pass);
        CHECK(r.obstruction.find("no class-K automorphism fits below") != std::string::npos);
    }
    SECTION("values above the norm obstruct the upper bound") {
        StateFunction v = norm;
        v.values[1] = Rat(7);
        const PDReport r = positive_definite_check(v, 0, s.metric, s.scale);
        CHECK_FALSE(r.pass);
        CHECK(r.obstruction ==
              "envelope(1)=7 admits no strictly increasing bijective extension");
    }
    SECTION("a single supplied bound is verified and the other is searched") {
        const ClassK id = ClassK::identity(s.scale.size());
        const PDReport upper_only =
            positive_definite_check(norm, 0, s.metric, s.scale, std::nullopt, id);
        CHECK(upper_only.pass);
        CHECK(upper_only.lower == id);

        StateFunction too_big = norm;
        too_big.values[2] = Rat(5);
        const PDReport reject =
            positive_definite_check(too_big, 0, s.metric, s.scale, std::nullopt, id);
        CHECK_FALSE(reject.pass);
        CHECK(reject.obstruction.find("upper bound fails") != std::string::npos);

        const PDReport lower_only =
            positive_definite_check(norm, 0, s.metric, s.scale, id, std::nullopt);
        CHECK(lower_only.pass);
        CHECK(lower_only.upper == id);
    }
}

TEST_CASE("flow decrescent check") {
    const TimeMonoid t = TimeMonoid::naturals(8);
    const FiniteSpace e = FiniteSpace::range(8);
    const DynamicSetting s = discrete_setting(8, 8);
    const StateFunction norm = norm_to_point(s.metric, 0);

    CHECK(flow_decrescent_check(norm, Flow::from_step(t, e, halving_step())));
    std::vector<std::size_t> ident(8);
    for (std::size_t i = 0; i < 8; ++i) ident[i] = i;
    CHECK(flow_decrescent_check(norm, Flow::from_step(t, e, ident)));

    std::size_t witness = 99;
    CHECK_FALSE(flow_decrescent_check(norm, Flow::from_step(t, e, saturating_doubling_step()),
                                      &witness));
    CHECK(witness == 1);
}

TEST_CASE("system decrescent check reduces to the expected inequality per kind") {
    SECTION("identity kind: V(F(x)) <= V(x)") {
        const DynamicSetting s = discrete_setting(8, 8);
        const StateFunction norm = norm_to_point(s.metric, 0);
        CHECK(system_decrescent_check(norm, endomap_system(s.space, halving_step()), s));
        std::size_t witness = 99;
        CHECK_FALSE(system_decrescent_check(
            norm, endomap_system(s.space, saturating_doubling_step()), s, &witness));
        CHECK(witness == 1);
    }
    SECTION("behavior kind: V(phi(t, x)) <= V(x) for all t") {
        const DynamicSetting s = behavioral_setting(8, 8);
        const StateFunction norm = norm_to_point(s.metric, 0);
        const Flow halving = Flow::from_step(s.time, s.space, halving_step());
        const Flow doubling = Flow::from_step(s.time, s.space, saturating_doubling_step());
        CHECK(system_decrescent_check(norm, behavior_lts(halving), s));
        CHECK_FALSE(system_decrescent_check(norm, behavior_lts(doubling), s));
        CHECK(system_decrescent_check(norm, behavior_lts(halving), s) ==
              flow_decrescent_check(norm, halving));
    }
    SECTION("stationary dynamics against stationary sigma holds for every V") {
        for (std::size_t kind = 0; kind < 4; ++kind) {
            DynamicSetting s = kind == 0   ? discrete_setting(4, 4)
                               : kind == 1 ? graph_setting(4, 4)
                               : kind == 2 ? behavioral_setting(4, 4)
                                           : markov_setting(4, 4);
            Rng rng(kind);
            for (int trial = 0; trial < 10; ++trial) {
                const StateFunction v = random_state_function(rng, 4, s.scale);
                CHECK(system_decrescent_check(v, stationary_system(s.functor, s.space), s));
            }
        }
    }
    SECTION("markov kind: mass may only move toward smaller V") {
        const DynamicSetting s = markov_setting(4, 6);
        const StateFunction norm = norm_to_point(s.metric, 0);
        Coalgebra down{Endofunctor::findist(), s.space, {}};
        down.dynamics = {FValue{dirac(0)}, FValue{make_dist({{0, Rat(1, 2)}, {1, Rat(1, 2)}})},
                         FValue{dirac(1)}, FValue{make_dist({{0, Rat(1, 4)}, {3, Rat(3, 4)}})}};
        CHECK(system_decrescent_check(norm, down, s));
        Coalgebra up = down;
        up.dynamics[1] = FValue{make_dist({{1, Rat(1, 2)}, {2, Rat(1, 2)}})};
        CHECK_FALSE(system_decrescent_check(norm, up, s));
    }
}

TEST_CASE("comparison lemma holds on seeded curves for all bundled settings") {
    for (std::size_t kind = 0; kind < 4; ++kind) {
        const DynamicSetting s = kind == 0   ? discrete_setting(5, 8)
                                 : kind == 1 ? graph_setting(5, 8)
                                 : kind == 2 ? behavioral_setting(5, 8)
                                             : markov_setting(5, 8);
        const CurveReport r = comparison_lemma_check(s, 300, 42);
        CHECK(r.pass());
        CHECK(r.premise_held > 0);
        CHECK(r.vacuous > 0);
        CHECK(r.curves == 600);  // plain plus parameterized
    }
}

TEST_CASE("stability oracle") {
    const DynamicSetting s = discrete_setting(8, 8);

    SECTION("halving is stable with the identity witness") {
        const Flow phi = Flow::from_step(s.time, s.space, halving_step());
        const Verdict v = stability_oracle(phi, 0, s.metric, s.scale);
        REQUIRE(v.status == Verdict::Status::Stable);
        CHECK(v.witness == ClassK::identity(s.scale.size()));
    }
    SECTION("stable witnesses validate and satisfy the bound they promise") {
        Rng rng(808);
        std::size_t stable_seen = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 2 + rng.below(7);
            const DynamicSetting sn = discrete_setting(n, n + 2);
            std::vector<std::size_t> step(n);
            const bool downward = trial % 2 == 0;
            for (std::size_t x = 0; x < n; ++x)
                step[x] = downward ? rng.below(x + 1) : rng.below(n);
            step[0] = 0;
            const Flow phi = Flow::from_step(sn.time, sn.space, step);
            const StateFunction norm = norm_to_point(sn.metric, 0);
            const Verdict v = stability_oracle(phi, 0, sn.metric, sn.scale);
            if (v.status != Verdict::Status::Stable) continue;
            ++stable_seen;
            REQUIRE(v.witness.has_value());
            CHECK(classk_validate(*v.witness, sn.scale));
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t k = 0; k < 3 * n; ++k)
                    CHECK(norm.values[phi.at(k, x)] <=
                          v.witness->apply(sn.scale, norm.values[x]));
        }
        CHECK(stable_seen > 20);
    }
    SECTION("the identity flow is stable") {
        std::vector<std::size_t> ident(8);
        for (std::size_t i = 0; i < 8; ++i) ident[i] = i;
        const Flow phi = Flow::from_step(s.time, s.space, ident);
        CHECK(stability_oracle(phi, 0, s.metric, s.scale).status == Verdict::Status::Stable);
    }
    SECTION("saturating doubling is unstable with the extension obstruction") {
        const Flow phi = Flow::from_step(s.time, s.space, saturating_doubling_step());
        const Verdict v = stability_oracle(phi, 0, s.metric, s.scale);
        REQUIRE(v.status == Verdict::Status::Unstable);
        CHECK(v.obstruction ==
              "envelope(1)=7 admits no strictly increasing bijective extension");
        CHECK(v.counterexample == 1);
    }
    SECTION("non-equilibria are refused") {
        const Flow phi = Flow::from_step(s.time, s.space, saturating_doubling_step());
        CHECK_THROWS_AS(stability_oracle(phi, 1, s.metric, s.scale), input_error);
    }
}

TEST_CASE("converse construction") {
    const DynamicSetting s = discrete_setting(8, 8);
    const StateFunction norm = norm_to_point(s.metric, 0);

    SECTION("halving: orbit maxima reproduce the norm") {
        const Flow phi = Flow::from_step(s.time, s.space, halving_step());
        CHECK(converse_construct(phi, 0, s.metric) == norm);
    }
    SECTION("identity flow: the norm") {
        std::vector<std::size_t> ident(8);
        for (std::size_t i = 0; i < 8; ++i) ident[i] = i;
        const Flow phi = Flow::from_step(s.time, s.space, ident);
        CHECK(converse_construct(phi, 0, s.metric) == norm);
    }
    SECTION("swap orbit takes the max over the cycle") {
        // states {0,1,2}: fix 0, swap 1 and 2
        const DynamicSetting s3 = discrete_setting(3, 6);
        const Flow phi = Flow::from_step(s3.time, s3.space, {0, 2, 1});
        const StateFunction v = converse_construct(phi, 0, s3.metric);
        CHECK(v.values == std::vector<Rat>{Rat(0), Rat(2), Rat(2)});
    }
}

TEST_CASE("certification pipeline") {
    const DynamicSetting s = discrete_setting(8, 8);
    const StateFunction norm = norm_to_point(s.metric, 0);

    SECTION("halving with the norm certificate, oracle concurs") {
        const Coalgebra f = endomap_system(s.space, halving_step());
        const CertificateReport r =
            certify(s, f, std::nullopt, 0, Certificate{norm, std::nullopt, std::nullopt}, true);
        CHECK(r.status == CertificateReport::Status::Certified);
        REQUIRE(r.oracle.has_value());
        CHECK(r.oracle->status == Verdict::Status::Stable);
        for (const auto& c : r.checks) CHECK(c.pass);
    }
    SECTION("saturating doubling: decrescent fails at 1 and the oracle is unstable") {
        const Coalgebra f = endomap_system(s.space, saturating_doubling_step());
        const CertificateReport r =
            certify(s, f, std::nullopt, 0, Certificate{norm, std::nullopt, std::nullopt}, true);
        CHECK(r.status == CertificateReport::Status::Rejected);
        bool decrescent_failed_at_1 = false;
        for (const auto& c : r.checks)
            if (c.check == "decrescent-system" && !c.pass &&
                c.detail.find("state 1") != std::string::npos)
                decrescent_failed_at_1 = true;
        CHECK(decrescent_failed_at_1);
        REQUIRE(r.oracle.has_value());
        CHECK(r.oracle->status == Verdict::Status::Unstable);
    }
    SECTION("rejected certificate leaves stability undetermined; the synthesized one passes") {
        // stable system, but the candidate V vanishes away from the base point
        const Coalgebra f = endomap_system(s.space, halving_step());
        StateFunction bad = norm;
        bad.values[3] = Rat(0);
        const CertificateReport rejected =
            certify(s, f, std::nullopt, 0, Certificate{bad, std::nullopt, std::nullopt}, false);
        CHECK(rejected.status == CertificateReport::Status::Rejected);
        CHECK(rejected.summary == "certificate rejected, stability undetermined");

        const CertificateReport second = certify(s, f, std::nullopt, 0, std::nullopt, true);
        CHECK(second.certificate_synthesized);
        CHECK(second.status == CertificateReport::Status::Certified);
    }
    SECTION("a flow incompatible with the system is refused") {
        const Coalgebra f = endomap_system(s.space, halving_step());
        const Flow other = Flow::from_step(s.time, s.space, saturating_doubling_step());
        const CertificateReport r =
            certify(s, f, other, 0, Certificate{norm, std::nullopt, std::nullopt}, false);
        CHECK(r.status == CertificateReport::Status::Refused);
    }
    SECTION("a compatible system/flow pair runs both check families") {
        const Coalgebra f = endomap_system(s.space, halving_step());
        const Flow phi = Flow::from_step(s.time, s.space, halving_step());
        const CertificateReport r =
            certify(s, f, phi, 0, Certificate{norm, std::nullopt, std::nullopt}, true);
        CHECK(r.status == CertificateReport::Status::Certified);
        bool saw_system = false, saw_flow = false;
        for (const auto& c : r.checks) {
            saw_system = saw_system || c.check == "decrescent-system";
            saw_flow = saw_flow || c.check == "decrescent-flow";
        }
        CHECK(saw_system);
        CHECK(saw_flow);
    }
    SECTION("incomplete systems cannot synthesize certificates") {
        const DynamicSetting gs = graph_setting(2, 4);
        Coalgebra g{Endofunctor::powerset(), gs.space, {}};
        g.dynamics = {FValue{make_set({0})}, FValue{make_set({0, 1})}};
        CHECK_THROWS_AS(certify(gs, g, std::nullopt, 0, std::nullopt, false),
                        incomplete_system_error);
    }
}

TEST_CASE("soundness and converse on a seeded corpus") {
    Rng rng(2024);
    std::size_t certified = 0, stable = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        const DynamicSetting s = discrete_setting(n, n + 2);
        const auto step = random_endomap_fixing_zero(rng, n);
        const Flow phi = Flow::from_step(s.time, s.space, step);
        const Coalgebra f = endomap_system(s.space, step);
        const Verdict verdict = stability_oracle(phi, 0, s.metric, s.scale);
        const StateFunction v = converse_construct(phi, 0, s.metric);

        // soundness: a certified converse certificate forces a stable verdict
        const CertificateReport r =
            certify(s, f, std::nullopt, 0, Certificate{v, std::nullopt, std::nullopt}, false);
        if (r.status == CertificateReport::Status::Certified) {
            ++certified;
            CHECK(verdict.status == Verdict::Status::Stable);
        }
        // converse: a stable verdict makes the constructed certificate pass everything
        if (verdict.status == Verdict::Status::Stable) {
            ++stable;
            CHECK(positive_definite_check(v, 0, s.metric, s.scale).pass);
            CHECK(flow_decrescent_check(v, phi));
            CHECK(system_decrescent_check(v, f, s));
        }
    }
    CHECK(certified > 0);
    CHECK(stable > 0);
    CHECK(certified == stable);  // on this corpus the two theorems are exact inverses
}

TEST_CASE("decrescent certificates are monotone along every orbit") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.below(6);
        const DynamicSetting s = discrete_setting(n, n + 2);
        const Flow phi = random_flow(rng, s.time, s.space);
        const StateFunction v = random_state_function(rng, n, s.scale);
        if (!flow_decrescent_check(v, phi)) continue;
        for (std::size_t x = 0; x < n; ++x) {
            Rat prev = v.values[x];
            for (std::size_t k = 1; k < 3 * n; ++k) {
                const Rat cur = v.values[phi.at(k, x)];
                CHECK(cur <= prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("class-K rescaling changes neither verdict") {
    // the only automorphism of a finite chain is the identity, so rescaling
    // is the identity; both checks must literally agree after composing
    const DynamicSetting s = discrete_setting(8, 8);
    const StateFunction norm = norm_to_point(s.metric, 0);
    const ClassK alpha = ClassK::identity(s.scale.size());
    REQUIRE(classk_validate(alpha, s.scale));

    StateFunction rescaled;
    for (const Rat& v : norm.values) rescaled.values.push_back(alpha.apply(s.scale, v));

    const Flow halving = Flow::from_step(s.time, s.space, halving_step());
    CHECK(positive_definite_check(rescaled, 0, s.metric, s.scale).pass ==
          positive_definite_check(norm, 0, s.metric, s.scale).pass);
    CHECK(flow_decrescent_check(rescaled, halving) == flow_decrescent_check(norm, halving));
}

TEST_CASE("equilibria transfer between a flow and its derivative") {
    Rng rng(4242);
    const TimeMonoid t = TimeMonoid::naturals(8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        const Flow phi = random_flow(rng, t, FiniteSpace::range(n));
        for (const Endofunctor& f :
             {Endofunctor::identity(), Endofunctor::powerset(), Endofunctor::findist(),
              Endofunctor::labeled(t.carrier_space())}) {
            const Coalgebra d = derivative(phi, make_unit_clock(f, t));
            for (std::size_t x = 0; x < n; ++x)
                CHECK(equilibrium_check(x, phi) == equilibrium_check_sys(x, d));
        }
    }
}

TEST_CASE("decrescent transfers both ways across the integral") {
    // one direction is the trajectory statement, the other is the converse
    // transfer; on complete systems they meet in an equivalence
    Rng rng(515);
    const TimeMonoid t = TimeMonoid::naturals(10);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 2 + rng.below(6);
        const DynamicSetting s = discrete_setting(n, 10);
        const auto step = random_endomap(rng, n);
        const Coalgebra f = endomap_system(s.space, step);
        const Flow phi = integral(f, s.clock);
        const StateFunction v = random_state_function(rng, n, s.scale);
        CHECK(system_decrescent_check(v, f, s) == flow_decrescent_check(v, phi));
    }
    // behavior form of the same equivalence
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng.below(6);
        const DynamicSetting s = behavioral_setting(n, n + 2);
        const Flow phi = random_flow(rng, s.time, s.space);
        const StateFunction v = random_state_function(rng, n, s.scale);
        CHECK(system_decrescent_check(v, behavior_lts(phi), s) ==
              flow_decrescent_check(v, phi));
    }
}

TEST_CASE("trajectory-level implication: system decrescent forces flow decrescent") {
    Rng rng(31337);
    const TimeMonoid t = TimeMonoid::naturals(10);
    std::size_t implications = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 2 + rng.below(6);
        const DynamicSetting s = discrete_setting(n, 10);
        const auto step = random_endomap(rng, n);
        const Coalgebra f = endomap_system(s.space, step);
        const StateFunction v = random_state_function(rng, n, s.scale);
        if (!system_decrescent_check(v, f, s)) continue;
        ++implications;
        CHECK(flow_decrescent_check(v, integral(f, make_unit_clock(s.functor, t))));
    }
    CHECK(implications > 0);
}
