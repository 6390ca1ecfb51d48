#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lyapcoalg/continuous.hpp"
#include "lyapcoalg/generators.hpp"
#include "lyapcoalg/lyapunov.hpp"
#include "lyapcoalg/settings.hpp"

namespace lyapcoalg {

// ---------------------------------------------------------------------------
// Self-test suites: the toolkit's theorems exercised at desk scale.
// ---------------------------------------------------------------------------

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace suites {

/// Integral and derivative are mutually inverse, exactly.
inline CriterionResult isomorphism(std::uint64_t seed) {
    CriterionResult r{1, "integral/derivative isomorphism", true, ""};
    Rng rng(seed);
    const TimeMonoid t = TimeMonoid::naturals(16);
    const UnitClock clock = make_unit_clock(Endofunctor::identity(), t);
    std::size_t checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        const FiniteSpace e = FiniteSpace::range(n);
        const auto step = random_endomap(rng, n);
        const Flow phi = Flow::from_step(t, e, step);
        const Coalgebra f = endomap_system(e, step);
        const Flow round = integral(derivative(phi, clock), clock);
        const bool flows_equal = round == phi && round.action_table() == phi.action_table();
        const bool systems_equal = derivative(integral(f, clock), clock) == f;
        if (!flows_equal || !systems_equal) {
            r.pass = false;
            r.detail = "mismatch at trial " + std::to_string(trial);
            return r;
        }
        ++checked;
    }
    r.detail = std::to_string(checked) + " seeded systems, exact on both round trips";
    return r;
}

/// A certified converse certificate forces a stable oracle verdict.
inline CriterionResult soundness(std::uint64_t seed) {
    CriterionResult r{2, "certificate soundness", true, ""};
    Rng rng(seed + 1);
    std::size_t certified = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        const DynamicSetting s = discrete_setting(n, n + 2);
        const auto step = random_endomap_fixing_zero(rng, n);
        const Coalgebra f = endomap_system(s.space, step);
        const Flow phi = Flow::from_step(s.time, s.space, step);
        const StateFunction v = converse_construct(phi, 0, s.metric);
        const CertificateReport report =
            certify(s, f, std::nullopt, 0, Certificate{v, std::nullopt, std::nullopt}, false);
        if (report.status != CertificateReport::Status::Certified) continue;
        ++certified;
        if (stability_oracle(phi, 0, s.metric, s.scale).status != Verdict::Status::Stable) {
            r.pass = false;
            r.detail = "certified but oracle-unstable at trial " + std::to_string(trial);
            return r;
        }
    }
    r.detail = "500 seeded systems, " + std::to_string(certified) +
               " certified, zero oracle disagreements";
    return r;
}

/// A stable verdict makes the orbit-supremum certificate pass every check.
inline CriterionResult converse(std::uint64_t seed) {
    CriterionResult r{3, "converse construction", true, ""};
    Rng rng(seed + 1);  // same corpus as the soundness suite
    std::size_t stable = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        const DynamicSetting s = discrete_setting(n, n + 2);
        const auto step = random_endomap_fixing_zero(rng, n);
        const Flow phi = Flow::from_step(s.time, s.space, step);
        if (stability_oracle(phi, 0, s.metric, s.scale).status != Verdict::Status::Stable)
            continue;
        ++stable;
        const StateFunction v = converse_construct(phi, 0, s.metric);
        const Coalgebra f = endomap_system(s.space, step);
        const bool pd = positive_definite_check(v, 0, s.metric, s.scale).pass;
        const bool flow_ok = flow_decrescent_check(v, phi);
        const bool sys_ok = system_decrescent_check(v, f, s);
        if (!pd || !flow_ok || !sys_ok) {
            r.pass = false;
            r.detail = "stable but certificate check failed at trial " + std::to_string(trial);
            return r;
        }
    }
    r.detail = "500 seeded systems, " + std::to_string(stable) +
               " stable, converse certificate passed everywhere";
    return r;
}

/// On endomaps the system-level lax square is exactly V(F(x)) <= V(x).
inline CriterionResult discrete_reduction(std::uint64_t) {
    CriterionResult r{4, "discrete reduction", true, ""};
    std::size_t cases = 0;
    for (std::size_t n : {3u, 4u}) {
        const DynamicSetting s = discrete_setting(n, 8);
        std::vector<StateFunction> candidates;
        // five fixed V tables: the norm, a constant, a step pattern, reversed,
        // and an indicator-style bump
        candidates.push_back(norm_to_point(s.metric, 0));
        candidates.push_back(StateFunction{std::vector<Rat>(n, Rat(1))});
        StateFunction stepped, reversed, bump;
        for (std::size_t i = 0; i < n; ++i) {
            stepped.values.emplace_back(static_cast<long long>(i / 2));
            reversed.values.emplace_back(static_cast<long long>(n - 1 - i));
            bump.values.emplace_back(i == 1 ? 2 : 0);
        }
        candidates.push_back(stepped);
        candidates.push_back(reversed);
        candidates.push_back(bump);

        for (const auto& step : all_functions(n, n)) {
            const Coalgebra f = endomap_system(s.space, step);
            for (const auto& v : candidates) {
                bool expected = true;
                for (std::size_t x = 0; x < n; ++x)
                    expected = expected && v.values[step[x]] <= v.values[x];
                if (system_decrescent_check(v, f, s) != expected) {
                    r.pass = false;
                    r.detail = "disagreement on an endomap of " + std::to_string(n) + " states";
                    return r;
                }
                ++cases;
            }
        }
    }
    r.detail = "all endomaps of 3- and 4-element spaces (27 + 256), 5 candidates each, " +
               std::to_string(cases) + " exact agreements";
    return r;
}

/// The behavior-system check coincides with the flow-level check.
inline CriterionResult behavioral_reduction(std::uint64_t seed) {
    CriterionResult r{5, "behavioral reduction", true, ""};
    Rng rng(seed + 2);
    std::size_t agreements = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        const DynamicSetting s = behavioral_setting(n, n + 2);
        const Flow phi = random_flow(rng, s.time, s.space);
        const Coalgebra behavior = behavior_lts(phi);
        for (int probe = 0; probe < 5; ++probe) {
            const StateFunction v = random_state_function(rng, n, s.scale);
            if (system_decrescent_check(v, behavior, s) != flow_decrescent_check(v, phi)) {
                r.pass = false;
                r.detail = "behavior and flow checks disagree at trial " + std::to_string(trial);
                return r;
            }
            ++agreements;
        }
    }
    r.detail = "100 seeded flows x 5 candidates, " + std::to_string(agreements) +
               " exact agreements";
    return r;
}

/// Exhaustive law suites at the stated sizes.
inline CriterionResult laws(std::uint64_t) {
    CriterionResult r{6, "monoidal law suites", true, ""};
    const MeasureScale scale({Rat(0), Rat(1), Rat(2), Rat(4)});
    EnumLimits limits;
    limits.dist_denominator = 4;
    const std::vector<std::pair<Endofunctor, std::size_t>> rows = {
        {Endofunctor::identity(), 4},
        {Endofunctor::powerset(), 3},
        {Endofunctor::labeled(FiniteSpace::range(2)), 3},
        {Endofunctor::findist(), 3},
    };
    for (const auto& [functor, size] : rows) {
        const LawReport report = check_monoidal_laws(functor, size, scale, limits);
        for (const char* law : {"laxator-associativity", "stationary-compatibility",
                                "unit-neutrality", "order-preservation"}) {
            const LawResult* res = report.find(law);
            if (!res || !res->pass) {
                r.pass = false;
                r.detail = std::string(law) + " failed: " + (res ? res->counterexample : "missing");
                return r;
            }
        }
    }
    r.detail = "identity<=4, powerset<=3, labeled(2)<=3, findist(den<=4)<=3 all exhaustive";
    return r;
}

/// The comparison implication on seeded curves, per bundled setting.
inline CriterionResult comparison(std::uint64_t seed) {
    CriterionResult r{7, "comparison implication", true, ""};
    std::string detail;
    for (int kind = 0; kind < 4; ++kind) {
        const DynamicSetting s = kind == 0   ? discrete_setting(5, 12)
                                 : kind == 1 ? graph_setting(5, 12)
                                 : kind == 2 ? behavioral_setting(5, 12)
                                             : markov_setting(5, 12);
        // 2000 plain curves: 1000 generated non-increasing, 1000 arbitrary
        const CurveReport report = comparison_lemma_check(s, 2000, seed + 7);
        if (!report.pass()) {
            r.pass = false;
            r.detail = "violation in setting kind " + std::to_string(kind) + ": " +
                       report.violations.front();
            return r;
        }
        detail += std::to_string(report.premise_held) + " held/" +
                  std::to_string(report.vacuous) + " vacuous; ";
    }
    r.detail = detail;
    return r;
}

/// The continuous desk checks: derivative sign, integrator accuracy, and
/// the discretized verdicts.
inline CriterionResult continuous_desk(std::uint64_t) {
    CriterionResult r{8, "continuous desk check", true, ""};
    const VectorField contracting = VectorField::parse({"-x1"});
    const VectorField expanding = VectorField::parse({"x1"});

    std::vector<std::vector<double>> samples;
    for (int i = 0; i <= 1000; ++i) samples.push_back({-2.0 + 4.0 * i / 1000.0});
    const double eps = 1e-5;
    const LieReport lie = lie_derivative_check(ScalarField::parse("x1^2"), contracting, samples,
                                               eps, default_lie_tolerance(eps));
    if (!lie.pass) {
        r.pass = false;
        r.detail = "derivative check failed at " + std::to_string(lie.worst_value);
        return r;
    }

    const SampledTrajectory t = rk4_integrate(contracting, {1.0}, 0.01, 100);
    const double endpoint_error = std::abs(t.points.back()[0] - std::exp(-1.0));
    if (endpoint_error >= 1e-6) {
        r.pass = false;
        r.detail = "integrator endpoint error " + std::to_string(endpoint_error);
        return r;
    }

    for (std::size_t cells : {5u, 9u, 17u}) {
        const auto verdict_for = [&](const VectorField& f) {
            const DiscretizedSystem d = discretize(f, {{-1.0, 1.0, cells}}, 1.0);
            const TimeMonoid time = TimeMonoid::naturals(d.space.size() + 2);
            const UnitClock clock = make_unit_clock(Endofunctor::identity(), time);
            const Flow phi = integral(d.system, clock);
            return stability_oracle(phi, cells / 2, d.metric, d.scale).status;
        };
        if (verdict_for(contracting) != Verdict::Status::Stable) {
            r.pass = false;
            r.detail = "contracting field not stable at " + std::to_string(cells) + " cells";
            return r;
        }
        if (verdict_for(expanding) != Verdict::Status::Unstable) {
            r.pass = false;
            r.detail = "expanding field not unstable at " + std::to_string(cells) + " cells";
            return r;
        }
    }
    char err_text[32];
    std::snprintf(err_text, sizeof(err_text), "%.2e", endpoint_error);
    r.detail = std::string("derivative<=tol at 1001 samples; endpoint error ") + err_text +
               "; grid verdicts correct at 5/9/17";
    return r;
}

/// The negative control: saturating doubling fails the certificate at x=1
/// and the oracle reports instability with the extension obstruction.
inline CriterionResult negative_control(std::uint64_t) {
    CriterionResult r{9, "negative control", true, ""};
    const DynamicSetting s = discrete_setting(8, 10);
    std::vector<std::size_t> step(8);
    for (std::size_t x = 0; x < 8; ++x) step[x] = std::min<std::size_t>(2 * x, 7);
    const Coalgebra f = endomap_system(s.space, step);
    const Flow phi = Flow::from_step(s.time, s.space, step);
    const StateFunction norm = norm_to_point(s.metric, 0);

    std::size_t witness = 99;
    if (system_decrescent_check(norm, f, s, &witness) || witness != 1) {
        r.pass = false;
        r.detail = "decrescent check did not fail at state 1";
        return r;
    }
    const Verdict v = stability_oracle(phi, 0, s.metric, s.scale);
    if (v.status != Verdict::Status::Unstable || v.counterexample != 1 ||
        v.obstruction.find("admits no strictly increasing bijective extension") ==
            std::string::npos) {
        r.pass = false;
        r.detail = "oracle verdict or obstruction missing";
        return r;
    }
    r.detail = "decrescent fails at x=1; oracle unstable with: " + v.obstruction;
    return r;
}

}  // namespace suites

inline std::vector<CriterionResult> run_acceptance_suites(std::uint64_t seed = 0) {
    return {
        suites::isomorphism(seed),       suites::soundness(seed),
        suites::converse(seed),          suites::discrete_reduction(seed),
        suites::behavioral_reduction(seed), suites::laws(seed),
        suites::comparison(seed),        suites::continuous_desk(seed),
        suites::negative_control(seed),
    };
}

}  // namespace lyapcoalg
