#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lyapcoalg/core.hpp"
#include "lyapcoalg/flows.hpp"
#include "lyapcoalg/functors.hpp"
#include "lyapcoalg/systems.hpp"

namespace lyapcoalg {

// ---------------------------------------------------------------------------
// Settings
// ---------------------------------------------------------------------------

/// Everything a stability question is asked against: the base data (time,
/// space, scale, metric), the clock, the stable system on the scale, and the
/// order on functor values. The flags say which law families the setting
/// claims, and the validator holds it to them.
struct DynamicSetting {
    TimeMonoid time;
    FiniteSpace space;
    MeasureScale scale;
    Metric metric;
    Endofunctor functor;
    UnitClock clock;
    Coalgebra stable;  // sigma, a system on the scale carrier
    FOrder forder;
    bool monoidal = true;
    bool converse = true;
};

struct LawSizes {
    std::size_t max_size = 3;
    long long dist_denominator = 4;
    std::size_t curve_count = 200;
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Comparison lemma
// ---------------------------------------------------------------------------

struct CurveReport {
    std::size_t curves = 0;
    std::size_t premise_held = 0;
    std::size_t vacuous = 0;
    std::vector<std::string> violations;

    bool pass() const { return violations.empty(); }
};

namespace detail {

/// Deterministic across platforms: raw engine output reduced by modulus.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::size_t below(std::size_t n) { return n == 0 ? 0 : eng() % n; }
};

inline std::vector<std::size_t> scale_index_map(const StateFunction& v,
                                                const MeasureScale& scale) {
    std::vector<std::size_t> out;
    out.reserve(v.values.size());
    for (const Rat& r : v.values) {
        const auto idx = scale.index_of(r);
        if (!idx) throw input_error("value outside scale: " + rat_to_string(r));
        out.push_back(*idx);
    }
    return out;
}

}  // namespace detail

/// Checks the comparison implication on generated curves: whenever a curve
/// satisfies the lax square against the clock and the stable system, its
/// values stay below the initial one. Curves that fail the premise count as
/// vacuous. With the monoidal flag set, parameterized curves on T x A are
/// checked against the free system as well.
inline CurveReport comparison_lemma_check(const DynamicSetting& s, std::size_t curve_count,
                                          std::uint64_t seed) {
    CurveReport report;
    detail::Rng rng(seed);
    const std::size_t ticks = s.time.size();
    const std::size_t n_scale = s.scale.size();

    const auto premise_holds = [&](const std::vector<std::size_t>& gamma) {
        for (std::size_t t = 0; t < ticks; ++t) {
            if (!s.clock.system.defined(t)) continue;
            const FValue lhs = fmap(s.functor, gamma, s.clock.system.at(t));
            if (!fvalue_leq(s.forder, lhs, s.stable.at(gamma[t]))) return false;
        }
        return true;
    };

    for (std::size_t i = 0; i < curve_count; ++i) {
        std::vector<std::size_t> gamma(ticks);
        if (i % 2 == 0) {
            // non-increasing curve
            std::size_t level = rng.below(n_scale);
            for (std::size_t t = 0; t < ticks; ++t) {
                gamma[t] = level;
                if (level > 0 && rng.below(3) == 0) --level;
            }
        } else {
            for (std::size_t t = 0; t < ticks; ++t) gamma[t] = rng.below(n_scale);
        }
        ++report.curves;
        if (!premise_holds(gamma)) {
            ++report.vacuous;
            continue;
        }
        ++report.premise_held;
        for (std::size_t t = 0; t < ticks; ++t)
            if (gamma[t] > gamma[0]) {
                report.violations.push_back("curve #" + std::to_string(i) + " rises above its "
                                            "initial value at tick " + std::to_string(t));
                break;
            }
    }

    if (s.monoidal) {
        // parameterized curves on T x A, |A| = 2
        const FiniteSpace a = FiniteSpace::range(2);
        const Coalgebra l_a = free_system(s.clock, a);
        const std::size_t states = ticks * a.size();
        for (std::size_t i = 0; i < curve_count; ++i) {
            std::vector<std::size_t> gamma(states);
            if (i % 2 == 0) {
                for (std::size_t p = 0; p < a.size(); ++p) {
                    std::size_t level = rng.below(n_scale);
                    for (std::size_t t = 0; t < ticks; ++t) {
                        gamma[pair_index(t, p, a.size())] = level;
                        if (level > 0 && rng.below(3) == 0) --level;
                    }
                }
            } else {
                for (auto& g : gamma) g = rng.below(n_scale);
            }
            ++report.curves;
            bool premise = true;
            for (std::size_t p = 0; p < states && premise; ++p) {
                if (!l_a.defined(p)) continue;
                const FValue lhs = fmap(s.functor, gamma, l_a.at(p));
                premise = fvalue_leq(s.forder, lhs, s.stable.at(gamma[p]));
            }
            if (!premise) {
                ++report.vacuous;
                continue;
            }
            ++report.premise_held;
            bool ok = true;
            for (std::size_t t = 0; t < ticks && ok; ++t)
                for (std::size_t p = 0; p < a.size(); ++p)
                    if (gamma[pair_index(t, p, a.size())] > gamma[pair_index(0, p, a.size())]) {
                        report.violations.push_back("parameterized curve #" + std::to_string(i) +
                                                    " rises at tick " + std::to_string(t));
                        ok = false;
                        break;
                    }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Setting validation
// ---------------------------------------------------------------------------

inline ValidationReport validate_setting(const DynamicSetting& s, const LawSizes& sizes = {}) {
    ValidationReport report;
    report.merge(metric_validate(s.metric, s.space, s.scale));
    report.merge(monoid_laws(s.time));

    // clock matches the declared rule for its functor kind
    try {
        const UnitClock expected = make_unit_clock(s.functor, s.time);
        if (!(expected.system == s.clock.system))
            report.fail("clock-rule", "clock does not follow the one-tick rule");
    } catch (const input_error& e) {
        report.fail("clock-rule", e.what());
    }
    if (!clock_monoid_compatible(s.clock))
        report.fail("clock-monoid-compatibility",
                    "addition is not a morphism into the clock");

    // stable system
    if (s.stable.space.size() != s.scale.size())
        report.fail("stable-system", "sigma is not a system on the scale carrier");
    else {
        try {
            s.stable.validate();
        } catch (const input_error& e) {
            report.fail("stable-system", e.what());
        }
        if (s.converse && !(s.stable == stationary_system(s.functor, scale_space(s.scale))))
            report.fail("stable-system",
                        "converse toolkit requires the standing-still system on the scale");
    }
    if (s.converse &&
        !is_T_complete(stationary_system(s.functor, FiniteSpace::range(1))).complete)
        report.fail("unit-stationary-completeness",
                    "the standing-still system on the one-point space must determine unique "
                    "trajectories");

    // order laws
    EnumLimits limits;
    limits.dist_denominator = sizes.dist_denominator;
    report.merge(forder_laws(s.forder, limits));

    // monoidal law suite (representative label set when the real one is big)
    if (s.monoidal) {
        Endofunctor law_functor = s.functor;
        if (s.functor.kind == Endofunctor::Kind::Labeled && s.functor.labels.size() > 4) {
            law_functor = Endofunctor::labeled(FiniteSpace::range(2));
            report.note("law-suite",
                        "label set too large for exhaustive enumeration; laws checked with a "
                        "representative 2-element label set");
        }
        const LawReport laws = check_monoidal_laws(law_functor, sizes.max_size, s.scale, limits);
        for (const auto& law : laws.laws) {
            if (!s.converse && (law.law == "unit-neutrality" || law.law == "order-preservation"))
                continue;
            if (!law.pass)
                report.fail("law-" + law.law, law.counterexample);
        }
    }

    report.merge([&] {
        ValidationReport r;
        const CurveReport curves = comparison_lemma_check(s, sizes.curve_count, sizes.seed);
        for (const auto& v : curves.violations) r.fail("comparison-implication", v);
        r.note("comparison-implication",
               std::to_string(curves.premise_held) + " premised curves held, " +
                   std::to_string(curves.vacuous) + " vacuous");
        return r;
    }());

    report.note("pointwise-order", "orders on functions are stored pointwise, so the pointwise "
                                   "induction hypothesis holds by construction");
    report.note("suprema", "suprema are taken in the finite chain of scale values");
    return report;
}

// ---------------------------------------------------------------------------
// Class-K envelope completion
// ---------------------------------------------------------------------------

namespace detail {

/// Greedy completion of a strictly increasing scale bijection fixing 0 that
/// dominates the given per-index floors (ties to the smallest available
/// value). On a finite chain the witness is the identity whenever one
/// exists; the first floor above the diagonal is the obstruction.
inline std::optional<ClassK> classk_above(const MeasureScale& scale,
                                          const std::map<std::size_t, std::size_t>& floors,
                                          std::string* obstruction) {
    for (const auto& [r, v] : floors) {
        if (v > r) {
            if (obstruction)
                *obstruction = "envelope(" + pretty_rat(scale.values[r]) + ")=" +
                               pretty_rat(scale.values[v]) +
                               " admits no strictly increasing bijective extension";
            return std::nullopt;
        }
    }
    ClassK alpha = ClassK::identity(scale.size());
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < scale.size(); ++i) {
        const auto it = floors.find(i);
        const std::size_t need = it == floors.end() ? 0 : it->second;
        cursor = std::max(i == 0 ? std::size_t{0} : cursor + 1, need);
        alpha.perm[i] = cursor;
    }
    return alpha;
}

/// Mirror image: a strictly increasing bijection staying below per-index
/// ceilings.
inline std::optional<ClassK> classk_below(const MeasureScale& scale,
                                          const std::map<std::size_t, std::size_t>& ceilings,
                                          std::string* obstruction) {
    for (const auto& [r, v] : ceilings) {
        if (v < r) {
            if (obstruction)
                *obstruction = "lower envelope at norm " + pretty_rat(scale.values[r]) + " is " +
                               pretty_rat(scale.values[v]) +
                               "; no class-K automorphism fits below it";
            return std::nullopt;
        }
    }
    return ClassK::identity(scale.size());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

struct Certificate {
    StateFunction v;
    std::optional<ClassK> lower;
    std::optional<ClassK> upper;
};

struct PDReport {
    bool pass = false;
    std::optional<ClassK> lower;
    std::optional<ClassK> upper;
    std::string obstruction;
};

/// Positive definiteness of V with respect to x*: a class-K sandwich around
/// the norm. Given bounds are validated and checked pointwise; otherwise the
/// tightest envelopes of V as a function of the norm are completed to
/// class-K automorphisms, or the obstruction is reported.
inline PDReport positive_definite_check(const StateFunction& v, std::size_t xstar,
                                        const Metric& d, const MeasureScale& scale,
                                        const std::optional<ClassK>& lower = std::nullopt,
                                        const std::optional<ClassK>& upper = std::nullopt) {
    PDReport report;
    const StateFunction norm = norm_to_point(d, xstar);
    const auto norm_idx = detail::scale_index_map(norm, scale);
    const auto v_idx = detail::scale_index_map(v, scale);

    // given bounds are verified pointwise; a missing side is searched from
    // the tightest monotone envelope of V as a function of the norm
    if (upper) {
        if (!classk_validate(*upper, scale)) {
            report.obstruction = "supplied bound is not a class-K automorphism of the scale";
            return report;
        }
        for (std::size_t x = 0; x < v_idx.size(); ++x)
            if (v_idx[x] > upper->perm[norm_idx[x]]) {
                report.obstruction = "upper bound fails at state #" + std::to_string(x);
                return report;
            }
        report.upper = upper;
    } else {
        std::map<std::size_t, std::size_t> envelope;  // norm index -> max V index
        for (std::size_t x = 0; x < v_idx.size(); ++x) {
            const auto [it, fresh] = envelope.emplace(norm_idx[x], v_idx[x]);
            if (!fresh) it->second = std::max(it->second, v_idx[x]);
        }
        std::size_t running = 0;
        for (auto& [r, v_val] : envelope) {
            running = std::max(running, v_val);
            v_val = running;
        }
        std::string obstruction;
        report.upper = detail::classk_above(scale, envelope, &obstruction);
        if (!report.upper) {
            report.obstruction = obstruction;
            return report;
        }
    }

    if (lower) {
        if (!classk_validate(*lower, scale)) {
            report.obstruction = "supplied bound is not a class-K automorphism of the scale";
            return report;
        }
        for (std::size_t x = 0; x < v_idx.size(); ++x)
            if (lower->perm[norm_idx[x]] > v_idx[x]) {
                report.obstruction = "lower bound fails at state #" + std::to_string(x);
                return report;
            }
        report.lower = lower;
    } else {
        std::map<std::size_t, std::size_t> envelope;  // norm index -> min V index
        for (std::size_t x = 0; x < v_idx.size(); ++x) {
            const auto [it, fresh] = envelope.emplace(norm_idx[x], v_idx[x]);
            if (!fresh) it->second = std::min(it->second, v_idx[x]);
        }
        std::string obstruction;
        report.lower = detail::classk_below(scale, envelope, &obstruction);
        if (!report.lower) {
            report.obstruction = obstruction;
            return report;
        }
    }

    report.pass = true;
    return report;
}

/// V never increases along the flow, decided exactly from orbits.
inline bool flow_decrescent_check(const StateFunction& v, const Flow& phi,
                                  std::size_t* witness = nullptr) {
    for (std::size_t x = 0; x < phi.space.size(); ++x)
        for (std::size_t y : phi.orbits[x].visited())
            if (v.values[y] > v.values[x]) {
                if (witness) *witness = x;
                return false;
            }
    return true;
}

/// The lax square at the system level: the functor image of V applied to
/// the dynamics stays below the stable system applied to V.
inline bool system_decrescent_check(const StateFunction& v, const Coalgebra& f,
                                    const DynamicSetting& s, std::size_t* witness = nullptr) {
    const auto v_idx = detail::scale_index_map(v, s.scale);
    for (std::size_t x = 0; x < f.space.size(); ++x) {
        if (!f.defined(x)) continue;
        const FValue lhs = fmap(f.functor, v_idx, f.at(x));
        if (!fvalue_leq(s.forder, lhs, s.stable.at(v_idx[x]))) {
            if (witness) *witness = x;
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Stability oracle and converse construction
// ---------------------------------------------------------------------------

struct Verdict {
    enum class Status { Stable, Unstable, Unknown };

    Status status = Status::Unknown;
    std::optional<ClassK> witness;
    std::optional<std::size_t> counterexample;
    std::string obstruction;
};

/// Decides stability outright: the exact supremum of the norm along every
/// orbit, folded into a monotone envelope over the norm, either completes to
/// a class-K bound or pins an obstructing state.
inline Verdict stability_oracle(const Flow& phi, std::size_t xstar, const Metric& d,
                                const MeasureScale& scale) {
    if (!equilibrium_check(xstar, phi))
        throw input_error("stability oracle requires an equilibrium point");
    const StateFunction norm = norm_to_point(d, xstar);
    const auto norm_idx = detail::scale_index_map(norm, scale);

    std::vector<std::size_t> sup_idx(phi.space.size(), 0);
    for (std::size_t x = 0; x < phi.space.size(); ++x)
        for (std::size_t y : phi.orbits[x].visited())
            sup_idx[x] = std::max(sup_idx[x], norm_idx[y]);

    // envelope(r) = max of the orbit supremum over states with norm <= r
    std::map<std::size_t, std::size_t> envelope;
    for (std::size_t x = 0; x < phi.space.size(); ++x) {
        const auto [it, fresh] = envelope.emplace(norm_idx[x], sup_idx[x]);
        if (!fresh) it->second = std::max(it->second, sup_idx[x]);
    }
    std::size_t running = 0;
    for (auto& [r, w] : envelope) {
        running = std::max(running, w);
        w = running;
    }

    Verdict verdict;
    std::string obstruction;
    const auto alpha = detail::classk_above(scale, envelope, &obstruction);
    if (alpha) {
        verdict.status = Verdict::Status::Stable;
        verdict.witness = alpha;
        return verdict;
    }
    verdict.status = Verdict::Status::Unstable;
    verdict.obstruction = obstruction;
    // the obstructing state: smallest norm whose orbit supremum exceeds it
    for (std::size_t r = 0; r < scale.size() && !verdict.counterexample; ++r)
        for (std::size_t x = 0; x < phi.space.size(); ++x)
            if (norm_idx[x] == r && sup_idx[x] > norm_idx[x]) {
                verdict.counterexample = x;
                break;
            }
    return verdict;
}

/// The canonical certificate: V(x) is the exact maximum of the norm along
/// the orbit of x.
inline StateFunction converse_construct(const Flow& phi, std::size_t xstar, const Metric& d) {
    const StateFunction norm = norm_to_point(d, xstar);
    StateFunction v;
    v.values.reserve(phi.space.size());
    for (std::size_t x = 0; x < phi.space.size(); ++x) {
        Rat best = norm.values[x];
        for (std::size_t y : phi.orbits[x].visited()) best = std::max(best, norm.values[y]);
        v.values.push_back(best);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Certification pipeline
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string check;
    bool pass = false;
    std::string detail;
    std::string clause;
};

struct CertificateReport {
    enum class Status { Certified, Rejected, Refused };

    Status status = Status::Rejected;
    bool certificate_synthesized = false;
    std::vector<CheckResult> checks;
    std::optional<Verdict> oracle;
    std::string summary;
};

/// Runs the whole pipeline: equilibrium, positive definiteness (searching
/// bounds when none are given), the decrescent checks appropriate to what
/// was supplied, and optionally the oracle cross-check. Supplying both a
/// system and a flow that disagree is refused rather than resolved.
inline CertificateReport certify(const DynamicSetting& s, std::optional<Coalgebra> system,
                                 std::optional<Flow> flow, std::size_t xstar,
                                 const std::optional<Certificate>& cert,
                                 bool oracle_crosscheck = false) {
    CertificateReport report;
    if (!system && !flow) throw input_error("certify needs a system or a flow");

    if (system && flow) {
        const Coalgebra derived = derivative(*flow, s.clock);
        if (!(derived == *system)) {
            report.status = CertificateReport::Status::Refused;
            report.summary = "system and flow disagree; refusing to prefer one";
            return report;
        }
    }
    std::optional<CompletenessReport> incompleteness;
    if (system && !flow) {
        const CompletenessReport completeness = is_T_complete(*system);
        if (completeness.complete) {
            flow = integral(*system, s.clock);
        } else {
            incompleteness = completeness;
            if (!cert)
                // synthesizing a certificate needs orbits, which need a flow
                throw incomplete_system_error(
                    "certificate synthesis needs the solution flow, but the system does not "
                    "determine unique trajectories",
                    completeness);
        }
    }

    bool equilibrium = true;
    if (system) {
        const bool eq = equilibrium_check_sys(xstar, *system);
        report.checks.push_back({"equilibrium-system", eq,
                                 eq ? "" : "dynamics at the point is not the standing-still value",
                                 "equilibrium point (system sense)"});
        equilibrium = equilibrium && eq;
    }
    if (flow) {
        const bool eq = equilibrium_check(xstar, *flow);
        report.checks.push_back(
            {"equilibrium-flow", eq, eq ? "" : "the point moves under the flow",
             "equilibrium point (flow sense)"});
        equilibrium = equilibrium && eq;
    }

    Certificate used;
    if (cert) {
        used = *cert;
        statefunction_validate(used.v, s.space, s.scale);
    } else {
        used.v = converse_construct(*flow, xstar, s.metric);
        report.certificate_synthesized = true;
    }

    const PDReport pd =
        positive_definite_check(used.v, xstar, s.metric, s.scale, used.lower, used.upper);
    report.checks.push_back({"positive-definite", pd.pass, pd.pass ? "" : pd.obstruction,
                             "certificate clause: positive definite"});

    bool decrescent = true;
    if (system) {
        std::size_t witness = 0;
        const bool ok = system_decrescent_check(used.v, *system, s, &witness);
        report.checks.push_back(
            {"decrescent-system", ok,
             ok ? "" : "fails at state " + system->space.labels[witness],
             "certificate clause: decrescent (system form)"});
        decrescent = decrescent && ok;
    }
    if (flow) {
        std::size_t witness = 0;
        const bool ok = flow_decrescent_check(used.v, *flow, &witness);
        report.checks.push_back({"decrescent-flow", ok,
                                 ok ? "" : "fails at state " + flow->space.labels[witness],
                                 "certificate clause: decrescent (flow form)"});
        decrescent = decrescent && ok;
    }

    const bool certified = equilibrium && pd.pass && decrescent;
    report.status =
        certified ? CertificateReport::Status::Certified : CertificateReport::Status::Rejected;
    report.summary = certified
                         ? "certified: positive definite and decrescent at an equilibrium, "
                           "so the point is stable"
                         : "certificate rejected, stability undetermined";

    if (oracle_crosscheck) {
        if (!flow)
            throw incomplete_system_error(
                "oracle cross-check needs the solution flow, but the system does not "
                "determine unique trajectories",
                *incompleteness);
        report.oracle = stability_oracle(*flow, xstar, s.metric, s.scale);
        if (certified && report.oracle->status != Verdict::Status::Stable)
            report.summary += "; WARNING: oracle disputes the certificate";
    }
    return report;
}

}  // namespace lyapcoalg
