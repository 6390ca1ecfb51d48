#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lyapcoalg/json_io.hpp"
#include "lyapcoalg/suites.hpp"

namespace lyapcoalg::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

struct Invocation {
    std::string command;
    std::string spec_path;
    std::string format = "text";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    std::optional<std::size_t> max_size;
    std::optional<std::string> functor;
    bool oracle_crosscheck = false;
};

namespace detail {

inline const char* kUsage =
    "usage: lyapcoalg <command> [spec.json] [options]\n"
    "\n"
    "commands:\n"
    "  validate   run every law suite of the problem's setting\n"
    "  laws       run the monoidal law suites (--functor without a spec)\n"
    "  certify    run the certificate pipeline on the problem\n"
    "  oracle     decide stability outright from orbits\n"
    "  converse   build the orbit-supremum certificate and check it\n"
    "  simulate   dump orbits (finite) or an integrator trajectory (field)\n"
    "  selftest   run the bundled verification suites\n"
    "\n"
    "options:\n"
    "  --seed N             seed for randomized suites (default 0)\n"
    "  --horizon N          override the time horizon (naturals time only)\n"
    "  --max-size N         law-suite space size bound (default 3, max 4)\n"
    "  --functor KIND       identity | powerset | labeled | findist (laws)\n"
    "  --format FMT         text | json | csv (csv: simulate only)\n"
    "  --oracle-crosscheck  append the oracle verdict to certify reports\n";

inline bool parse_args(const std::vector<std::string>& args, Invocation& inv,
                       std::ostream& err) {
    if (args.empty()) {
        err << kUsage;
        return false;
    }
    inv.command = args[0];
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        const auto need_value = [&](const char* flag) -> std::optional<std::string> {
            if (i + 1 >= args.size()) {
                err << flag << " needs a value\n";
                return std::nullopt;
            }
            return args[++i];
        };
        try {
            if (a == "--seed") {
                const auto v = need_value("--seed");
                if (!v) return false;
                inv.seed = std::stoull(*v);
            } else if (a == "--horizon") {
                const auto v = need_value("--horizon");
                if (!v) return false;
                inv.horizon = std::stoull(*v);
            } else if (a == "--max-size") {
                const auto v = need_value("--max-size");
                if (!v) return false;
                inv.max_size = std::stoull(*v);
            } else if (a == "--functor") {
                const auto v = need_value("--functor");
                if (!v) return false;
                inv.functor = *v;
            } else if (a == "--format") {
                const auto v = need_value("--format");
                if (!v) return false;
                inv.format = *v;
            } else if (a == "--oracle-crosscheck") {
                inv.oracle_crosscheck = true;
            } else if (a == "--help" || a == "-h") {
                err << kUsage;
                return false;
            } else if (!a.empty() && a[0] == '-') {
                err << "unknown option: " << a << "\n" << kUsage;
                return false;
            } else if (inv.spec_path.empty()) {
                inv.spec_path = a;
            } else {
                err << "unexpected argument: " << a << "\n";
                return false;
            }
        } catch (const std::exception&) {
            err << "malformed value for " << a << "\n";
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Report assembly
// ---------------------------------------------------------------------------

struct Report {
    json doc = json::object();
    bool failed = false;

    Report(const std::string& command, const std::string& name, std::uint64_t seed) {
        doc["command"] = command;
        doc["name"] = name;
        doc["seed"] = seed;
        doc["results"] = json::array();
    }

    void add(const std::string& check, bool pass, const std::string& detail,
             const std::string& clause = "") {
        json r;
        r["check"] = check;
        r["pass"] = pass;
        if (!detail.empty()) r["detail"] = detail;
        if (!clause.empty()) r["clause"] = clause;
        doc["results"].push_back(std::move(r));
        failed = failed || !pass;
    }

    void finish() { doc["status"] = failed ? "fail" : "pass"; }

    void render(const std::string& format, std::ostream& out) const {
        if (format == "json") {
            out << canonical_dump(doc);
            return;
        }
        out << doc["command"].get<std::string>() << " " << doc["name"].get<std::string>()
            << "\n";
        for (const auto& r : doc["results"]) {
            out << "  [" << (r["pass"].get<bool>() ? "pass" : "FAIL") << "] "
                << r["check"].get<std::string>();
            if (r.contains("clause")) out << "  (" << r["clause"].get<std::string>() << ")";
            if (r.contains("detail")) out << "  -- " << r["detail"].get<std::string>();
            out << "\n";
        }
        for (const auto& [key, value] : doc.items()) {
            if (key == "command" || key == "name" || key == "results" || key == "seed" ||
                key == "status")
                continue;
            out << "  " << key << ": " << value.dump() << "\n";
        }
        out << "status: " << doc["status"].get<std::string>() << "\n";
    }
};

inline json verdict_json(const Verdict& v, const DynamicSetting& s) {
    json out;
    out["status"] = v.status == Verdict::Status::Stable     ? "stable"
                    : v.status == Verdict::Status::Unstable ? "unstable"
                                                            : "unknown";
    if (v.witness) {
        json images = json::array();
        for (std::size_t i : v.witness->perm) images.push_back(rat_to_string(s.scale.values[i]));
        out["witness"] = std::move(images);
    }
    if (v.counterexample) out["counterexample"] = s.space.labels[*v.counterexample];
    if (!v.obstruction.empty()) out["obstruction"] = v.obstruction;
    return out;
}

// ---------------------------------------------------------------------------
// Finite-problem assembly from a spec (with discretization for fields)
// ---------------------------------------------------------------------------

struct FiniteProblem {
    DynamicSetting setting;
    std::optional<Coalgebra> system;
    std::optional<Flow> flow;
    std::optional<std::size_t> point;
    std::optional<Certificate> certificate;
    std::vector<std::size_t> clamped_states;
};

inline FiniteProblem finite_problem(const ProblemSpec& spec, const Invocation& inv) {
    FiniteProblem out;
    const std::optional<std::size_t> horizon =
        inv.horizon ? inv.horizon : spec.options.horizon;
    if (spec.type == ProblemSpec::SystemType::VectorField) {
        const ContinuousProblem& c = *spec.continuous;
        if (c.box.empty())
            throw input_error("this command needs a box to discretize the field over");
        const DiscretizedSystem d = discretize(c.field, c.box, c.h, c.denominator);
        DynamicSetting s;
        s.time = TimeMonoid::naturals(horizon.value_or(d.space.size() + 2));
        s.space = d.space;
        s.scale = d.scale;
        s.metric = d.metric;
        s.functor = Endofunctor::identity();
        s.clock = make_unit_clock(s.functor, s.time);
        s.stable = stationary_system(s.functor, scale_space(s.scale));
        s.forder = FOrder{s.functor, s.scale, std::nullopt, std::nullopt};
        out.setting = std::move(s);
        out.system = d.system;
        out.clamped_states = d.clamped_states;
        if (!c.point.empty()) {
            // nearest grid state to the requested coordinates
            std::size_t best = 0;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (std::size_t p = 0; p < d.points.size(); ++p) {
                double d2 = 0;
                for (std::size_t axis = 0; axis < c.point.size(); ++axis) {
                    const double diff = d.points[p][axis] - c.point[axis];
                    d2 += diff * diff;
                }
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = p;
                }
            }
            out.point = best;
        }
        if (out.point) out.certificate = Certificate{norm_to_point(out.setting.metric, *out.point),
                                                     std::nullopt, std::nullopt};
        return out;
    }

    out.setting = *spec.setting;
    out.system = spec.system;
    out.flow = spec.flow;
    out.point = spec.point;
    out.certificate = spec.certificate;
    if (horizon) {
        if (out.setting.time.kind != TimeMonoid::Kind::Naturals)
            throw input_error("--horizon override applies to naturals time only");
        if (out.setting.functor.kind == Endofunctor::Kind::Labeled)
            throw input_error("--horizon override is not supported for time-labeled systems");
        out.setting.time = TimeMonoid::naturals(*horizon);
        out.setting.clock = make_unit_clock(out.setting.functor, out.setting.time);
        if (out.flow) out.flow = Flow::from_step(out.setting.time, out.flow->space,
                                                 out.flow->step_map);
    }
    return out;
}

/// The solution flow for oracle/converse commands; raises with the
/// completeness report when trajectories are not unique.
inline Flow resolve_flow(const FiniteProblem& p) {
    if (p.flow) return *p.flow;
    return integral(*p.system, p.setting.clock);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_validate(const ProblemSpec& spec, const Invocation& inv, std::ostream& out) {
    const FiniteProblem p = finite_problem(spec, inv);
    LawSizes sizes;
    sizes.max_size = inv.max_size.value_or(spec.options.max_size);
    sizes.dist_denominator = spec.options.dist_denominator;
    sizes.curve_count = spec.options.curves;
    sizes.seed = inv.seed.value_or(spec.options.seed);

    Report report("validate", spec.name, sizes.seed);
    const ValidationReport vr = validate_setting(p.setting, sizes);
    for (const auto& e : vr.entries)
        report.add(e.clause, e.informational, e.detail, e.informational ? "note" : "");
    report.add("setting-valid", vr.valid(), "");
    if (p.system) {
        bool well_formed = true;
        std::string detail;
        try {
            p.system->validate();
        } catch (const input_error& e) {
            well_formed = false;
            detail = e.what();
        }
        report.add("system-well-formed", well_formed, detail);
    }
    report.finish();
    report.render(inv.format, out);
    return report.failed ? kExitCheckFailed : kExitPass;
}

inline int cmd_laws(const ProblemSpec* spec, const Invocation& inv, std::ostream& out) {
    Endofunctor functor = Endofunctor::identity();
    MeasureScale scale({Rat(0), Rat(1), Rat(2), Rat(4)});
    bool reduced_labels = false;
    if (inv.functor) {
        const std::string& k = *inv.functor;
        if (k == "identity")
            functor = Endofunctor::identity();
        else if (k == "powerset")
            functor = Endofunctor::powerset();
        else if (k == "labeled")
            functor = Endofunctor::labeled(FiniteSpace::range(2));
        else if (k == "findist")
            functor = Endofunctor::findist();
        else
            throw input_error("unsupported functor kind: " + k);
    } else if (spec && spec->setting) {
        functor = spec->setting->functor;
        scale = spec->setting->scale;
        if (functor.kind == Endofunctor::Kind::Labeled && functor.labels.size() > 4) {
            functor = Endofunctor::labeled(FiniteSpace::range(2));
            reduced_labels = true;
        }
    }

    const std::size_t max_size =
        inv.max_size.value_or(spec ? spec->options.max_size : std::size_t{3});
    EnumLimits limits;
    if (spec) limits.dist_denominator = spec->options.dist_denominator;

    Report report("laws", spec ? spec->name : "ad-hoc", inv.seed.value_or(0));
    if (reduced_labels)
        report.add("label-set", true,
                   "label set too large for exhaustive enumeration; suites run with a "
                   "representative 2-element label set", "note");
    const LawReport lr = check_monoidal_laws(functor, max_size, scale, limits);
    for (const auto& law : lr.laws)
        report.add(law.law, law.pass,
                   std::to_string(law.cases) + " cases" +
                       (law.pass ? "" : "; counterexample " + law.counterexample));
    report.finish();
    report.render(inv.format, out);
    return report.failed ? kExitCheckFailed : kExitPass;
}

inline int cmd_certify(const ProblemSpec& spec, const Invocation& inv, std::ostream& out) {
    const FiniteProblem p = finite_problem(spec, inv);
    if (!p.point) throw input_error("certify needs a point");
    Report report("certify", spec.name, inv.seed.value_or(spec.options.seed));

    if (spec.type == ProblemSpec::SystemType::VectorField && spec.continuous->certificate_expr) {
        const ContinuousProblem& c = *spec.continuous;
        std::vector<std::vector<double>> samples;
        const std::size_t per_axis = std::max<std::size_t>(2, spec.options.samples);
        if (c.field.dim == 1) {
            for (std::size_t i = 0; i < per_axis; ++i)
                samples.push_back({c.box[0].lo + (c.box[0].hi - c.box[0].lo) *
                                                     static_cast<double>(i) /
                                                     static_cast<double>(per_axis - 1)});
        } else {
            // axis-aligned slices through the requested point
            for (std::size_t axis = 0; axis < c.field.dim; ++axis)
                for (std::size_t i = 0; i < per_axis; ++i) {
                    std::vector<double> x = c.point;
                    x[axis] = c.box[axis].lo + (c.box[axis].hi - c.box[axis].lo) *
                                                   static_cast<double>(i) /
                                                   static_cast<double>(per_axis - 1);
                    samples.push_back(std::move(x));
                }
        }
        const double tol = spec.options.tol.value_or(default_lie_tolerance(spec.options.eps));
        const LieReport lie = lie_derivative_check(ScalarField::parse(*c.certificate_expr),
                                                   c.field, samples, spec.options.eps, tol);
        report.add("derivative-along-field", lie.pass,
                   "worst value " + std::to_string(lie.worst_value) + " over " +
                       std::to_string(lie.samples) + " samples (tol " + std::to_string(tol) + ")",
                   "certificate clause: decrescent (derivative form)");
    }

    const bool crosscheck = inv.oracle_crosscheck || spec.options.oracle_crosscheck;
    const CertificateReport cr =
        certify(p.setting, p.system, p.flow, *p.point, p.certificate, crosscheck);
    if (cr.status == CertificateReport::Status::Refused) {
        throw input_error(cr.summary);
    }
    for (const auto& c : cr.checks) report.add(c.check, c.pass, c.detail, c.clause);
    report.doc["summary"] = cr.summary;
    report.doc["certificateSynthesized"] = cr.certificate_synthesized;
    if (cr.oracle) report.doc["verdict"] = verdict_json(*cr.oracle, p.setting);
    if (!p.clamped_states.empty()) {
        json clamped = json::array();
        for (std::size_t x : p.clamped_states) clamped.push_back(p.setting.space.labels[x]);
        report.doc["clampedStates"] = std::move(clamped);
    }
    report.finish();
    report.render(inv.format, out);
    return report.failed ? kExitCheckFailed : kExitPass;
}

inline int cmd_oracle(const ProblemSpec& spec, const Invocation& inv, std::ostream& out) {
    const FiniteProblem p = finite_problem(spec, inv);
    if (!p.point) throw input_error("oracle needs a point");
    const Flow phi = resolve_flow(p);
    const Verdict v = stability_oracle(phi, *p.point, p.setting.metric, p.setting.scale);

    Report report("oracle", spec.name, inv.seed.value_or(spec.options.seed));
    report.add("stability", v.status == Verdict::Status::Stable,
               v.status == Verdict::Status::Stable
                   ? "stable with a class-K witness"
                   : "unstable: " + v.obstruction,
               "stability bound");
    report.doc["verdict"] = verdict_json(v, p.setting);
    if (!p.clamped_states.empty()) {
        json clamped = json::array();
        for (std::size_t x : p.clamped_states) clamped.push_back(p.setting.space.labels[x]);
        report.doc["clampedStates"] = std::move(clamped);
    }
    report.finish();
    report.render(inv.format, out);
    return report.failed ? kExitCheckFailed : kExitPass;
}

inline int cmd_converse(const ProblemSpec& spec, const Invocation& inv, std::ostream& out) {
    const FiniteProblem p = finite_problem(spec, inv);
    if (!p.point) throw input_error("converse needs a point");
    const Flow phi = resolve_flow(p);
    const StateFunction v = converse_construct(phi, *p.point, p.setting.metric);

    Report report("converse", spec.name, inv.seed.value_or(spec.options.seed));
    const PDReport pd = positive_definite_check(v, *p.point, p.setting.metric, p.setting.scale);
    report.add("positive-definite", pd.pass, pd.pass ? "" : pd.obstruction,
               "certificate clause: positive definite");
    report.add("decrescent-flow", flow_decrescent_check(v, phi), "",
               "certificate clause: decrescent (flow form)");
    if (p.system)
        report.add("decrescent-system", system_decrescent_check(v, *p.system, p.setting), "",
                   "certificate clause: decrescent (system form)");

    json values = json::object();
    for (std::size_t x = 0; x < p.setting.space.size(); ++x)
        values[p.setting.space.labels[x]] = rat_to_string(v.values[x]);
    report.doc["certificate"] = {{"values", std::move(values)}};
    report.finish();
    report.render(inv.format, out);
    return report.failed ? kExitCheckFailed : kExitPass;
}

inline int cmd_simulate(const ProblemSpec& spec, const Invocation& inv, std::ostream& out) {
    if (spec.type == ProblemSpec::SystemType::VectorField) {
        const ContinuousProblem& c = *spec.continuous;
        if (c.point.empty()) throw input_error("simulate needs a starting point");
        const SampledTrajectory t =
            rk4_integrate(c.field, c.point, c.h, spec.options.steps);
        if (inv.format == "csv") {
            out << "t";
            for (std::size_t i = 0; i < c.field.dim; ++i) out << ",x" << (i + 1);
            out << "\n";
            for (std::size_t k = 0; k < t.points.size(); ++k) {
                out << (static_cast<double>(k) * t.step);
                for (const double v : t.points[k]) out << "," << v;
                out << "\n";
            }
            return kExitPass;
        }
        Report report("simulate", spec.name, inv.seed.value_or(spec.options.seed));
        json points = json::array();
        for (const auto& pt : t.points) points.push_back(pt);
        report.doc["trajectory"] = {{"step", t.step}, {"points", std::move(points)}};
        report.finish();
        report.render(inv.format, out);
        return kExitPass;
    }

    const FiniteProblem p = finite_problem(spec, inv);
    const Flow phi = resolve_flow(p);
    if (inv.format == "csv") {
        out << "state,tick,value\n";
        for (std::size_t x = 0; x < phi.space.size(); ++x)
            for (std::size_t k = 0; k < phi.time.size(); ++k)
                out << phi.space.labels[x] << "," << k << "," << phi.space.labels[phi.at(k, x)]
                    << "\n";
        return kExitPass;
    }
    Report report("simulate", spec.name, inv.seed.value_or(spec.options.seed));
    json orbits = json::object();
    for (std::size_t x = 0; x < phi.space.size(); ++x) {
        const Orbit& o = phi.orbits[x];
        json entry;
        json prefix = json::array(), cycle = json::array();
        for (std::size_t s : o.prefix) prefix.push_back(phi.space.labels[s]);
        for (std::size_t s : o.cycle) cycle.push_back(phi.space.labels[s]);
        entry["prefix"] = std::move(prefix);
        entry["cycle"] = std::move(cycle);
        orbits[phi.space.labels[x]] = std::move(entry);
    }
    report.doc["orbits"] = std::move(orbits);
    report.finish();
    report.render(inv.format, out);
    return kExitPass;
}

inline int cmd_selftest(const Invocation& inv, std::ostream& out) {
    const auto results = run_acceptance_suites(inv.seed.value_or(0));
    if (inv.format == "json") {
        Report report("selftest", "builtin", inv.seed.value_or(0));
        for (const auto& r : results) report.add(r.name, r.pass, r.detail);
        report.finish();
        report.render("json", out);
        return report.failed ? kExitCheckFailed : kExitPass;
    }
    bool all_pass = true;
    for (const auto& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << "  " << r.number << "  " << r.name << "  --  "
            << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "selftest: all suites passed" : "selftest: FAILURES present") << "\n";
    return all_pass ? kExitPass : kExitCheckFailed;
}

}  // namespace detail

/// Entry point shared by the binary and the tests. Exit statuses: 0 every
/// check passed, 1 a check failed, 2 input or schema error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Invocation inv;
    if (!detail::parse_args(args, inv, err)) return kExitInputError;

    static const std::vector<std::string> commands = {"validate", "laws",     "certify",
                                                      "oracle",   "converse", "simulate",
                                                      "selftest"};
    if (std::find(commands.begin(), commands.end(), inv.command) == commands.end()) {
        err << "unknown command: " << inv.command << "\n" << detail::kUsage;
        return kExitInputError;
    }
    if (inv.format != "text" && inv.format != "json" && inv.format != "csv") {
        err << "unknown format: " << inv.format << "\n";
        return kExitInputError;
    }
    if (inv.format == "csv" && inv.command != "simulate") {
        err << "csv output is only available for simulate\n";
        return kExitInputError;
    }

    const auto started = std::chrono::steady_clock::now();
    const auto finish = [&](int code) {
        if (inv.format == "text") {
            const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started);
            out << "elapsed-ms: " << elapsed.count() << "\n";
        }
        return code;
    };

    try {
        if (inv.command == "selftest") return finish(detail::cmd_selftest(inv, out));

        std::optional<ProblemSpec> spec;
        if (!inv.spec_path.empty()) {
            std::ifstream in(inv.spec_path);
            if (!in) {
                err << "cannot open spec file: " << inv.spec_path << "\n";
                return kExitInputError;
            }
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                err << "spec is not valid JSON: " << e.what() << "\n";
                return kExitInputError;
            }
            spec = load_spec_json(j);
        }

        if (inv.command == "laws")
            return finish(detail::cmd_laws(spec ? &*spec : nullptr, inv, out));
        if (!spec) {
            err << inv.command << " needs a spec file\n";
            return kExitInputError;
        }
        if (inv.command == "validate") return finish(detail::cmd_validate(*spec, inv, out));
        if (inv.command == "certify") return finish(detail::cmd_certify(*spec, inv, out));
        if (inv.command == "oracle") return finish(detail::cmd_oracle(*spec, inv, out));
        if (inv.command == "converse") return finish(detail::cmd_converse(*spec, inv, out));
        return finish(detail::cmd_simulate(*spec, inv, out));
    } catch (const schema_error& e) {
        err << e.what() << "\n";
        return kExitInputError;
    } catch (const json::exception& e) {
        err << "malformed field in spec: " << e.what() << "\n";
        return kExitInputError;
    } catch (const incomplete_system_error& e) {
        err << e.what() << "\n";
        for (const auto& [state, reason] : e.report.failures)
            err << "  state #" << state << ": "
                << (reason == CompletenessReport::Reason::NoExtension ? "no extension"
                                                                      : "multiple extensions")
                << "\n";
        return kExitInputError;
    } catch (const input_error& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace lyapcoalg::cli
