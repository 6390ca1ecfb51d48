#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "lyapcoalg/continuous.hpp"
#include "lyapcoalg/lyapunov.hpp"
#include "lyapcoalg/settings.hpp"

namespace lyapcoalg {

using nlohmann::json;

inline constexpr const char* kSchemaId = "lyapcoalg-problem/v1";

/// Schema/resolution failures carry JSON-pointer locations.
class schema_error : public std::runtime_error {
public:
    struct Entry {
        std::string pointer;
        std::string message;
    };

    explicit schema_error(std::vector<Entry> entries)
        : std::runtime_error(format(entries)), errors(std::move(entries)) {}

    std::vector<Entry> errors;

private:
    static std::string format(const std::vector<Entry>& entries) {
        std::string out = "spec resolution failed:";
        for (const auto& e : entries) out += "\n  " + e.pointer + ": " + e.message;
        return out;
    }
};

struct ProblemOptions {
    std::uint64_t seed = 0;
    std::optional<std::size_t> horizon;
    std::size_t max_size = 3;
    long long dist_denominator = 4;
    std::size_t curves = 200;
    bool oracle_crosscheck = false;
    double eps = 1e-5;
    std::optional<double> tol;
    std::size_t samples = 1000;
    std::size_t steps = 100;
};

struct ContinuousProblem {
    std::vector<std::string> components;
    VectorField field;
    std::vector<GridAxis> box;
    double h = 0.1;
    long long denominator = (1LL << 20);
    std::vector<double> point;
    std::optional<std::string> certificate_expr;
};

/// One problem file, fully resolved: a finite setting with a system, flow or
/// certificate, or a continuous vector-field problem.
struct ProblemSpec {
    enum class SystemType { Coalgebra, Flow, VectorField };

    std::string name;
    SystemType type = SystemType::Coalgebra;

    std::optional<DynamicSetting> setting;
    std::optional<Coalgebra> system;
    std::optional<Flow> flow;
    std::optional<std::size_t> point;
    std::optional<Certificate> certificate;
    std::optional<ContinuousProblem> continuous;
    ProblemOptions options;
};

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace detail {

class SpecResolver {
public:
    explicit SpecResolver(const json& root) : root_(root) {}

    ProblemSpec resolve() {
        ProblemSpec spec;
        if (!root_.is_object()) {
            fail("", "spec must be a JSON object");
            throw_errors();
        }
        if (str_at("/$schema") != kSchemaId)
            fail("/$schema", "expected \"" + std::string(kSchemaId) + "\"");
        spec.name = root_.value("name", "unnamed");
        parse_options(spec.options);

        const json* system = find("/system");
        if (!system || !system->is_object()) {
            fail("/system", "missing system object");
            throw_errors();
        }
        const std::string type = system->value("type", "");
        if (type == "vectorfield") {
            spec.type = ProblemSpec::SystemType::VectorField;
            parse_continuous(spec);
        } else if (type == "coalgebra" || type == "flow") {
            spec.type = type == "flow" ? ProblemSpec::SystemType::Flow
                                       : ProblemSpec::SystemType::Coalgebra;
            parse_setting(spec);
            if (!errors_.empty()) throw_errors();
            parse_finite_system(spec, *system);
            parse_point(spec);
            parse_certificate(spec);
        } else {
            fail("/system/type", "unknown system type: \"" + type + "\"");
        }
        throw_errors();
        return spec;
    }

private:
    const json& root_;
    std::vector<schema_error::Entry> errors_;

    void fail(const std::string& pointer, const std::string& message) {
        errors_.push_back({pointer.empty() ? "/" : pointer, message});
    }
    void throw_errors() {
        if (!errors_.empty()) throw schema_error(std::move(errors_));
    }

    const json* find(const std::string& pointer) const {
        const json::json_pointer p(pointer);
        if (!root_.contains(p)) return nullptr;
        return &root_.at(p);
    }
    std::string str_at(const std::string& pointer) {
        const json* v = find(pointer);
        if (!v || !v->is_string()) {
            fail(pointer, "expected a string");
            return "";
        }
        return v->get<std::string>();
    }

    Rat rat_at(const json& v, const std::string& pointer) {
        if (v.is_number_integer()) return Rat(v.get<long long>());
        if (!v.is_string()) {
            fail(pointer, "expected a rational \"p/q\" string");
            return Rat(0);
        }
        try {
            return parse_rat(v.get<std::string>());
        } catch (const input_error& e) {
            fail(pointer, e.what());
            return Rat(0);
        }
    }

    void parse_options(ProblemOptions& o) {
        const json* opts = find("/options");
        if (!opts) return;
        if (!opts->is_object()) {
            fail("/options", "expected an object");
            return;
        }
        o.seed = opts->value("seed", o.seed);
        if (opts->contains("horizon")) o.horizon = opts->at("horizon").get<std::size_t>();
        o.max_size = opts->value("maxSize", o.max_size);
        o.dist_denominator = opts->value("distDenominator", o.dist_denominator);
        o.curves = opts->value("curves", o.curves);
        o.oracle_crosscheck = opts->value("oracleCrosscheck", o.oracle_crosscheck);
        o.eps = opts->value("eps", o.eps);
        if (opts->contains("tol")) o.tol = opts->at("tol").get<double>();
        o.samples = opts->value("samples", o.samples);
        o.steps = opts->value("steps", o.steps);
    }

    void parse_setting(ProblemSpec& spec) {
        const json* s = find("/setting");
        if (!s || !s->is_object()) {
            fail("/setting", "finite problems need a setting object");
            return;
        }
        DynamicSetting out;

        // time
        const json* time = find("/setting/time");
        if (!time || !time->is_object()) {
            fail("/setting/time", "expected an object");
            return;
        }
        const std::string tkind = time->value("kind", "naturals");
        try {
            if (tkind == "naturals") {
                out.time = TimeMonoid::naturals(time->value("horizon", 16));
            } else if (tkind == "grid") {
                out.time = TimeMonoid::rational_grid(
                    rat_at(time->at("step"), "/setting/time/step"),
                    rat_at(time->at("horizon"), "/setting/time/horizon"));
            } else {
                fail("/setting/time/kind", "unknown time kind: \"" + tkind + "\"");
                return;
            }
        } catch (const json::exception&) {
            fail("/setting/time", "grid time needs step and horizon");
            return;
        } catch (const input_error& e) {
            fail("/setting/time", e.what());
            return;
        }

        // space
        const json* space = find("/setting/space");
        if (!space || !space->is_array() || space->empty()) {
            fail("/setting/space", "expected a nonempty array of state labels");
            return;
        }
        std::vector<std::string> labels;
        for (const auto& l : *space) {
            if (!l.is_string()) {
                fail("/setting/space", "labels must be strings");
                return;
            }
            labels.push_back(l.get<std::string>());
        }
        try {
            out.space = FiniteSpace(std::move(labels));
        } catch (const input_error& e) {
            fail("/setting/space", e.what());
            return;
        }

        // functor
        const json* functor = find("/setting/functor");
        const std::string fkind = functor && functor->is_object()
                                      ? functor->value("kind", "identity")
                                      : "identity";
        if (fkind == "identity") {
            out.functor = Endofunctor::identity();
        } else if (fkind == "powerset") {
            out.functor = Endofunctor::powerset();
        } else if (fkind == "findist") {
            out.functor = Endofunctor::findist();
        } else if (fkind == "labeled") {
            const json* ls = find("/setting/functor/labels");
            if (!ls || (ls->is_string() && ls->get<std::string>() == "time")) {
                out.functor = Endofunctor::labeled(out.time.carrier_space());
            } else if (ls->is_array()) {
                std::vector<std::string> label_names;
                for (const auto& l : *ls) label_names.push_back(l.get<std::string>());
                try {
                    out.functor = Endofunctor::labeled(FiniteSpace(std::move(label_names)));
                } catch (const input_error& e) {
                    fail("/setting/functor/labels", e.what());
                    return;
                }
            } else {
                fail("/setting/functor/labels", "expected \"time\" or an array of labels");
                return;
            }
        } else {
            fail("/setting/functor/kind", "unsupported kind: \"" + fkind + "\"");
            return;
        }

        // metric (explicit rows or the absolute-difference shorthand)
        const json* metric = find("/setting/metric");
        const std::size_t n = out.space.size();
        if (!metric) {
            fail("/setting/metric", "missing metric");
            return;
        }
        if (metric->is_string() && metric->get<std::string>() == "absolute-difference") {
            std::vector<Rat> coords;
            for (std::size_t i = 0; i < n; ++i) {
                try {
                    coords.push_back(parse_rat(out.space.labels[i]));
                } catch (const input_error&) {
                    fail("/setting/metric",
                         "absolute-difference needs numeric state labels (state \"" +
                             out.space.labels[i] + "\")");
                    return;
                }
            }
            out.metric = Metric::absolute_difference(coords);
        } else if (metric->is_array()) {
            if (metric->size() != n) {
                fail("/setting/metric", "expected " + std::to_string(n) + " rows");
                return;
            }
            std::vector<Rat> entries;
            for (std::size_t i = 0; i < n; ++i) {
                const json& row = (*metric)[i];
                if (!row.is_array() || row.size() != n) {
                    fail("/setting/metric/" + std::to_string(i),
                         "expected " + std::to_string(n) + " entries");
                    return;
                }
                for (std::size_t j = 0; j < n; ++j)
                    entries.push_back(rat_at(row[j], "/setting/metric/" + std::to_string(i) +
                                                         "/" + std::to_string(j)));
            }
            out.metric = Metric(n, std::move(entries));
        } else {
            fail("/setting/metric", "expected rows or \"absolute-difference\"");
            return;
        }

        // scale (explicit values or derived from the metric)
        const json* scale = find("/setting/scale");
        try {
            if (!scale || (scale->is_string() && scale->get<std::string>() == "metric-values")) {
                std::vector<Rat> distinct = out.metric.table;
                std::sort(distinct.begin(), distinct.end());
                distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
                out.scale = MeasureScale(std::move(distinct));
            } else if (scale->is_array()) {
                std::vector<Rat> values;
                for (std::size_t i = 0; i < scale->size(); ++i)
                    values.push_back(rat_at((*scale)[i], "/setting/scale/" + std::to_string(i)));
                out.scale = MeasureScale(std::move(values));
            } else {
                fail("/setting/scale", "expected values or \"metric-values\"");
                return;
            }
        } catch (const input_error& e) {
            fail("/setting/scale", e.what());
            return;
        }

        out.clock = make_unit_clock(out.functor, out.time);

        // stable system: "stationary" or explicit dynamics over scale labels
        const json* stable = find("/setting/stable");
        if (!stable || (stable->is_string() && stable->get<std::string>() == "stationary")) {
            out.stable = stationary_system(out.functor, scale_space(out.scale));
        } else if (stable->is_object()) {
            const auto parsed = parse_dynamics(*stable, out.functor, scale_space(out.scale),
                                               "/setting/stable");
            if (!parsed) return;
            out.stable = *parsed;
        } else {
            fail("/setting/stable", "expected \"stationary\" or a dynamics object");
            return;
        }

        out.forder = FOrder{out.functor, out.scale, std::nullopt, std::nullopt};
        const json* monoidal = find("/setting/monoidal");
        const json* converse = find("/setting/converse");
        out.monoidal = !monoidal || monoidal->get<bool>();
        out.converse = !converse || converse->get<bool>();
        spec.setting = std::move(out);
    }

    std::optional<Coalgebra> parse_dynamics(const json& table, const Endofunctor& functor,
                                            const FiniteSpace& space,
                                            const std::string& pointer) {
        Coalgebra out{functor, space, {}};
        out.dynamics.resize(space.size());
        if (!table.is_object()) {
            fail(pointer, "expected an object keyed by state label");
            return std::nullopt;
        }
        for (const auto& [key, value] : table.items()) {
            std::size_t x = 0;
            try {
                x = space.at(key);
            } catch (const input_error&) {
                fail(pointer + "/" + key, "dangling state label");
                continue;
            }
            const std::string vp = pointer + "/" + key;
            try {
                switch (functor.kind) {
                    case Endofunctor::Kind::Identity:
                        out.dynamics[x] = IdValue{space.at(value.get<std::string>())};
                        break;
                    case Endofunctor::Kind::Powerset: {
                        std::vector<std::size_t> elems;
                        for (const auto& e : value) elems.push_back(space.at(e.get<std::string>()));
                        out.dynamics[x] = make_set(std::move(elems));
                        break;
                    }
                    case Endofunctor::Kind::Labeled: {
                        std::vector<std::pair<std::size_t, std::size_t>> edges;
                        for (const auto& e : value)
                            edges.emplace_back(functor.labels.at(e.at(0).get<std::string>()),
                                               space.at(e.at(1).get<std::string>()));
                        out.dynamics[x] = make_labeled(std::move(edges));
                        break;
                    }
                    case Endofunctor::Kind::FinDist: {
                        std::vector<std::pair<std::size_t, Rat>> mass;
                        for (const auto& e : value)
                            mass.emplace_back(space.at(e.at(0).get<std::string>()),
                                              rat_at(e.at(1), vp));
                        out.dynamics[x] = make_dist(std::move(mass));
                        break;
                    }
                }
            } catch (const input_error& e) {
                fail(vp, e.what());
            } catch (const json::exception&) {
                fail(vp, "malformed dynamics entry");
            }
        }
        for (std::size_t x = 0; x < space.size(); ++x)
            if (!out.dynamics[x]) fail(pointer, "missing dynamics for state " + space.labels[x]);
        if (!errors_.empty()) return std::nullopt;
        return out;
    }

    void parse_finite_system(ProblemSpec& spec, const json& system) {
        const DynamicSetting& s = *spec.setting;
        if (spec.type == ProblemSpec::SystemType::Coalgebra) {
            if (!system.contains("dynamics")) {
                fail("/system/dynamics", "missing dynamics");
                return;
            }
            const auto parsed =
                parse_dynamics(system.at("dynamics"), s.functor, s.space, "/system/dynamics");
            if (parsed) spec.system = *parsed;
        } else {
            if (!system.contains("step") || !system.at("step").is_object()) {
                fail("/system/step", "flows are given by their one-tick step map");
                return;
            }
            std::vector<std::size_t> step(s.space.size(), 0);
            std::vector<bool> given(s.space.size(), false);
            for (const auto& [key, value] : system.at("step").items()) {
                try {
                    const std::size_t x = s.space.at(key);
                    step[x] = s.space.at(value.get<std::string>());
                    given[x] = true;
                } catch (const input_error& e) {
                    fail("/system/step/" + key, e.what());
                } catch (const json::exception&) {
                    fail("/system/step/" + key, "expected a state label");
                }
            }
            for (std::size_t x = 0; x < s.space.size(); ++x)
                if (!given[x]) fail("/system/step", "missing step for state " + s.space.labels[x]);
            if (errors_.empty()) spec.flow = Flow::from_step(s.time, s.space, std::move(step));
        }
    }

    void parse_point(ProblemSpec& spec) {
        const json* p = find("/point");
        if (!p) return;
        if (!p->is_string()) {
            fail("/point", "expected a state label");
            return;
        }
        try {
            spec.point = spec.setting->space.at(p->get<std::string>());
        } catch (const input_error&) {
            fail("/point", "dangling state label: \"" + p->get<std::string>() + "\"");
        }
    }

    std::optional<ClassK> parse_bound(const json& b, const MeasureScale& scale,
                                      const std::string& pointer) {
        if (b.is_string() && b.get<std::string>() == "identity")
            return ClassK::identity(scale.size());
        if (!b.is_array() || b.size() != scale.size()) {
            fail(pointer, "expected \"identity\" or one image value per scale value");
            return std::nullopt;
        }
        ClassK out;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const Rat v = rat_at(b[i], pointer + "/" + std::to_string(i));
            const auto idx = scale.index_of(v);
            if (!idx) {
                fail(pointer + "/" + std::to_string(i),
                     "image value outside the scale: " + rat_to_string(v));
                return std::nullopt;
            }
            out.perm.push_back(*idx);
        }
        return out;
    }

    void parse_certificate(ProblemSpec& spec) {
        const json* c = find("/certificate");
        if (!c) return;
        if (!c->is_object() || !c->contains("values")) {
            fail("/certificate", "expected an object with per-state values");
            return;
        }
        const DynamicSetting& s = *spec.setting;
        Certificate cert;
        cert.v.values.resize(s.space.size(), Rat(0));
        std::vector<bool> given(s.space.size(), false);
        for (const auto& [key, value] : c->at("values").items()) {
            try {
                const std::size_t x = s.space.at(key);
                const Rat v = rat_at(value, "/certificate/values/" + key);
                if (!s.scale.contains(v)) {
                    fail("/certificate/values/" + key,
                         "value outside the scale: " + rat_to_string(v));
                    continue;
                }
                cert.v.values[x] = v;
                given[x] = true;
            } catch (const input_error&) {
                fail("/certificate/values/" + key, "dangling state label");
            }
        }
        for (std::size_t x = 0; x < s.space.size(); ++x)
            if (!given[x])
                fail("/certificate/values", "missing value for state " + s.space.labels[x]);
        if (c->contains("lower")) cert.lower = parse_bound(c->at("lower"), s.scale, "/certificate/lower");
        if (c->contains("upper")) cert.upper = parse_bound(c->at("upper"), s.scale, "/certificate/upper");
        if (errors_.empty()) spec.certificate = std::move(cert);
    }

    void parse_continuous(ProblemSpec& spec) {
        ContinuousProblem c;
        const json* comps = find("/system/components");
        if (!comps || !comps->is_array() || comps->empty()) {
            fail("/system/components", "expected a nonempty array of expressions");
            return;
        }
        for (std::size_t i = 0; i < comps->size(); ++i) {
            try {
                c.components.push_back((*comps)[i].get<std::string>());
                c.field.components.push_back(parse_expr(c.components.back()));
            } catch (const input_error& e) {
                fail("/system/components/" + std::to_string(i), e.what());
            } catch (const json::exception&) {
                fail("/system/components/" + std::to_string(i), "expected a string");
            }
        }
        c.field.dim = c.field.components.size();

        const json* box = find("/system/box");
        if (box) {
            if (!box->is_array() || box->size() != c.field.dim) {
                fail("/system/box", "expected one axis per component");
                return;
            }
            for (std::size_t i = 0; i < box->size(); ++i) {
                const json& a = (*box)[i];
                try {
                    c.box.push_back(GridAxis{a.at("lo").get<double>(), a.at("hi").get<double>(),
                                             a.at("cells").get<std::size_t>()});
                } catch (const json::exception&) {
                    fail("/system/box/" + std::to_string(i), "axis needs lo, hi, cells");
                }
            }
        }
        c.h = root_.value(json::json_pointer("/system/h"), c.h);
        c.denominator = root_.value(json::json_pointer("/system/denominator"), c.denominator);

        const json* point = find("/point");
        if (point) {
            if (!point->is_array()) {
                fail("/point", "continuous problems give the point as coordinates");
            } else {
                for (const auto& v : *point) c.point.push_back(v.get<double>());
                if (c.point.size() != c.field.dim)
                    fail("/point", "dimension mismatch with the field");
            }
        }

        const json* cert = find("/certificate");
        if (cert) {
            if (!cert->is_object() || !cert->contains("expression")) {
                fail("/certificate", "continuous certificates are expressions");
            } else {
                try {
                    c.certificate_expr = cert->at("expression").get<std::string>();
                    parse_expr(*c.certificate_expr);
                } catch (const input_error& e) {
                    fail("/certificate/expression", e.what());
                }
            }
        }
        if (errors_.empty()) spec.continuous = std::move(c);
    }
};

}  // namespace detail

inline ProblemSpec load_spec_json(const json& j) { return detail::SpecResolver(j).resolve(); }

// ---------------------------------------------------------------------------
// Canonical emission
// ---------------------------------------------------------------------------

namespace detail {

inline json emit_dynamics(const Coalgebra& c) {
    json out = json::object();
    for (std::size_t x = 0; x < c.space.size(); ++x) {
        if (!c.defined(x)) continue;
        const FValue& v = c.at(x);
        switch (c.functor.kind) {
            case Endofunctor::Kind::Identity:
                out[c.space.labels[x]] = c.space.labels[std::get<IdValue>(v).elem];
                break;
            case Endofunctor::Kind::Powerset: {
                json arr = json::array();
                for (std::size_t e : std::get<SetValue>(v).elems) arr.push_back(c.space.labels[e]);
                out[c.space.labels[x]] = std::move(arr);
                break;
            }
            case Endofunctor::Kind::Labeled: {
                json arr = json::array();
                for (const auto& [lab, e] : std::get<LabeledValue>(v).edges)
                    arr.push_back(json::array(
                        {c.functor.labels.labels[lab], c.space.labels[e]}));
                out[c.space.labels[x]] = std::move(arr);
                break;
            }
            case Endofunctor::Kind::FinDist: {
                json arr = json::array();
                for (const auto& [e, w] : std::get<DistValue>(v).mass)
                    arr.push_back(json::array({c.space.labels[e], rat_to_string(w)}));
                out[c.space.labels[x]] = std::move(arr);
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

inline json emit_spec(const ProblemSpec& spec) {
    json out;
    out["$schema"] = kSchemaId;
    out["name"] = spec.name;

    json opts;
    opts["seed"] = spec.options.seed;
    if (spec.options.horizon) opts["horizon"] = *spec.options.horizon;
    opts["maxSize"] = spec.options.max_size;
    opts["distDenominator"] = spec.options.dist_denominator;
    opts["curves"] = spec.options.curves;
    opts["oracleCrosscheck"] = spec.options.oracle_crosscheck;
    opts["eps"] = spec.options.eps;
    if (spec.options.tol) opts["tol"] = *spec.options.tol;
    opts["samples"] = spec.options.samples;
    opts["steps"] = spec.options.steps;
    out["options"] = std::move(opts);

    if (spec.type == ProblemSpec::SystemType::VectorField) {
        const ContinuousProblem& c = *spec.continuous;
        json system;
        system["type"] = "vectorfield";
        system["components"] = c.components;
        if (!c.box.empty()) {
            json box = json::array();
            for (const auto& a : c.box) {
                json axis;
                axis["lo"] = a.lo;
                axis["hi"] = a.hi;
                axis["cells"] = a.cells;
                box.push_back(std::move(axis));
            }
            system["box"] = std::move(box);
        }
        system["h"] = c.h;
        system["denominator"] = c.denominator;
        out["system"] = std::move(system);
        if (!c.point.empty()) out["point"] = c.point;
        if (c.certificate_expr) out["certificate"] = {{"expression", *c.certificate_expr}};
        return out;
    }

    const DynamicSetting& s = *spec.setting;
    json setting;
    json time;
    if (s.time.kind == TimeMonoid::Kind::Naturals) {
        time["kind"] = "naturals";
        time["horizon"] = s.time.tick_count - 1;
    } else {
        time["kind"] = "grid";
        time["step"] = rat_to_string(s.time.step);
        time["horizon"] = rat_to_string(s.time.horizon());
    }
    setting["time"] = std::move(time);

    json functor;
    switch (s.functor.kind) {
        case Endofunctor::Kind::Identity: functor["kind"] = "identity"; break;
        case Endofunctor::Kind::Powerset: functor["kind"] = "powerset"; break;
        case Endofunctor::Kind::FinDist: functor["kind"] = "findist"; break;
        case Endofunctor::Kind::Labeled:
            functor["kind"] = "labeled";
            if (s.functor.labels == s.time.carrier_space())
                functor["labels"] = "time";
            else
                functor["labels"] = s.functor.labels.labels;
            break;
    }
    setting["functor"] = std::move(functor);
    setting["space"] = s.space.labels;

    json metric = json::array();
    for (std::size_t i = 0; i < s.space.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < s.space.size(); ++j)
            row.push_back(rat_to_string(s.metric(i, j)));
        metric.push_back(std::move(row));
    }
    setting["metric"] = std::move(metric);

    json scale = json::array();
    for (const Rat& v : s.scale.values) scale.push_back(rat_to_string(v));
    setting["scale"] = std::move(scale);

    if (s.stable == stationary_system(s.functor, scale_space(s.scale)))
        setting["stable"] = "stationary";
    else
        setting["stable"] = detail::emit_dynamics(s.stable);
    setting["monoidal"] = s.monoidal;
    setting["converse"] = s.converse;
    out["setting"] = std::move(setting);

    json system;
    if (spec.type == ProblemSpec::SystemType::Flow) {
        system["type"] = "flow";
        json step = json::object();
        for (std::size_t x = 0; x < s.space.size(); ++x)
            step[s.space.labels[x]] = s.space.labels[spec.flow->step_map[x]];
        system["step"] = std::move(step);
    } else {
        system["type"] = "coalgebra";
        system["dynamics"] = detail::emit_dynamics(*spec.system);
    }
    out["system"] = std::move(system);

    if (spec.point) out["point"] = s.space.labels[*spec.point];
    if (spec.certificate) {
        json cert;
        json values = json::object();
        for (std::size_t x = 0; x < s.space.size(); ++x)
            values[s.space.labels[x]] = rat_to_string(spec.certificate->v.values[x]);
        cert["values"] = std::move(values);
        const auto emit_bound = [&](const ClassK& k) {
            json arr = json::array();
            for (std::size_t i : k.perm) arr.push_back(rat_to_string(s.scale.values[i]));
            return arr;
        };
        if (spec.certificate->lower) cert["lower"] = emit_bound(*spec.certificate->lower);
        if (spec.certificate->upper) cert["upper"] = emit_bound(*spec.certificate->upper);
        out["certificate"] = std::move(cert);
    }
    return out;
}

/// Canonical text: sorted keys (nlohmann objects are key-sorted), two-space
/// indent, rationals as "p/q".
inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace lyapcoalg
