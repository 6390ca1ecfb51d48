#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lyapcoalg/core.hpp"
#include "lyapcoalg/enumerate.hpp"

namespace lyapcoalg {

// ---------------------------------------------------------------------------
// Endofunctors and their values
// ---------------------------------------------------------------------------

/// The structure functor a system is specified against. Labeled carries its
/// (nonempty) label set.
struct Endofunctor {
    enum class Kind { Identity, Powerset, Labeled, FinDist };

    Kind kind = Kind::Identity;
    FiniteSpace labels;  // Labeled only

    static Endofunctor identity() { return {Kind::Identity, {}}; }
    static Endofunctor powerset() { return {Kind::Powerset, {}}; }
    static Endofunctor labeled(FiniteSpace label_set) {
        if (label_set.size() == 0) throw input_error("label set must be nonempty");
        return {Kind::Labeled, std::move(label_set)};
    }
    static Endofunctor findist() { return {Kind::FinDist, {}}; }

    bool operator==(const Endofunctor& other) const {
        return kind == other.kind && labels == other.labels;
    }
};

struct IdValue {
    std::size_t elem = 0;
    bool operator==(const IdValue&) const = default;
};

struct SetValue {
    std::vector<std::size_t> elems;  // sorted, unique
    bool operator==(const SetValue&) const = default;
};

struct LabeledValue {
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // (label, elem), sorted, unique
    bool operator==(const LabeledValue&) const = default;
};

struct DistValue {
    std::vector<std::pair<std::size_t, Rat>> mass;  // (elem, weight>0), sorted by elem
    bool operator==(const DistValue&) const = default;
};

using FValue = std::variant<IdValue, SetValue, LabeledValue, DistValue>;

inline SetValue make_set(std::vector<std::size_t> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return SetValue{std::move(elems)};
}

inline LabeledValue make_labeled(std::vector<std::pair<std::size_t, std::size_t>> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return LabeledValue{std::move(edges)};
}

inline DistValue make_dist(std::vector<std::pair<std::size_t, Rat>> mass) {
    std::map<std::size_t, Rat> acc;
    for (const auto& [e, w] : mass) acc[e] += w;
    DistValue out;
    Rat total(0);
    for (const auto& [e, w] : acc) {
        if (w < Rat(0)) throw input_error("distribution weight must be non-negative");
        if (w == Rat(0)) continue;
        out.mass.emplace_back(e, w);
        total += w;
    }
    if (total != Rat(1)) throw input_error("distribution weights must sum to 1");
    return out;
}

inline DistValue dirac(std::size_t elem) { return DistValue{{{elem, Rat(1)}}}; }

/// Well-formedness over a carrier of the given size.
inline void fvalue_validate(const Endofunctor& f, const FValue& v, std::size_t carrier) {
    const auto check_elem = [&](std::size_t e) {
        if (e >= carrier) throw input_error("functor value references element outside carrier");
    };
    switch (f.kind) {
        case Endofunctor::Kind::Identity: {
            const auto* id = std::get_if<IdValue>(&v);
            if (!id) throw input_error("value does not match the identity functor");
            check_elem(id->elem);
            break;
        }
        case Endofunctor::Kind::Powerset: {
            const auto* s = std::get_if<SetValue>(&v);
            if (!s) throw input_error("value does not match the powerset functor");
            for (std::size_t e : s->elems) check_elem(e);
            break;
        }
        case Endofunctor::Kind::Labeled: {
            const auto* l = std::get_if<LabeledValue>(&v);
            if (!l) throw input_error("value does not match the labeled functor");
            for (const auto& [lab, e] : l->edges) {
                if (lab >= f.labels.size()) throw input_error("edge label outside label set");
                check_elem(e);
            }
            break;
        }
        case Endofunctor::Kind::FinDist: {
            const auto* d = std::get_if<DistValue>(&v);
            if (!d) throw input_error("value does not match the distribution functor");
            Rat total(0);
            for (const auto& [e, w] : d->mass) {
                check_elem(e);
                if (w <= Rat(0)) throw input_error("distribution weights must be positive");
                total += w;
            }
            if (total != Rat(1)) throw input_error("distribution weights must sum to 1");
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Functorial action, laxator, stationary values
// ---------------------------------------------------------------------------

/// Action on maps: applies g elementwise; distributions are pushed forward
/// with merged preimage weights added.
inline FValue fmap(const Endofunctor& f, const std::vector<std::size_t>& g, const FValue& v) {
    const auto apply = [&](std::size_t e) {
        if (e >= g.size()) throw input_error("fmap: element outside the map's domain");
        return g[e];
    };
    switch (f.kind) {
        case Endofunctor::Kind::Identity:
            return IdValue{apply(std::get<IdValue>(v).elem)};
        case Endofunctor::Kind::Powerset: {
            std::vector<std::size_t> image;
            for (std::size_t e : std::get<SetValue>(v).elems) image.push_back(apply(e));
            return make_set(std::move(image));
        }
        case Endofunctor::Kind::Labeled: {
            std::vector<std::pair<std::size_t, std::size_t>> image;
            for (const auto& [lab, e] : std::get<LabeledValue>(v).edges)
                image.emplace_back(lab, apply(e));
            return make_labeled(std::move(image));
        }
        case Endofunctor::Kind::FinDist: {
            std::map<std::size_t, Rat> acc;
            for (const auto& [e, w] : std::get<DistValue>(v).mass) acc[apply(e)] += w;
            DistValue out;
            for (const auto& [e, w] : acc) out.mass.emplace_back(e, w);
            return out;
        }
    }
    throw input_error("unreachable functor kind");
}

/// Combines a value over X with a value over Y into one over X x Y
/// (row-major pair indices, second carrier size supplied by the caller).
inline FValue laxator(const Endofunctor& f, const FValue& vx, const FValue& vy,
                      std::size_t y_size) {
    switch (f.kind) {
        case Endofunctor::Kind::Identity:
            return IdValue{pair_index(std::get<IdValue>(vx).elem, std::get<IdValue>(vy).elem,
                                      y_size)};
        case Endofunctor::Kind::Powerset: {
            std::vector<std::size_t> prod;
            for (std::size_t a : std::get<SetValue>(vx).elems)
                for (std::size_t b : std::get<SetValue>(vy).elems)
                    prod.push_back(pair_index(a, b, y_size));
            return make_set(std::move(prod));
        }
        case Endofunctor::Kind::Labeled: {
            // label-matched join
            std::vector<std::pair<std::size_t, std::size_t>> joined;
            for (const auto& [la, a] : std::get<LabeledValue>(vx).edges)
                for (const auto& [lb, b] : std::get<LabeledValue>(vy).edges)
                    if (la == lb) joined.emplace_back(la, pair_index(a, b, y_size));
            return make_labeled(std::move(joined));
        }
        case Endofunctor::Kind::FinDist: {
            DistValue out;
            for (const auto& [a, wa] : std::get<DistValue>(vx).mass)
                for (const auto& [b, wb] : std::get<DistValue>(vy).mass)
                    out.mass.emplace_back(pair_index(a, b, y_size), wa * wb);
            std::sort(out.mass.begin(), out.mass.end(),
                      [](const auto& p, const auto& q) { return p.first < q.first; });
            return out;
        }
    }
    throw input_error("unreachable functor kind");
}

/// fmap along a partially defined map. Point-shaped values (identity images,
/// Dirac masses) become absent when their image is undefined; set-shaped
/// values drop the undefined elements. This is the horizon-truncation
/// semantics for maps like time addition that leave the carrier.
inline std::optional<FValue> fmap_partial(const Endofunctor& f,
                                          const std::vector<std::optional<std::size_t>>& g,
                                          const FValue& v) {
    const auto apply = [&](std::size_t e) -> std::optional<std::size_t> {
        if (e >= g.size()) throw input_error("fmap: element outside the map's domain");
        return g[e];
    };
    switch (f.kind) {
        case Endofunctor::Kind::Identity: {
            const auto img = apply(std::get<IdValue>(v).elem);
            if (!img) return std::nullopt;
            return FValue{IdValue{*img}};
        }
        case Endofunctor::Kind::Powerset: {
            std::vector<std::size_t> image;
            for (std::size_t e : std::get<SetValue>(v).elems)
                if (const auto img = apply(e)) image.push_back(*img);
            // a nonempty set whose every element left the carrier is absent,
            // not empty, matching the clock's truncation convention
            if (image.empty() && !std::get<SetValue>(v).elems.empty()) return std::nullopt;
            return FValue{make_set(std::move(image))};
        }
        case Endofunctor::Kind::Labeled: {
            std::vector<std::pair<std::size_t, std::size_t>> image;
            for (const auto& [lab, e] : std::get<LabeledValue>(v).edges)
                if (const auto img = apply(e)) image.emplace_back(lab, *img);
            if (image.empty() && !std::get<LabeledValue>(v).edges.empty()) return std::nullopt;
            return FValue{make_labeled(std::move(image))};
        }
        case Endofunctor::Kind::FinDist: {
            std::map<std::size_t, Rat> acc;
            for (const auto& [e, w] : std::get<DistValue>(v).mass) {
                const auto img = apply(e);
                if (!img) return std::nullopt;  // mass cannot silently vanish
                acc[*img] += w;
            }
            DistValue out;
            for (const auto& [e, w] : acc) out.mass.emplace_back(e, w);
            return FValue{std::move(out)};
        }
    }
    throw input_error("unreachable functor kind");
}

/// The standing-still value at a point: identity image, singleton, all-labels
/// edge fan, or Dirac mass.
inline FValue stationary_value(const Endofunctor& f, std::size_t x) {
    switch (f.kind) {
        case Endofunctor::Kind::Identity:
            return IdValue{x};
        case Endofunctor::Kind::Powerset:
            return SetValue{{x}};
        case Endofunctor::Kind::Labeled: {
            LabeledValue v;
            for (std::size_t lab = 0; lab < f.labels.size(); ++lab) v.edges.emplace_back(lab, x);
            return v;
        }
        case Endofunctor::Kind::FinDist:
            return dirac(x);
    }
    throw input_error("unreachable functor kind");
}

// ---------------------------------------------------------------------------
// Orders on functor values over the scale
// ---------------------------------------------------------------------------

/// Comparison structure on F R values (elements are scale positions).
/// The optional explicit table overrides the variant rule; it exists so
/// validators can be exercised against deliberately broken orders.
struct FOrder {
    Endofunctor functor;  // over the scale carrier
    MeasureScale scale;

    /// Identity-over-pairs option: when set, Identity values are read as
    /// pair indices with this second-component size and compared
    /// lexicographically instead of through the scale order.
    std::optional<std::size_t> lexicographic_pair_size;

    struct ExplicitTable {
        std::vector<FValue> values;
        std::vector<bool> leq;  // row-major over values
    };
    std::optional<ExplicitTable> table;
};

inline bool fvalue_is_empty(const FValue& v) {
    if (const auto* s = std::get_if<SetValue>(&v)) return s->elems.empty();
    if (const auto* l = std::get_if<LabeledValue>(&v)) return l->edges.empty();
    return false;
}

/// Variant comparison rule. Powerset and Labeled use the literal
/// universally-quantified rule (so empty sets compare vacuously true);
/// FinDist compares by mass below every threshold (a distribution is
/// smaller when it sits closer to 0).
inline bool fvalue_leq(const FOrder& order, const FValue& u, const FValue& v) {
    if (order.table) {
        const auto& tbl = *order.table;
        std::optional<std::size_t> iu, iv;
        for (std::size_t i = 0; i < tbl.values.size(); ++i) {
            if (tbl.values[i] == u) iu = i;
            if (tbl.values[i] == v) iv = i;
        }
        if (!iu || !iv) throw input_error("value missing from explicit order table");
        return tbl.leq[*iu * tbl.values.size() + *iv];
    }
    switch (order.functor.kind) {
        case Endofunctor::Kind::Identity: {
            const std::size_t a = std::get<IdValue>(u).elem;
            const std::size_t b = std::get<IdValue>(v).elem;
            if (order.lexicographic_pair_size) {
                const auto [a1, a2] = unpair_index(a, *order.lexicographic_pair_size);
                const auto [b1, b2] = unpair_index(b, *order.lexicographic_pair_size);
                return a1 < b1 || (a1 == b1 && a2 <= b2);
            }
            return a <= b;
        }
        case Endofunctor::Kind::Powerset: {
            for (std::size_t a : std::get<SetValue>(u).elems)
                for (std::size_t b : std::get<SetValue>(v).elems)
                    if (a > b) return false;
            return true;
        }
        case Endofunctor::Kind::Labeled: {
            for (const auto& [la, a] : std::get<LabeledValue>(u).edges)
                for (const auto& [lb, b] : std::get<LabeledValue>(v).edges)
                    if (a > b) return false;
            return true;
        }
        case Endofunctor::Kind::FinDist: {
            const auto& mu = std::get<DistValue>(u).mass;
            const auto& nv = std::get<DistValue>(v).mass;
            const std::size_t n = order.scale.size();
            Rat cu(0), cv(0);
            std::size_t pu = 0, pv = 0;
            for (std::size_t r = 1; r < n; ++r) {
                while (pu < mu.size() && mu[pu].first < r) cu += mu[pu++].second;
                while (pv < nv.size() && nv[pv].first < r) cv += nv[pv++].second;
                if (cu < cv) return false;
            }
            return true;
        }
    }
    throw input_error("unreachable functor kind");
}

// ---------------------------------------------------------------------------
// Value enumeration (bounded) for law suites
// ---------------------------------------------------------------------------

struct EnumLimits {
    long long dist_denominator = 4;
    std::size_t max_values = 4096;  // refuse enumerations beyond this
};

/// Every value of F over a carrier of the given size, within the limits.
inline std::vector<FValue> all_fvalues(const Endofunctor& f, std::size_t carrier,
                                       const EnumLimits& limits = {}) {
    std::vector<FValue> out;
    switch (f.kind) {
        case Endofunctor::Kind::Identity:
            for (std::size_t e = 0; e < carrier; ++e) out.push_back(IdValue{e});
            break;
        case Endofunctor::Kind::Powerset: {
            if ((std::size_t{1} << carrier) > limits.max_values)
                throw input_error("value enumeration exceeds the size guard");
            for (auto& s : all_subsets(carrier)) out.push_back(SetValue{std::move(s)});
            break;
        }
        case Endofunctor::Kind::Labeled: {
            const std::size_t slots = f.labels.size() * carrier;
            if (slots >= 63 || (std::size_t{1} << slots) > limits.max_values)
                throw input_error("value enumeration exceeds the size guard");
            for (const auto& s : all_subsets(slots)) {
                LabeledValue v;
                for (std::size_t slot : s) v.edges.emplace_back(slot / carrier, slot % carrier);
                std::sort(v.edges.begin(), v.edges.end());
                out.push_back(std::move(v));
            }
            break;
        }
        case Endofunctor::Kind::FinDist: {
            for (const auto& weights : all_distributions(carrier, limits.dist_denominator)) {
                DistValue v;
                for (std::size_t e = 0; e < carrier; ++e)
                    if (weights[e] > Rat(0)) v.mass.emplace_back(e, weights[e]);
                out.push_back(std::move(v));
            }
            if (out.size() > limits.max_values)
                throw input_error("value enumeration exceeds the size guard");
            break;
        }
    }
    return out;
}

/// Point-form values: the stationary image of each carrier point, plus the
/// per-label singletons for the set-valued variants. This is the fragment on
/// which the lifted comparison rules behave like the scale order.
inline std::vector<FValue> point_form_fvalues(const Endofunctor& f, std::size_t carrier) {
    std::vector<FValue> out;
    for (std::size_t x = 0; x < carrier; ++x) out.push_back(stationary_value(f, x));
    if (f.kind == Endofunctor::Kind::Labeled) {
        for (std::size_t lab = 0; lab < f.labels.size(); ++lab)
            for (std::size_t x = 0; x < carrier; ++x)
                out.push_back(LabeledValue{{{lab, x}}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Law suites
// ---------------------------------------------------------------------------

struct LawResult {
    std::string law;
    bool pass = true;
    std::size_t cases = 0;
    std::string counterexample;
};

struct LawReport {
    std::vector<LawResult> laws;

    bool all_pass() const {
        return std::all_of(laws.begin(), laws.end(), [](const LawResult& r) { return r.pass; });
    }
    const LawResult* find(const std::string& name) const {
        for (const auto& r : laws)
            if (r.law == name) return &r;
        return nullptr;
    }
};

namespace detail {

template <typename WitnessFn>
inline void record(LawResult& r, bool ok, WitnessFn&& witness) {
    ++r.cases;
    if (!ok && r.pass) {
        r.pass = false;
        r.counterexample = witness();
    }
}

}  // namespace detail

/// Exhaustive small-size suite: laxator associativity, stationary
/// compatibility with the laxator, unit neutrality, and order preservation
/// on point-form values, plus functoriality and laxator naturality.
inline LawReport check_monoidal_laws(const Endofunctor& f, std::size_t max_size,
                                     const MeasureScale& scale, const EnumLimits& limits = {}) {
    if (max_size == 0 || max_size > 4)
        throw input_error("law suite refused: max size must be between 1 and 4");

    LawReport report;
    LawResult assoc{"laxator-associativity", true, 0, ""};
    LawResult compat{"stationary-compatibility", true, 0, ""};
    LawResult unit{"unit-neutrality", true, 0, ""};
    LawResult order{"order-preservation", true, 0, ""};
    LawResult fid{"functor-identity", true, 0, ""};
    LawResult fcomp{"functor-composition", true, 0, ""};
    LawResult nat{"laxator-naturality", true, 0, ""};

    std::vector<std::vector<FValue>> values_by_size(max_size + 1);
    for (std::size_t s = 1; s <= max_size; ++s) values_by_size[s] = all_fvalues(f, s, limits);

    // laxator associativity: both bracketings agree on the flattened triple
    // product (row-major pairing makes the re-association bijection the
    // identity on indices).
    for (std::size_t sx = 1; sx <= max_size; ++sx)
        for (std::size_t sy = 1; sy <= max_size; ++sy)
            for (std::size_t sz = 1; sz <= max_size; ++sz) {
                const auto witness = [&] {
                    return "sizes (" + std::to_string(sx) + "," + std::to_string(sy) + "," +
                           std::to_string(sz) + ")";
                };
                for (const auto& u : values_by_size[sx])
                    for (const auto& v : values_by_size[sy])
                        for (const auto& w : values_by_size[sz]) {
                            const FValue left = laxator(f, laxator(f, u, v, sy), w, sz);
                            const FValue right = laxator(f, u, laxator(f, v, w, sz), sy * sz);
                            detail::record(assoc, left == right, witness);
                        }
            }

    // stationary compatibility: 0_A (x) 0_B = 0_{A x B}
    for (std::size_t sa = 1; sa <= max_size; ++sa)
        for (std::size_t sb = 1; sb <= max_size; ++sb)
            for (std::size_t a = 0; a < sa; ++a)
                for (std::size_t b = 0; b < sb; ++b) {
                    const FValue lhs =
                        laxator(f, stationary_value(f, a), stationary_value(f, b), sb);
                    const FValue rhs = stationary_value(f, pair_index(a, b, sb));
                    detail::record(compat, lhs == rhs, [&] {
                        return "at (" + std::to_string(a) + "," + std::to_string(b) + ")";
                    });
                }

    // unit neutrality: pairing with the stationary value on the one-point
    // space is invisible after the unit isomorphisms (again identities on
    // flattened indices).
    const FValue unit_value = stationary_value(f, 0);
    for (std::size_t sx = 1; sx <= max_size; ++sx)
        for (const auto& v : values_by_size[sx]) {
            const FValue left = laxator(f, unit_value, v, sx);
            const FValue right = laxator(f, v, unit_value, 1);
            detail::record(unit, left == v && right == v,
                           [&] { return "size " + std::to_string(sx); });
        }

    // order preservation: pointwise-smaller maps into the scale stay smaller
    // after applying the functor, compared on point-form values.
    for (std::size_t sa = 1; sa <= max_size; ++sa) {
        const auto maps = all_functions(sa, scale.size());
        const auto points = point_form_fvalues(f, sa);
        const FOrder ord{f, scale, std::nullopt, std::nullopt};
        const auto witness = [&] { return "size " + std::to_string(sa); };
        for (const auto& g1 : maps)
            for (const auto& g2 : maps) {
                bool pointwise = true;
                for (std::size_t a = 0; a < sa; ++a)
                    if (g1[a] > g2[a]) {
                        pointwise = false;
                        break;
                    }
                if (!pointwise) continue;
                for (const auto& w : points)
                    detail::record(order, fvalue_leq(ord, fmap(f, g1, w), fmap(f, g2, w)),
                                   witness);
            }
    }

    // functor identity law
    for (std::size_t sx = 1; sx <= max_size; ++sx) {
        std::vector<std::size_t> ident(sx);
        for (std::size_t i = 0; i < sx; ++i) ident[i] = i;
        for (const auto& v : values_by_size[sx])
            detail::record(fid, fmap(f, ident, v) == v,
                           [&] { return "size " + std::to_string(sx); });
    }

    // functor composition law
    const std::size_t comp_size = std::min<std::size_t>(max_size, 3);
    for (std::size_t sx = 1; sx <= comp_size; ++sx)
        for (std::size_t sy = 1; sy <= comp_size; ++sy)
            for (std::size_t sz = 1; sz <= comp_size; ++sz) {
                const auto witness = [&] {
                    return "sizes (" + std::to_string(sx) + "," + std::to_string(sy) + "," +
                           std::to_string(sz) + ")";
                };
                for (const auto& h : all_functions(sx, sy))
                    for (const auto& g : all_functions(sy, sz)) {
                        std::vector<std::size_t> gh(sx);
                        for (std::size_t i = 0; i < sx; ++i) gh[i] = g[h[i]];
                        for (const auto& v : values_by_size[sx])
                            detail::record(fcomp, fmap(f, gh, v) == fmap(f, g, fmap(f, h, v)),
                                           witness);
                    }
            }

    // laxator naturality over independent pairs of maps
    for (std::size_t sa = 1; sa <= comp_size; ++sa)
        for (std::size_t sb = 1; sb <= comp_size; ++sb)
            for (std::size_t sc = 1; sc <= comp_size; ++sc)
                for (std::size_t sd = 1; sd <= comp_size; ++sd) {
                    const auto witness = [&] {
                        return "maps (" + std::to_string(sa) + "->" + std::to_string(sb) +
                               ", " + std::to_string(sc) + "->" + std::to_string(sd) + ")";
                    };
                    for (const auto& p : all_functions(sa, sb))
                        for (const auto& q : all_functions(sc, sd)) {
                            std::vector<std::size_t> pxq(sa * sc);
                            for (std::size_t i = 0; i < sa; ++i)
                                for (std::size_t j = 0; j < sc; ++j)
                                    pxq[pair_index(i, j, sc)] = pair_index(p[i], q[j], sd);
                            std::vector<FValue> mapped_q;
                            mapped_q.reserve(values_by_size[sc].size());
                            for (const auto& v : values_by_size[sc])
                                mapped_q.push_back(fmap(f, q, v));
                            for (const auto& u : values_by_size[sa]) {
                                const FValue pu = fmap(f, p, u);
                                for (std::size_t vi = 0; vi < values_by_size[sc].size(); ++vi) {
                                    const FValue lhs = laxator(f, pu, mapped_q[vi], sd);
                                    const FValue rhs =
                                        fmap(f, pxq, laxator(f, u, values_by_size[sc][vi], sc));
                                    detail::record(nat, lhs == rhs, witness);
                                }
                            }
                        }
                }

    report.laws = {assoc, compat, unit, order, fid, fcomp, nat};
    return report;
}

/// Reflexivity/transitivity scan of an order on F R values. Reflexivity is
/// demanded on point-form values; failures elsewhere are inherent to the
/// literal universally-quantified rule and reported as notes. Comparisons
/// involving the empty set are flagged, and transitivity failures whose
/// middle value is empty count as flagged notes rather than violations.
inline ValidationReport forder_laws(const FOrder& order, const EnumLimits& limits = {}) {
    ValidationReport report;

    std::vector<FValue> values;
    bool exhaustive = true;
    if (order.table) {
        values = order.table->values;
    } else {
        EnumLimits bounded = limits;
        bounded.max_values = std::min<std::size_t>(bounded.max_values, 512);
        try {
            values = all_fvalues(order.functor, order.scale.size(), bounded);
        } catch (const input_error&) {
            values = point_form_fvalues(order.functor, order.scale.size());
            exhaustive = false;
        }
    }
    if (!exhaustive)
        report.note("order-enumeration", "universe too large; checked point-form values only");

    const std::size_t n = values.size();
    std::vector<bool> leq(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) leq[i * n + j] = fvalue_leq(order, values[i], values[j]);

    const auto is_point_form = [&](const FValue& v) {
        if (const auto* s = std::get_if<SetValue>(&v)) return s->elems.size() == 1;
        if (const auto* l = std::get_if<LabeledValue>(&v)) {
            if (l->edges.empty()) return false;
            const std::size_t first = l->edges.front().second;
            return std::all_of(l->edges.begin(), l->edges.end(),
                               [&](const auto& e) { return e.second == first; });
        }
        return true;  // Identity and FinDist values are point-like for reflexivity
    };

    std::size_t empty_comparisons = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (leq[i * n + i]) continue;
        if (is_point_form(values[i]))
            report.fail("order-reflexivity", "value #" + std::to_string(i));
        else
            report.note("order-reflexivity",
                        "literal rule is not reflexive on mixed value #" + std::to_string(i));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!leq[i * n + j]) continue;
            if (fvalue_is_empty(values[i]) || fvalue_is_empty(values[j])) ++empty_comparisons;
            for (std::size_t k = 0; k < n; ++k) {
                if (!leq[j * n + k] || leq[i * n + k]) continue;
                const std::string witness = "(" + std::to_string(i) + "," + std::to_string(j) +
                                            "," + std::to_string(k) + ")";
                if (fvalue_is_empty(values[j]))
                    report.note("order-transitivity", "via empty middle value " + witness);
                else
                    report.fail("order-transitivity", "witness triple " + witness);
            }
        }
    if (empty_comparisons > 0)
        report.note("order-empty-values",
                    std::to_string(empty_comparisons) + " comparisons involved an empty value");
    return report;
}

}  // namespace lyapcoalg
