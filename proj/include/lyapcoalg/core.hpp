#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lyapcoalg/rational.hpp"

namespace lyapcoalg {

// ---------------------------------------------------------------------------
// Finite state spaces
// ---------------------------------------------------------------------------

/// A finite set of named states. Operations work on positional indices;
/// labels exist for input/output and report readability.
struct FiniteSpace {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> index;

    FiniteSpace() = default;

    explicit FiniteSpace(std::vector<std::string> state_labels) : labels(std::move(state_labels)) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (!index.emplace(labels[i], i).second)
                throw input_error("duplicate state label: " + labels[i]);
        }
    }

    /// Space with labels "0", "1", ..., "n-1".
    static FiniteSpace range(std::size_t n) {
        std::vector<std::string> ls;
        ls.reserve(n);
        for (std::size_t i = 0; i < n; ++i) ls.push_back(std::to_string(i));
        return FiniteSpace(std::move(ls));
    }

    std::size_t size() const { return labels.size(); }

    std::size_t at(const std::string& label) const {
        const auto it = index.find(label);
        if (it == index.end()) throw input_error("unknown state label: " + label);
        return it->second;
    }

    bool operator==(const FiniteSpace& other) const { return labels == other.labels; }
};

/// Cartesian product with row-major indexing: (i, j) -> i * |B| + j.
/// Labels are "(a,b)" so product states stay readable in reports.
inline FiniteSpace product_space(const FiniteSpace& a, const FiniteSpace& b) {
    std::vector<std::string> ls;
    ls.reserve(a.size() * b.size());
    for (const auto& la : a.labels)
        for (const auto& lb : b.labels) ls.push_back("(" + la + "," + lb + ")");
    return FiniteSpace(std::move(ls));
}

inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t b_size) {
    return i * b_size + j;
}
inline std::pair<std::size_t, std::size_t> unpair_index(std::size_t p, std::size_t b_size) {
    return {p / b_size, p % b_size};
}

// ---------------------------------------------------------------------------
// Measurement scale
// ---------------------------------------------------------------------------

/// The measurement object: a finite chain of non-negative rationals whose
/// least element is exactly 0.
struct MeasureScale {
    std::vector<Rat> values;

    MeasureScale() = default;

    explicit MeasureScale(std::vector<Rat> vs) : values(std::move(vs)) {
        if (values.empty()) throw input_error("scale must be nonempty");
        if (values.front() != Rat(0)) throw input_error("scale must start at 0");
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (!(values[i - 1] < values[i]))
                throw input_error("scale values must be strictly increasing");
        }
    }

    static MeasureScale integers_up_to(long long top) {
        std::vector<Rat> vs;
        for (long long v = 0; v <= top; ++v) vs.emplace_back(v);
        return MeasureScale(std::move(vs));
    }

    std::size_t size() const { return values.size(); }
    Rat zero() const { return values.front(); }

    std::optional<std::size_t> index_of(const Rat& v) const {
        const auto it = std::lower_bound(values.begin(), values.end(), v);
        if (it != values.end() && *it == v) return static_cast<std::size_t>(it - values.begin());
        return std::nullopt;
    }

    bool contains(const Rat& v) const { return index_of(v).has_value(); }

    bool operator==(const MeasureScale& other) const { return values == other.values; }
};

/// Message-friendly rational: "3" instead of "3/1".
inline std::string pretty_rat(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return rat_to_string(r);
}

/// The scale viewed as a state space, so systems can live on it.
inline FiniteSpace scale_space(const MeasureScale& scale) {
    std::vector<std::string> ls;
    ls.reserve(scale.size());
    for (const Rat& v : scale.values) ls.push_back(pretty_rat(v));
    return FiniteSpace(std::move(ls));
}

// ---------------------------------------------------------------------------
// Time monoids
// ---------------------------------------------------------------------------

/// Additive time truncated at a horizon. Naturals is the grid with step 1;
/// RationalGrid scales every tick by a fixed positive step. Sums that leave
/// the horizon are reported as absent rather than wrapped.
struct TimeMonoid {
    enum class Kind { Naturals, RationalGrid };

    Kind kind = Kind::Naturals;
    Rat step = Rat(1);
    std::size_t tick_count = 1;  // carrier is {0, step, ..., (tick_count-1)*step}

    static TimeMonoid naturals(std::size_t horizon) {
        if (horizon == 0) throw input_error("time horizon must be positive");
        TimeMonoid t;
        t.kind = Kind::Naturals;
        t.step = Rat(1);
        t.tick_count = horizon + 1;
        return t;
    }

    static TimeMonoid rational_grid(const Rat& step, const Rat& horizon) {
        if (step <= Rat(0) || horizon <= Rat(0))
            throw input_error("grid step and horizon must be positive");
        TimeMonoid t;
        t.kind = Kind::RationalGrid;
        t.step = step;
        const Rat ticks = horizon / step;
        t.tick_count = static_cast<std::size_t>(ticks.numerator() / ticks.denominator()) + 1;
        return t;
    }

    std::size_t size() const { return tick_count; }
    Rat value(std::size_t k) const { return Rat(static_cast<long long>(k)) * step; }
    Rat horizon() const { return value(tick_count - 1); }

    /// t_i (+) t_j, absent when the sum crosses the horizon.
    std::optional<std::size_t> plus(std::size_t i, std::size_t j) const {
        const std::size_t s = i + j;
        if (s >= tick_count) return std::nullopt;
        return s;
    }

    FiniteSpace carrier_space() const {
        std::vector<std::string> ls;
        ls.reserve(tick_count);
        for (std::size_t k = 0; k < tick_count; ++k) ls.push_back(pretty_rat(value(k)));
        return FiniteSpace(std::move(ls));
    }

    bool operator==(const TimeMonoid& other) const {
        return kind == other.kind && step == other.step && tick_count == other.tick_count;
    }
};

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct Violation {
    std::string clause;
    std::string detail;
    bool informational = false;
};

struct ValidationReport {
    std::vector<Violation> entries;

    void fail(std::string clause, std::string detail) {
        entries.push_back({std::move(clause), std::move(detail), false});
    }
    void note(std::string clause, std::string detail) {
        entries.push_back({std::move(clause), std::move(detail), true});
    }
    void merge(const ValidationReport& other) {
        entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    }

    bool valid() const {
        return std::none_of(entries.begin(), entries.end(),
                            [](const Violation& v) { return !v.informational; });
    }
};

/// Associativity and unit laws on every in-horizon combination.
inline ValidationReport monoid_laws(const TimeMonoid& t) {
    ValidationReport report;
    const std::size_t n = t.size();
    for (std::size_t a = 0; a < n; ++a) {
        const auto left = t.plus(0, a);
        const auto right = t.plus(a, 0);
        if (left != a || right != a)
            report.fail("monoid-unit", "0 is not neutral at " + rat_to_string(t.value(a)));
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n && a + b < n; ++b)
            for (std::size_t c = 0; c < n && a + b + c < n; ++c) {
                const auto ab_c = t.plus(*t.plus(a, b), c);
                const auto a_bc = t.plus(a, *t.plus(b, c));
                if (ab_c != a_bc)
                    report.fail("monoid-associativity",
                                "at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                    std::to_string(c) + ")");
            }
    return report;
}

// ---------------------------------------------------------------------------
// Metrics and norms
// ---------------------------------------------------------------------------

/// A distance table E x E -> R. Only non-negativity (via scale membership)
/// and the kernel condition are demanded; symmetry is reported as a note.
struct Metric {
    std::size_t state_count = 0;
    std::vector<Rat> table;  // row-major, state_count * state_count

    Metric() = default;
    Metric(std::size_t n, std::vector<Rat> entries) : state_count(n), table(std::move(entries)) {
        if (table.size() != n * n) throw input_error("metric table must be |E|^2 entries");
    }

    const Rat& operator()(std::size_t i, std::size_t j) const {
        return table[i * state_count + j];
    }

    static Metric absolute_difference(const std::vector<Rat>& coordinates) {
        const std::size_t n = coordinates.size();
        std::vector<Rat> entries;
        entries.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rat d = coordinates[i] - coordinates[j];
                if (d < Rat(0)) d = -d;
                entries.push_back(d);
            }
        return Metric(n, std::move(entries));
    }
};

inline ValidationReport metric_validate(const Metric& d, const FiniteSpace& space,
                                        const MeasureScale& scale) {
    ValidationReport report;
    if (d.state_count != space.size()) {
        report.fail("metric-shape", "table is not over the declared space");
        return report;
    }
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rat& v = d(i, j);
            if (!scale.contains(v))
                report.fail("metric-value-outside-scale", "d(" + space.labels[i] + "," +
                                                              space.labels[j] + ") = " +
                                                              rat_to_string(v));
            if (i == j && v != scale.zero())
                report.fail("metric-nonzero-diagonal", "at " + space.labels[i]);
            if (i != j && v == scale.zero())
                report.fail("metric-zero-off-diagonal",
                            "at (" + space.labels[i] + "," + space.labels[j] + ")");
        }
    bool symmetric = true;
    for (std::size_t i = 0; i < n && symmetric; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (d(i, j) != d(j, i)) {
                symmetric = false;
                break;
            }
    report.note("metric-symmetry", symmetric ? "symmetric" : "not symmetric (allowed)");
    return report;
}

/// A function E -> R, stored as exact scale values per state.
struct StateFunction {
    std::vector<Rat> values;

    bool operator==(const StateFunction& other) const { return values == other.values; }
};

inline void statefunction_validate(const StateFunction& f, const FiniteSpace& space,
                                   const MeasureScale& scale) {
    if (f.values.size() != space.size())
        throw input_error("state function must be total on the space");
    for (const Rat& v : f.values)
        if (!scale.contains(v))
            throw input_error("state function value outside scale: " + rat_to_string(v));
}

/// ||y|| relative to a base point: y -> d(y, x*).
inline StateFunction norm_to_point(const Metric& d, std::size_t xstar) {
    if (xstar >= d.state_count) throw input_error("norm base point outside the space");
    StateFunction f;
    f.values.reserve(d.state_count);
    for (std::size_t y = 0; y < d.state_count; ++y) f.values.push_back(d(y, xstar));
    return f;
}

/// A map A -> E recorded by indices into E.
struct GeneralizedElement {
    FiniteSpace domain;
    std::vector<std::size_t> map;
};

/// ||y|| relative to a generalized element: the minimum of d(y, x(a)) over a.
inline StateFunction norm_to_generalized(const Metric& d, const GeneralizedElement& x) {
    if (x.domain.size() == 0 || x.map.empty())
        throw input_error("norm to empty generalized element undefined");
    if (x.map.size() != x.domain.size())
        throw input_error("generalized element map must be total on its domain");
    StateFunction f;
    f.values.reserve(d.state_count);
    for (std::size_t y = 0; y < d.state_count; ++y) {
        Rat best = d(y, x.map[0]);
        for (std::size_t a = 1; a < x.map.size(); ++a) best = std::min(best, d(y, x.map[a]));
        f.values.push_back(best);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Order automorphisms of the scale
// ---------------------------------------------------------------------------

/// A candidate comparison function: a permutation of scale positions.
/// Valid ones are exactly the order automorphisms fixing 0.
struct ClassK {
    std::vector<std::size_t> perm;  // scale index -> scale index

    static ClassK identity(std::size_t n) {
        ClassK k;
        k.perm.resize(n);
        for (std::size_t i = 0; i < n; ++i) k.perm[i] = i;
        return k;
    }

    Rat apply(const MeasureScale& scale, const Rat& v) const {
        const auto i = scale.index_of(v);
        if (!i) throw input_error("value outside scale: " + rat_to_string(v));
        return scale.values[perm[*i]];
    }

    bool operator==(const ClassK& other) const { return perm == other.perm; }
};

inline bool classk_validate(const ClassK& alpha, const MeasureScale& scale) {
    const std::size_t n = scale.size();
    if (alpha.perm.size() != n) throw input_error("comparison table must cover the scale");
    std::vector<bool> seen(n, false);
    for (const std::size_t image : alpha.perm) {
        if (image >= n) throw input_error("comparison table references a value outside the scale");
        if (seen[image]) return false;  // not a bijection
        seen[image] = true;
    }
    if (alpha.perm[0] != 0) return false;  // must fix 0
    for (std::size_t i = 1; i < n; ++i)
        if (alpha.perm[i - 1] >= alpha.perm[i]) return false;  // strictly order-preserving
    return true;
}

inline ClassK classk_compose(const ClassK& alpha, const ClassK& beta) {
    // (alpha o beta)(i) = alpha(beta(i))
    ClassK out;
    out.perm.resize(beta.perm.size());
    for (std::size_t i = 0; i < beta.perm.size(); ++i) out.perm[i] = alpha.perm[beta.perm[i]];
    return out;
}

inline ClassK classk_inverse(const ClassK& alpha) {
    ClassK out;
    out.perm.resize(alpha.perm.size());
    for (std::size_t i = 0; i < alpha.perm.size(); ++i) out.perm[alpha.perm[i]] = i;
    return out;
}

}  // namespace lyapcoalg
