#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lyapcoalg/core.hpp"
#include "lyapcoalg/systems.hpp"

namespace lyapcoalg {

// ---------------------------------------------------------------------------
// Expression language
// ---------------------------------------------------------------------------
//
// expr    := term (('+'|'-') term)*
// term    := factor (('*'|'/') factor)*
// factor  := unary ('^' factor)?
// unary   := '-' unary | primary
// primary := number | 'x'<k> | fn '(' expr (',' expr)* ')' | '(' expr ')'
// fn      := exp | sin | cos | min | max

class Expr {
public:
    enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Cos, Min, Max };

    Op op = Op::Const;
    double constant = 0.0;
    std::size_t var = 0;
    std::vector<Expr> args;

    double eval(const std::vector<double>& x) const {
        switch (op) {
            case Op::Const: return constant;
            case Op::Var:
                if (var >= x.size()) throw input_error("expression variable out of range");
                return x[var];
            case Op::Add: return args[0].eval(x) + args[1].eval(x);
            case Op::Sub: return args[0].eval(x) - args[1].eval(x);
            case Op::Mul: return args[0].eval(x) * args[1].eval(x);
            case Op::Div: {
                const double d = args[1].eval(x);
                if (d == 0.0) throw input_error("division by zero in expression");
                return args[0].eval(x) / d;
            }
            case Op::Pow: return std::pow(args[0].eval(x), args[1].eval(x));
            case Op::Neg: return -args[0].eval(x);
            case Op::Exp: return std::exp(args[0].eval(x));
            case Op::Sin: return std::sin(args[0].eval(x));
            case Op::Cos: return std::cos(args[0].eval(x));
            case Op::Min: return std::min(args[0].eval(x), args[1].eval(x));
            case Op::Max: return std::max(args[0].eval(x), args[1].eval(x));
        }
        throw input_error("unreachable expression op");
    }
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(const std::string& text) : text_(text) {}

    Expr parse() {
        Expr e = expression();
        skip_space();
        if (pos_ != text_.size())
            throw input_error("unexpected trailing input in expression: " + text_);
        return e;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr expression() {
        Expr left = term();
        while (true) {
            if (eat('+')) {
                Expr node;
                node.op = Expr::Op::Add;
                node.args = {std::move(left), term()};
                left = std::move(node);
            } else if (eat('-')) {
                Expr node;
                node.op = Expr::Op::Sub;
                node.args = {std::move(left), term()};
                left = std::move(node);
            } else {
                return left;
            }
        }
    }

    Expr term() {
        Expr left = factor();
        while (true) {
            if (eat('*')) {
                Expr node;
                node.op = Expr::Op::Mul;
                node.args = {std::move(left), factor()};
                left = std::move(node);
            } else if (eat('/')) {
                Expr node;
                node.op = Expr::Op::Div;
                node.args = {std::move(left), factor()};
                left = std::move(node);
            } else {
                return left;
            }
        }
    }

    Expr factor() {
        Expr base = unary();
        if (eat('^')) {
            Expr node;
            node.op = Expr::Op::Pow;
            node.args = {std::move(base), factor()};  // right-associative
            return node;
        }
        return base;
    }

    Expr unary() {
        if (eat('-')) {
            Expr node;
            node.op = Expr::Op::Neg;
            node.args = {unary()};
            return node;
        }
        return primary();
    }

    Expr primary() {
        skip_space();
        if (pos_ >= text_.size()) throw input_error("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            if (!eat(')')) throw input_error("missing ')' in expression");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw input_error(std::string("unexpected character '") + c + "' in expression");
    }

    Expr number() {
        std::size_t used = 0;
        const double v = std::stod(text_.substr(pos_), &used);
        pos_ += used;
        Expr e;
        e.op = Expr::Op::Const;
        e.constant = v;
        return e;
    }

    Expr identifier() {
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
            ++end;
        const std::string name = text_.substr(pos_, end - pos_);
        pos_ = end;

        if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
            if (digits) {
                Expr e;
                e.op = Expr::Op::Var;
                const long long k = std::stoll(name.substr(1));
                if (k < 1) throw input_error("variables are numbered from x1");
                e.var = static_cast<std::size_t>(k - 1);
                return e;
            }
        }

        const auto unary_fn = [&](Expr::Op op) {
            if (!eat('(')) throw input_error(name + " needs parentheses");
            Expr e;
            e.op = op;
            e.args = {expression()};
            if (!eat(')')) throw input_error("missing ')' after " + name);
            return e;
        };
        const auto binary_fn = [&](Expr::Op op) {
            if (!eat('(')) throw input_error(name + " needs parentheses");
            Expr e;
            e.op = op;
            Expr first = expression();
            if (!eat(',')) throw input_error(name + " needs two arguments");
            e.args = {std::move(first), expression()};
            if (!eat(')')) throw input_error("missing ')' after " + name);
            return e;
        };

        if (name == "exp") return unary_fn(Expr::Op::Exp);
        if (name == "sin") return unary_fn(Expr::Op::Sin);
        if (name == "cos") return unary_fn(Expr::Op::Cos);
        if (name == "min") return binary_fn(Expr::Op::Min);
        if (name == "max") return binary_fn(Expr::Op::Max);
        throw input_error("unknown identifier in expression: " + name);
    }
};

}  // namespace detail

inline Expr parse_expr(const std::string& text) { return detail::ExprParser(text).parse(); }

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

struct VectorField {
    std::size_t dim = 0;
    std::vector<Expr> components;

    static VectorField parse(const std::vector<std::string>& exprs) {
        VectorField f;
        f.dim = exprs.size();
        for (const auto& e : exprs) f.components.push_back(parse_expr(e));
        return f;
    }

    std::vector<double> eval(const std::vector<double>& x) const {
        if (x.size() != dim) throw input_error("point dimension mismatch");
        std::vector<double> out(dim);
        for (std::size_t i = 0; i < dim; ++i) out[i] = components[i].eval(x);
        return out;
    }
};

struct ScalarField {
    Expr body;

    static ScalarField parse(const std::string& text) { return {parse_expr(text)}; }
    double eval(const std::vector<double>& x) const { return body.eval(x); }
};

// ---------------------------------------------------------------------------
// Runge-Kutta integration
// ---------------------------------------------------------------------------

struct SampledTrajectory {
    double step = 0.0;
    std::vector<std::vector<double>> points;
};

inline std::vector<double> rk4_step(const VectorField& f, const std::vector<double>& x,
                                    double h) {
    const std::size_t n = f.dim;
    const auto add_scaled = [n](const std::vector<double>& a, double s,
                                const std::vector<double>& b) {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
        return out;
    };
    const std::vector<double> k1 = f.eval(x);
    const std::vector<double> k2 = f.eval(add_scaled(x, h / 2, k1));
    const std::vector<double> k3 = f.eval(add_scaled(x, h / 2, k2));
    const std::vector<double> k4 = f.eval(add_scaled(x, h, k3));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return out;
}

inline SampledTrajectory rk4_integrate(const VectorField& f, std::vector<double> x0, double h,
                                       std::size_t steps) {
    if (h <= 0) throw input_error("step size must be positive");
    SampledTrajectory t;
    t.step = h;
    t.points.push_back(x0);
    for (std::size_t k = 0; k < steps; ++k) {
        try {
            x0 = rk4_step(f, x0, h);
        } catch (const input_error& e) {
            std::string at = "(";
            for (std::size_t i = 0; i < x0.size(); ++i)
                at += (i ? ", " : "") + std::to_string(x0[i]);
            throw input_error(std::string(e.what()) + " at point " + at + ")");
        }
        t.points.push_back(x0);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Lie derivative check
// ---------------------------------------------------------------------------

struct LieReport {
    bool pass = true;
    std::vector<double> worst_sample;
    double worst_value = -std::numeric_limits<double>::infinity();
    std::size_t samples = 0;
};

/// Central finite difference of V along the field at each sample:
/// (V(x + eps f(x)) - V(x - eps f(x))) / (2 eps) <= tol everywhere.
inline LieReport lie_derivative_check(const ScalarField& v, const VectorField& f,
                                      const std::vector<std::vector<double>>& samples,
                                      double eps = 1e-5, double tol = 1e-9 + 4e-10) {
    if (eps <= 0 || tol <= 0) throw input_error("eps and tol must be positive");
    LieReport report;
    for (const auto& x : samples) {
        const std::vector<double> fx = f.eval(x);
        std::vector<double> fwd(x), bwd(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            fwd[i] += eps * fx[i];
            bwd[i] -= eps * fx[i];
        }
        const double derivative = (v.eval(fwd) - v.eval(bwd)) / (2 * eps);
        ++report.samples;
        if (derivative > report.worst_value) {
            report.worst_value = derivative;
            report.worst_sample = x;
        }
        if (derivative > tol) report.pass = false;
    }
    return report;
}

inline double default_lie_tolerance(double eps = 1e-5) { return 1e-9 + 4 * eps * eps; }

// ---------------------------------------------------------------------------
// Discretization into the exact toolkit
// ---------------------------------------------------------------------------

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t cells = 0;  // grid points per axis, endpoints included
};

struct DiscretizedSystem {
    FiniteSpace space;
    Coalgebra system;  // identity kind: one RK4 step then nearest-grid projection
    Metric metric;
    MeasureScale scale;
    std::vector<std::vector<double>> points;
    std::vector<std::size_t> clamped_states;  // states whose step left the box
};

/// Grid points, one RK4 step, nearest-point projection with clamping, and a
/// rationalized distance table so the exact pipeline applies. Clamped states
/// are listed so boundary artifacts can be excluded from readings.
inline DiscretizedSystem discretize(const VectorField& f, const std::vector<GridAxis>& box,
                                    double h, long long denominator = (1LL << 20)) {
    if (box.size() != f.dim) throw input_error("box dimension mismatch");
    if (box.empty()) throw input_error("box must be nonempty");
    if (h <= 0) throw input_error("step size must be positive");
    for (const auto& a : box)
        if (a.cells < 2 || a.hi <= a.lo) throw input_error("each axis needs at least two points");

    DiscretizedSystem out;
    std::size_t total = 1;
    for (const auto& a : box) total *= a.cells;

    const auto axis_value = [&](std::size_t axis, std::size_t i) {
        return box[axis].lo +
               (box[axis].hi - box[axis].lo) * static_cast<double>(i) /
                   static_cast<double>(box[axis].cells - 1);
    };

    std::vector<std::string> labels;
    for (std::size_t p = 0; p < total; ++p) {
        std::vector<double> pt(box.size());
        std::size_t rest = p;
        for (std::size_t axis = box.size(); axis-- > 0;) {
            pt[axis] = axis_value(axis, rest % box[axis].cells);
            rest /= box[axis].cells;
        }
        std::string label = "g" + std::to_string(p);
        labels.push_back(std::move(label));
        out.points.push_back(std::move(pt));
    }
    out.space = FiniteSpace(std::move(labels));

    const auto project = [&](const std::vector<double>& x, bool* clamped) {
        std::size_t index = 0;
        for (std::size_t axis = 0; axis < box.size(); ++axis) {
            double v = x[axis];
            if (v < box[axis].lo || v > box[axis].hi) {
                *clamped = true;
                v = std::clamp(v, box[axis].lo, box[axis].hi);
            }
            const double spacing = (box[axis].hi - box[axis].lo) /
                                   static_cast<double>(box[axis].cells - 1);
            const double offset = (v - box[axis].lo) / spacing;
            const std::size_t i = std::min<std::size_t>(
                box[axis].cells - 1,
                static_cast<std::size_t>(std::llround(offset)));
            index = index * box[axis].cells + i;
        }
        return index;
    };

    Coalgebra system{Endofunctor::identity(), out.space, {}};
    for (std::size_t p = 0; p < total; ++p) {
        bool clamped = false;
        const std::size_t target = project(rk4_step(f, out.points[p], h), &clamped);
        if (clamped) out.clamped_states.push_back(p);
        system.dynamics.push_back(IdValue{target});
    }
    out.system = std::move(system);

    // rationalized Euclidean distances
    std::vector<Rat> entries;
    entries.reserve(total * total);
    std::vector<Rat> distinct;
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j < total; ++j) {
            if (i == j) {
                entries.emplace_back(0);
                continue;
            }
            double sq = 0;
            for (std::size_t axis = 0; axis < box.size(); ++axis) {
                const double d = out.points[i][axis] - out.points[j][axis];
                sq += d * d;
            }
            Rat r = rat_from_double(std::sqrt(sq), denominator);
            if (r <= Rat(0)) r = Rat(1, denominator);  // kernel condition under rounding
            entries.push_back(r);
        }
    out.metric = Metric(total, std::move(entries));

    for (const Rat& r : out.metric.table) distinct.push_back(r);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.empty() || distinct.front() != Rat(0)) distinct.insert(distinct.begin(), Rat(0));
    out.scale = MeasureScale(std::move(distinct));
    return out;
}

}  // namespace lyapcoalg
