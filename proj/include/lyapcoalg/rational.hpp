#pragma once

#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lyapcoalg {

/// Exact rational arithmetic used by the whole finite toolkit.
using Rat = boost::rational<long long>;

/// Raised on malformed user input (unknown labels, bad tables, bad numerals).
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Parses "p/q" or a bare integer "p". Normalizes sign and reduces.
inline Rat parse_rat(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            std::size_t used = 0;
            const long long n = std::stoll(text, &used);
            if (used != text.size()) throw input_error("non-rational numeral: " + text);
            return Rat(n);
        }
        std::size_t used_num = 0, used_den = 0;
        const std::string num_text = text.substr(0, slash);
        const std::string den_text = text.substr(slash + 1);
        const long long num = std::stoll(num_text, &used_num);
        const long long den = std::stoll(den_text, &used_den);
        if (used_num != num_text.size() || used_den != den_text.size() || den == 0)
            throw input_error("non-rational numeral: " + text);
        return Rat(num, den);
    } catch (const std::invalid_argument&) {
        throw input_error("non-rational numeral: " + text);
    } catch (const std::out_of_range&) {
        throw input_error("rational numeral out of range: " + text);
    }
}

/// Canonical serialization: always "p/q", reduced, positive denominator.
inline std::string rat_to_string(const Rat& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double rat_to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Rounds to the nearest multiple of 1/denominator. Entry point from
/// floating-point data into the exact core.
inline Rat rat_from_double(double x, long long denominator = (1LL << 20)) {
    if (!std::isfinite(x)) throw input_error("cannot rationalize non-finite value");
    const double scaled = x * static_cast<double>(denominator);
    return Rat(static_cast<long long>(std::llround(scaled)), denominator);
}

}  // namespace lyapcoalg
