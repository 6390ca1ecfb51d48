#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "lyapcoalg/rational.hpp"

namespace lyapcoalg {

/// All functions {0..dom-1} -> {0..cod-1}, as index vectors. cod^dom entries.
inline std::vector<std::vector<std::size_t>> all_functions(std::size_t dom, std::size_t cod) {
    std::vector<std::vector<std::size_t>> out;
    if (cod == 0) return out;  // no functions from a nonempty domain
    std::vector<std::size_t> current(dom, 0);
    while (true) {
        out.push_back(current);
        std::size_t pos = 0;
        while (pos < dom) {
            if (++current[pos] < cod) break;
            current[pos] = 0;
            ++pos;
        }
        if (pos == dom) break;
    }
    return out;
}

/// All subsets of {0..n-1}, each sorted ascending. 2^n entries.
inline std::vector<std::vector<std::size_t>> all_subsets(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    const std::size_t total = static_cast<std::size_t>(1) << n;
    out.reserve(total);
    for (std::size_t mask = 0; mask < total; ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (static_cast<std::size_t>(1) << i)) s.push_back(i);
        out.push_back(std::move(s));
    }
    return out;
}

/// All probability vectors over {0..n-1} whose weights are multiples of 1/q
/// for some q <= max_denominator. Zero entries dropped by callers as needed.
inline std::vector<std::vector<Rat>> all_distributions(std::size_t n,
                                                       long long max_denominator) {
    std::vector<std::vector<Rat>> out;
    std::vector<std::vector<Rat>> seen;
    for (long long q = 1; q <= max_denominator; ++q) {
        // compositions of q into n non-negative parts
        std::vector<long long> parts(n, 0);
        parts[0] = q;
        while (true) {
            std::vector<Rat> dist;
            dist.reserve(n);
            for (std::size_t i = 0; i < n; ++i) dist.emplace_back(parts[i], q);
            bool duplicate = false;
            for (const auto& d : out)
                if (d == dist) {
                    duplicate = true;
                    break;
                }
            if (!duplicate) out.push_back(std::move(dist));

            // next composition: move one unit from the leftmost positive slot
            std::size_t i = 0;
            while (i < n && parts[i] == 0) ++i;
            if (i + 1 >= n) break;
            const long long head = parts[i];
            parts[i] = 0;
            parts[0] = head - 1;
            parts[i + 1] += 1;
        }
    }
    return out;
}

/// All permutations of {0..n-1}. n! entries; callers guard the size.
inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
    std::vector<std::size_t> ident(n);
    for (std::size_t i = 0; i < n; ++i) ident[i] = i;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> p = ident;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace lyapcoalg
