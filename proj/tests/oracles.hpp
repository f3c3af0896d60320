// Brute-force reference implementations used only by tests. Everything here
// works straight off the raw 2^n mass table with naive loops, independent of
// the library's prefix-sum and BFS paths, so agreement is meaningful.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "cubeconc/cube_point.hpp"

namespace oracle {

inline double prefix_mass(std::span<const double> table, uint32_t n, uint32_t len,
                          uint64_t prefix) {
    double m = 0.0;
    for (uint64_t x = 0; x < table.size(); ++x) {
        if ((x >> (n - len)) == prefix) m += table[x];
    }
    return m;
}

inline double marginal_p(std::span<const double> table, uint32_t n, uint32_t k, int bit) {
    double m = 0.0;
    for (uint64_t x = 0; x < table.size(); ++x) {
        if (int((x >> (n - k)) & 1u) == bit) m += table[x];
    }
    return m;
}

// mu(x_k = bit | prefix); quiet NaN when the prefix has zero mass
inline double conditional_p(std::span<const double> table, uint32_t n, uint32_t k,
                            uint64_t prefix, int bit) {
    const double parent = prefix_mass(table, n, k - 1, prefix);
    if (parent <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double child = prefix_mass(table, n, k, (prefix << 1) | uint64_t(bit));
    return child / parent;
}

inline double epsilon(std::span<const double> table, uint32_t n, uint32_t k, uint64_t prefix,
                      int y_bit) {
    return conditional_p(table, n, k, prefix, y_bit) - marginal_p(table, n, k, y_bit);
}

inline double mean_hamming(std::span<const double> table, uint32_t n, uint64_t y) {
    double m = 0.0;
    for (uint64_t x = 0; x < table.size(); ++x) m += table[x] * double(std::popcount(x ^ y));
    return m;
}

inline double centered_mgf(std::span<const double> table, uint32_t n, uint64_t y, double t) {
    const double mean = mean_hamming(table, n, y);
    double v = 0.0;
    for (uint64_t x = 0; x < table.size(); ++x) {
        v += table[x] * std::exp(t * (double(std::popcount(x ^ y)) - mean));
    }
    return v;
}

// mean Hamming distance of the length-k prefix law
inline double prefix_mean(std::span<const double> table, uint32_t n, uint32_t k, uint64_t y) {
    double m = 0.0;
    for (uint32_t i = 1; i <= k; ++i) {
        const int yi = int((y >> (n - i)) & 1u);
        m += marginal_p(table, n, i, 1 - yi);
    }
    return m;
}

// E_k by the displayed formula, everything recomputed from the raw table
inline double error_term(std::span<const double> table, uint32_t n, uint64_t y, uint32_t k,
                         double t) {
    const uint32_t coord = k + 1;
    const int y_next = int((y >> (n - coord)) & 1u);
    const double q = marginal_p(table, n, coord, 1 - y_next);
    const double mk = prefix_mean(table, n, k, y);
    const uint64_t yp = y >> (n - k);
    double integral = 0.0;
    for (uint64_t xp = 0; xp < (uint64_t(1) << k); ++xp) {
        const double mass = prefix_mass(table, n, k, xp);
        if (mass <= 0.0) continue;
        const double a = std::exp(t * (double(std::popcount(xp ^ yp)) - mk));
        integral += a * epsilon(table, n, coord, xp, y_next) * mass;
    }
    return std::exp(-t * q) * (1.0 - std::exp(t)) * integral;
}

inline double inductive_bound(std::span<const double> table, uint32_t n, uint64_t y, double t) {
    double bound = std::exp(double(n) * t * t / 2.0);
    for (uint32_t k = 1; k + 1 <= n; ++k) {
        bound += std::exp(double(n - k - 1) * t * t / 2.0) * error_term(table, n, y, k, t);
    }
    return bound;
}

// d(x, A) via the last-coordinate recursion; members are full-length indices
inline uint32_t set_distance_recursive(uint32_t n, uint64_t x,
                                       const std::vector<uint64_t>& members) {
    if (members.empty()) return n + 1; // "infinity" for the recursion
    if (n == 0) return 0;
    std::vector<uint64_t> a0, a1;
    for (uint64_t m : members) {
        if (m & 1u) {
            a1.push_back(m >> 1);
        } else {
            a0.push_back(m >> 1);
        }
    }
    const uint64_t xp = x >> 1;
    const auto& same = (x & 1u) ? a1 : a0;
    const auto& other = (x & 1u) ? a0 : a1;
    const uint32_t d_same = set_distance_recursive(n - 1, xp, same);
    const uint32_t d_other = set_distance_recursive(n - 1, xp, other);
    return std::min(d_same, d_other + 1);
}

inline uint32_t set_distance_direct(uint64_t x, const std::vector<uint64_t>& members) {
    uint32_t best = 64;
    for (uint64_t m : members) best = std::min(best, uint32_t(std::popcount(m ^ x)));
    return best;
}

// concentration function by subset enumeration with per-point distance scans
inline double alpha(std::span<const double> table, uint32_t n, uint32_t eps) {
    const uint32_t cells = uint32_t(1) << n;
    double min_enlarged = 1.0;
    for (uint32_t mask = 1; mask < (1u << cells); ++mask) {
        double mass = 0.0;
        std::vector<uint64_t> members;
        for (uint32_t i = 0; i < cells; ++i) {
            if (mask & (1u << i)) {
                mass += table[i];
                members.push_back(i);
            }
        }
        if (mass < 0.5 - 1e-12) continue;
        double enlarged = 0.0;
        for (uint32_t x = 0; x < cells; ++x) {
            if (set_distance_direct(x, members) <= eps) enlarged += table[x];
        }
        min_enlarged = std::min(min_enlarged, enlarged);
    }
    return 1.0 - min_enlarged;
}

inline double lipschitz_lhs(std::span<const double> table, uint32_t n,
                            const std::vector<uint64_t>& members, double t) {
    double v = 0.0;
    for (uint64_t x = 0; x < table.size(); ++x) {
        v += table[x] * std::exp(t * double(set_distance_direct(x, members)));
    }
    return v;
}

inline double minmax_objective(double c, double t, double a0) {
    const double total = 1.0 / c;
    const double et = std::exp(t);
    const double a1 = total - a0;
    if (a0 <= 0.0) {
        // a0 -> 0: min{1/a0, e^t/a1} -> e^t/a1 and min{1/a1, e^t/a0} -> 1/a1
        return c * (et / a1) + c * (1.0 / a1);
    }
    if (a1 <= 0.0) {
        return c * (et / a0) + c * (1.0 / a0);
    }
    return c * std::min(1.0 / a0, et / a1) + c * std::min(1.0 / a1, et / a0);
}

// grid maximum of c min{1/a0, e^t/a1} + c min{1/a1, e^t/a0} on a0+a1 = 1/c;
// the maximizer sits on a kink, so a coarse pass is refined around its argmax
inline double minmax_grid_max(double c, double t, uint32_t steps) {
    const double total = 1.0 / c;
    double best = 0.0, best_a0 = 0.0;
    for (uint32_t i = 0; i <= steps; ++i) {
        const double a0 = total * double(i) / double(steps);
        const double v = minmax_objective(c, t, a0);
        if (v > best) {
            best = v;
            best_a0 = a0;
        }
    }
    const double lo = std::max(0.0, best_a0 - total / double(steps));
    const double hi = std::min(total, best_a0 + total / double(steps));
    for (uint32_t i = 0; i <= steps; ++i) {
        const double a0 = lo + (hi - lo) * double(i) / double(steps);
        best = std::max(best, minmax_objective(c, t, a0));
    }
    return best;
}

} // namespace oracle
