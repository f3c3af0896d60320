#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "cubeconc/error.hpp"

namespace cubeconc {

// A point of the Boolean cube {0,1}^n, n <= 63. Coordinates are numbered
// 1..n and packed into the index sum_k x_k * 2^(n-k): x_1 is the most
// significant bit. Under this convention the points sharing a prefix
// (x_1,...,x_k) occupy one contiguous index block, and the bit-string form
// "x_1 x_2 ... x_n" is just the index in binary.
class CubePoint {
public:
    static constexpr uint32_t kMaxDimension = 63;

    CubePoint() = default;

    CubePoint(uint32_t n, uint64_t index) : n_(n), index_(index) {
        if (n == 0 || n > kMaxDimension)
            fail(ErrorCode::invalid_parameter,
                 "cube point dimension must be in [1, 63], got " + std::to_string(n));
        if (index >> n)
            fail(ErrorCode::invalid_parameter,
                 "cube point index " + std::to_string(index) + " out of range for n=" +
                     std::to_string(n));
    }

    static CubePoint from_bits(std::string_view bits) {
        if (bits.empty() || bits.size() > kMaxDimension)
            fail(ErrorCode::invalid_parameter, "bit string length must be in [1, 63]");
        uint64_t idx = 0;
        for (char c : bits) {
            if (c != '0' && c != '1')
                fail(ErrorCode::invalid_parameter, "bit string may contain only 0 and 1");
            idx = (idx << 1) | uint64_t(c == '1');
        }
        return CubePoint(uint32_t(bits.size()), idx);
    }

    static CubePoint zero(uint32_t n) { return CubePoint(n, 0); }
    static CubePoint ones(uint32_t n) { return CubePoint(n, mask(n)); }

    uint32_t n() const { return n_; }
    uint64_t index() const { return index_; }

    // x_k, 1-indexed.
    int bit(uint32_t k) const {
        check_coord(k);
        return int((index_ >> (n_ - k)) & 1u);
    }

    CubePoint with_bit(uint32_t k, int value) const {
        check_coord(k);
        const uint64_t m = uint64_t(1) << (n_ - k);
        return CubePoint(n_, value ? (index_ | m) : (index_ & ~m));
    }

    // (x_1,...,x_k)
    CubePoint prefix(uint32_t k) const {
        check_coord(k);
        return CubePoint(k, index_ >> (n_ - k));
    }

    CubePoint complement() const { return CubePoint(n_, ~index_ & mask(n_)); }

    uint32_t weight() const { return uint32_t(std::popcount(index_)); }

    std::string bits() const {
        std::string s(n_, '0');
        for (uint32_t k = 1; k <= n_; ++k) s[k - 1] = char('0' + bit(k));
        return s;
    }

    friend bool operator==(const CubePoint&, const CubePoint&) = default;

    static uint64_t mask(uint32_t n) { return (n >= 64) ? ~uint64_t(0) : ((uint64_t(1) << n) - 1); }

private:
    void check_coord(uint32_t k) const {
        if (k == 0 || k > n_)
            fail(ErrorCode::invalid_parameter,
                 "coordinate " + std::to_string(k) + " out of range for n=" + std::to_string(n_));
    }

    uint32_t n_ = 0;
    uint64_t index_ = 0;
};

// Hamming distance; both points must live in the same cube.
inline uint32_t hamming(const CubePoint& x, const CubePoint& y) {
    if (x.n() != y.n())
        fail(ErrorCode::dimension_mismatch,
             "hamming distance needs equal dimensions, got " + std::to_string(x.n()) + " and " +
                 std::to_string(y.n()));
    return uint32_t(std::popcount(x.index() ^ y.index()));
}

} // namespace cubeconc
