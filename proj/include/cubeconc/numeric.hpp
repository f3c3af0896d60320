#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace cubeconc {

// Neumaier-compensated accumulator. Long reductions over 2^n terms stay
// within a couple of ulps of the exact sum, which the 1e-12 identity
// tolerances rely on. All operations are sign-symmetric, so summing a
// termwise-negated sequence yields the exact negation of the original sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

// Exact binomial coefficient; the result fits in uint64 for n <= 63.
inline uint64_t binomial(uint32_t n, uint32_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 c = 1;
    for (uint32_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return static_cast<uint64_t>(c);
}

} // namespace cubeconc
