#pragma once

#include <cmath>
#include <span>

#ifdef __FAST_MATH__
#error "fast-math breaks compensated summation"
#endif

namespace dampwave {

/// Neumaier's variant of Kahan summation. Accumulation order is the call
/// order, so results are reproducible as long as callers feed terms in a
/// fixed order.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

}  // namespace dampwave
