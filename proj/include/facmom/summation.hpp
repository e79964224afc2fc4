#pragma once

#include <cmath>
#include <span>

namespace facmom {

/// Compensated (Neumaier) accumulator.
///
/// Event averages must be stable under permutation of the event list; a
/// plain running sum drifts by O(n) ulps, the compensated sum keeps the
/// error near one ulp of the result for the magnitudes handled here.
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

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Compensated sum of a range.
[[nodiscard]] inline double compensated_total(std::span<const double> values) noexcept {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

/// Compensated mean; 0 for an empty range.
[[nodiscard]] inline double compensated_mean(std::span<const double> values) noexcept {
    if (values.empty()) return 0.0;
    return compensated_total(values) / static_cast<double>(values.size());
}

}  // namespace facmom
