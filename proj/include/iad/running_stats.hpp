#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "iad/errors.hpp"

namespace iad {

/// Single-pass mean/variance accumulator (Welford/Knuth recurrence).
/// Keeps count, mean and the sum of squared deviations (m2); no history is
/// stored. Variance is the sample (n-1) form.
class RunningStats {
public:
    /// Folds one sample in. Throws InvalidSampleError on NaN/Inf.
    void push(double x) {
        if (!std::isfinite(x)) throw InvalidSampleError("non-finite sample");
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        const double delta2 = x - mean_;
        m2_ += delta * delta2;
        if (m2_ < 0.0) m2_ = 0.0;  // rounding can land a hair below zero
    }

    std::uint64_t count() const noexcept { return count_; }

    /// Mean of the folded samples; 0 while empty (check count()).
    double mean() const noexcept { return mean_; }

    double m2() const noexcept { return m2_; }

    /// Sample variance m2/(count-1). Throws InsufficientHistoryError for count < 2.
    double variance() const {
        if (count_ < 2)
            throw InsufficientHistoryError("variance needs at least 2 samples, have " +
                                           std::to_string(count_));
        return m2_ / static_cast<double>(count_ - 1);
    }

    double stddev() const { return std::sqrt(variance()); }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Arithmetic mean of a full window. Throws InvalidWindowError when empty.
double windowed_mean(std::span<const double> window);

}  // namespace iad
