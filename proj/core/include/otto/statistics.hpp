// statistics.hpp: ensemble mean / standard error helpers

#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace otto {

struct Estimate {
    double mean{0.0};
    double se{0.0};   // standard error of the mean

    Estimate operator+(const Estimate& o) const {
        return {mean + o.mean, std::sqrt(se * se + o.se * o.se)};
    }
    // Number of standard errors separating the mean from zero.
    double z() const { return se > 0.0 ? mean / se : (mean == 0.0 ? 0.0 : HUGE_VAL * (mean > 0 ? 1 : -1)); }
};

// Welford accumulator; order of add() calls fixes the floating-point result.
class RunningStats {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    Estimate estimate() const {
        return {mean_, n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0};
    }

private:
    std::size_t n_{0};
    double mean_{0.0};
    double m2_{0.0};
};

inline Estimate estimate_of(std::span<const double> xs) {
    RunningStats s;
    for (double x : xs) s.add(x);
    return s.estimate();
}

} // namespace otto
