#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace reltrace {

/// Neumaier-compensated running sum. Order-dependent like any float sum,
/// so callers fix the order; the compensation removes most of the
/// rounding growth for long alternating series.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Fixed-order compensated sum of a span.
double compensated_sum(std::span<const double> values);

/// Worker count: RELTRACE_THREADS if set and positive, otherwise the
/// hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) on thread_count() workers. Each index is
/// executed exactly once; results must be written to per-index slots so
/// the outcome does not depend on scheduling. The first exception thrown
/// by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// n evenly spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace reltrace
