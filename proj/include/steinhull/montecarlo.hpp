#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace steinhull {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Neumaier-compensated sum; result is independent of thread scheduling
/// because callers always feed values in replication order.
double compensated_sum(std::span<const double> values);

/// Sample mean and standard error of the mean (n - 1 denominator).
McEstimate summarize(std::span<const double> values);

/// Number of worker threads used by parallel_fill. 0 means hardware default.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls fn(i) for i in [0, n), splitting the index range over the
/// configured worker threads. fn must be safe to call concurrently and
/// should write only to slot i of any shared output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Fills out[i] = fn(i) for i in [0, n), splitting the index range over the
/// configured worker threads. fn must be safe to call concurrently.
void parallel_fill(std::vector<double>& out, std::size_t n,
                   const std::function<double(std::size_t)>& fn);

}  // namespace steinhull
