#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace ratnorm {

/// Worker count: RATIO_NORMAL_THREADS when set to a positive integer, the
/// hardware concurrency otherwise.
unsigned thread_count();

/// Runs body(i) for i in [0, n), spreading contiguous blocks of indices over
/// thread_count() workers. Results must be written to per-index storage;
/// the first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// SplitMix64 finaliser; stream = derive_seed(seed, index) gives independent
/// per-chunk seeds so that output does not depend on the worker count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace ratnorm
