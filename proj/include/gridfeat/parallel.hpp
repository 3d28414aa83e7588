#pragma once

#include <cstddef>
#include <functional>

namespace gridfeat {

/// std::thread::hardware_concurrency(), at least 1.
std::size_t default_jobs();

/// Runs fn(0..n-1) on up to `jobs` threads. Tasks are claimed in index
/// order; callers write results into pre-sized slots so output order never
/// depends on scheduling. The first exception thrown by any task is rethrown
/// after all threads join.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace gridfeat
