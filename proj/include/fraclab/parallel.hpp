#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fraclab {

// Number of worker threads used by block-parallel loops (0 = OpenMP default).
void set_num_threads(int n);
int max_threads();

// Runs fn(block) for block = 0..nblocks-1, possibly in parallel, and returns
// the per-block results in index order. Reductions over the returned vector
// are done serially by the caller, so results do not depend on the thread
// count or schedule.
std::vector<double> parallel_map(std::size_t nblocks,
                                 const std::function<double(std::size_t)>& fn);

// Serial reference path, kept for testing and benchmarking.
std::vector<double> serial_map(std::size_t nblocks,
                               const std::function<double(std::size_t)>& fn);

} // namespace fraclab
