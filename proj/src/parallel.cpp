#include "fraclab/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fraclab {

namespace {
std::atomic<int> g_threads{0};
}

void set_num_threads(int n) { g_threads.store(n); }

int max_threads() {
#ifdef _OPENMP
  int n = g_threads.load();
  return n > 0 ? n : omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> parallel_map(std::size_t nblocks,
                                 const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(nblocks, 0.0);
#ifdef _OPENMP
  const int nt = max_threads();
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (long long i = 0; i < static_cast<long long>(nblocks); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      {
        if (!err) err = std::current_exception();
      }
    }
  }
  if (err) std::rethrow_exception(err);
#else
  for (std::size_t i = 0; i < nblocks; ++i) out[i] = fn(i);
#endif
  return out;
}

std::vector<double> serial_map(std::size_t nblocks,
                               const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(nblocks, 0.0);
  for (std::size_t i = 0; i < nblocks; ++i) out[i] = fn(i);
  return out;
}

} // namespace fraclab
