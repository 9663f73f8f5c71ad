#include "abc/sweep.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace abc {

std::vector<MetricsLog> run_sweep_serial(const std::vector<SweepCase>& cases) {
  std::vector<MetricsLog> out;
  out.reserve(cases.size());
  for (const auto& c : cases) out.push_back(run(c.topology, c.duration, c.seed, c.options));
  return out;
}

std::vector<MetricsLog> run_sweep(const std::vector<SweepCase>& cases, int threads) {
  std::vector<MetricsLog> out(cases.size());
  std::vector<std::exception_ptr> errors(cases.size());
  const auto n = static_cast<std::ptrdiff_t>(cases.size());
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& c = cases[static_cast<std::size_t>(i)];
    try {
      out[static_cast<std::size_t>(i)] = run(c.topology, c.duration, c.seed, c.options);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  (void)threads;
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace abc
