#pragma once

#include <vector>

#include "abc/engine.hpp"

namespace abc {

/// One independent simulation in a batch.
struct SweepCase {
  Topology topology;
  SimTime duration = 0;
  std::uint64_t seed = 0;
  RunOptions options;
};

/// Runs every case on the calling thread, in order. Reference implementation.
std::vector<MetricsLog> run_sweep_serial(const std::vector<SweepCase>& cases);

/// Runs cases concurrently, one simulation per worker, results in input
/// order. Identical to run_sweep_serial. `threads` = 0 uses the default.
std::vector<MetricsLog> run_sweep(const std::vector<SweepCase>& cases, int threads = 0);

}  // namespace abc
