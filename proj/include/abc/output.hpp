#pragma once

#include <filesystem>

#include "abc/metrics.hpp"

namespace abc {

/// Writes summary.txt, flows/<id>.csv and routers/<hop>.csv under `dir`.
void write_run_outputs(const MetricsLog& log, const std::filesystem::path& dir, SimTime router_bin);

}  // namespace abc
