#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "abc/engine.hpp"

namespace abc {

/// A parsed run description (see docs/config.md for the file format).
struct Scenario {
  std::string name;
  Topology topology;
  SimTime duration = sec(10);
  std::uint64_t seed = 1;
  RunOptions options;
  SimTime router_bin = msec(100);
  std::optional<std::filesystem::path> output_dir;
};

/// Parses YAML text. Relative trace paths resolve against `base_dir`.
/// Throws ConfigError naming the offending key.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& path);

/// "100ms", "2s", "250us"; a bare number is rejected.
SimTime parse_duration(const std::string& text);
/// "12Mbps", "1.5Gbps", "800kbps", "9600bps".
double parse_rate(const std::string& text);

}  // namespace abc
