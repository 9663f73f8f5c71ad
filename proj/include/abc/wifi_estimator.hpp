#pragma once

#include <deque>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "abc/core.hpp"

namespace abc {

/// One Block-ACK observed at the access point.
struct AmpduAckEvent {
  SimTime time = 0;
  std::uint32_t batch = 1;      // b, frames in the A-MPDU
  double frame_bits = 12000.0;  // S
  double bitrate_bps = 0.0;     // R
  std::uint32_t max_batch = 1;  // M
  SimTime inter_ack = 0;        // T_IA
  std::optional<std::uint32_t> user;

  friend bool operator==(const AmpduAckEvent&, const AmpduAckEvent&) = default;
};

/// b S / T_IA.
double instantaneous_rate(const AmpduAckEvent& e);

/// M S / (T_IA + (M - b) S / R): the rate had the batch been full.
double backlogged_projection(const AmpduAckEvent& e);

struct CapacityEstimate {
  SimTime time = 0;
  double estimate_bps = 0.0;   // filtered and capped
  double filtered_bps = 0.0;   // before the cap
  double current_bps = 0.0;    // delivered bits over the window
  bool cap_binding = false;
};

/// Exponentially weighted (half-life T/2) average of projections over the
/// trailing window T, capped at twice the current delivery rate.
class CapacityFilter {
 public:
  explicit CapacityFilter(SimTime window = msec(40));

  CapacityEstimate add(const AmpduAckEvent& e);
  SimTime window() const { return window_; }

 private:
  struct Sample {
    SimTime time;
    double projection;
    double bits;
  };
  SimTime window_;
  std::deque<Sample> samples_;
  std::optional<SimTime> origin_;
};

std::vector<CapacityEstimate> estimate_capacity(const std::vector<AmpduAckEvent>& events,
                                                SimTime window = msec(40));

/// Least-squares slope of T_IA (seconds) against b.
double inter_ack_slope(const std::vector<AmpduAckEvent>& events);

/// One segment of a synthetic link. Overhead per Block-ACK is a shifted
/// log-normal with the given mean and standard deviation, never below
/// overhead_min.
struct MacProfile {
  SimTime start = 0;
  double bitrate_bps = 65e6;
  std::uint32_t max_batch = 32;
  double frame_bits = 12000.0;
  double overhead_mean_s = 1e-3;
  double overhead_stddev_s = 1e-4;
  double overhead_min_s = 2e-4;

  /// M S / (M S / R + mean overhead).
  double capacity_bps() const;
};

enum class MacQueueMode : std::uint8_t { Shared, PerUser };

struct MacTraceConfig {
  std::vector<MacProfile> schedule{MacProfile{}};
  double offered_load_bps = 10e6;  // total across users
  SimTime duration = sec(10);
  std::uint32_t users = 1;
  MacQueueMode mode = MacQueueMode::Shared;

  void validate() const;
};

/// Poisson frame arrivals drained in A-MPDUs of up to M frames. T_IA is the
/// busy time since the previous Block-ACK (idle gaps excluded). In per-user
/// mode each user's T_IA also covers other users' batches served while it
/// was backlogged.
std::vector<AmpduAckEvent> generate_mac_trace(const MacTraceConfig& config, std::uint64_t seed);

/// Ground-truth capacity at time t.
double true_capacity(const MacTraceConfig& config, SimTime t);

/// CSV with header time_us,b,S_bits,R_bps,M,T_IA_us and an optional trailing
/// user column.
void write_mac_trace(std::ostream& out, const std::vector<AmpduAckEvent>& events);
std::vector<AmpduAckEvent> read_mac_trace(std::istream& in);
std::vector<AmpduAckEvent> read_mac_trace(const std::filesystem::path& path);

}  // namespace abc
