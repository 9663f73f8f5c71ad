#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abc/abc_router.hpp"
#include "abc/core.hpp"

namespace abc {

enum class Scheme : std::uint8_t { Abc, Cubic };

std::string_view to_string(Scheme s);

struct DeliveryRecord {
  FlowId flow = 0;
  std::uint64_t seq = 0;
  SimTime send_time = 0;
  SimTime recv_time = 0;
  std::uint32_t size = 0;

  friend bool operator==(const DeliveryRecord&, const DeliveryRecord&) = default;
};

/// Queuing at one hop: dequeue - enqueue is the packet's sojourn there.
struct HopRecord {
  FlowId flow = 0;
  SimTime enqueue = 0;
  SimTime dequeue = 0;
  std::uint32_t size = 0;
  QueueKind queue = QueueKind::Abc;

  SimTime delay() const { return dequeue - enqueue; }
  friend bool operator==(const HopRecord&, const HopRecord&) = default;
};

struct DropRecord {
  FlowId flow = 0;
  std::uint64_t seq = 0;
  SimTime time = 0;
  std::uint32_t hop = 0;

  friend bool operator==(const DropRecord&, const DropRecord&) = default;
};

struct FlowSample {
  SimTime time = 0;
  FlowId flow = 0;
  double w_abc = 0.0;
  double w_cubic = 0.0;
  double inflight = 0.0;
  double send_rate_bps = 0.0;

  friend bool operator==(const FlowSample&, const FlowSample&) = default;
};

struct HopLog {
  std::string name;
  std::vector<HopRecord> records;
  std::vector<DequeueRecord> dequeues;  // ABC hops, when enabled
  double capacity_bits = 0.0;           // deliverable over the run
  std::uint64_t delivered_bytes = 0;
  std::uint64_t dropped = 0;

  friend bool operator==(const HopLog&, const HopLog&) = default;
};

struct FlowSummary {
  FlowId flow = 0;
  Scheme scheme = Scheme::Abc;
  bool short_flow = false;
  SimTime start = 0;
  SimTime stop = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_delivered = 0;
  std::uint64_t congestion_events = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t cap_checks = 0;
  std::uint64_t cap_violations = 0;
  double accel_bytes = 0.0;  // echoed to the sender
  double brake_bytes = 0.0;

  friend bool operator==(const FlowSummary&, const FlowSummary&) = default;
};

/// Packet accounting snapshot; sent = delivered + dropped + in_transit + queued.
struct Conservation {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_transit = 0;
  std::uint64_t queued = 0;

  bool holds() const { return sent == delivered + dropped + in_transit + queued; }
  friend bool operator==(const Conservation&, const Conservation&) = default;
};

struct MetricsLog {
  SimTime duration = 0;
  std::vector<DeliveryRecord> deliveries;
  std::vector<DropRecord> drops;
  std::vector<HopLog> hops;
  std::vector<FlowSample> samples;
  std::vector<FlowSummary> flows;
  Conservation conservation;

  bool empty() const { return deliveries.empty() && drops.empty() && samples.empty(); }
  friend bool operator==(const MetricsLog&, const MetricsLog&) = default;
};

/// Delivered bytes at `hop` over the link's deliverable bytes.
double utilization(const MetricsLog& log, std::size_t hop);

/// Nearest-rank percentile; throws on empty input.
SimTime percentile_nearest_rank(std::vector<SimTime> values, double p);

struct DelayFilter {
  SimTime from = 0;
  SimTime to = ~SimTime{0};
  std::optional<QueueKind> queue;
};

/// Per-packet queuing delays at `hop` for packets dequeued in [from, to).
std::vector<SimTime> hop_delays(const MetricsLog& log, std::size_t hop, const DelayFilter& filter = {});

SimTime delay_percentile(const MetricsLog& log, std::size_t hop, double p, const DelayFilter& filter = {});

double mean_delay(const MetricsLog& log, std::size_t hop, const DelayFilter& filter = {});

/// (sum x)^2 / (n sum x^2); throws on empty or all-zero input.
double jain_index(std::span<const double> throughputs);

/// Receiver goodput of `flow` over [from, to), in bits/s.
double flow_throughput(const MetricsLog& log, FlowId flow, SimTime from, SimTime to);

/// Per-bin receiver goodput in bits/s.
std::vector<double> throughput_series(const MetricsLog& log, FlowId flow, SimTime bin);

/// Start of the window used for fairness: the final two-thirds of the run.
constexpr SimTime steady_window_start(SimTime duration) { return duration / 3; }

/// Flat key = value report.
std::string summary_text(const MetricsLog& log);

}  // namespace abc
