#pragma once

#include <deque>
#include <limits>
#include <optional>
#include <vector>

#include "abc/core.hpp"
#include "abc/transport.hpp"

namespace abc {

struct CubicParams {
  double c = 0.4;
  double beta = 0.7;
  double initial_window = 10.0;
  double initial_ssthresh = std::numeric_limits<double>::infinity();
};

/// Cubic congestion window in packets: slow start below ssthresh, then the
/// cubic growth curve C (t - K)^3 + W_max anchored at the last decrease.
class CubicWindow {
 public:
  explicit CubicWindow(CubicParams params = {});

  void on_ack(SimTime now, double acked_packets);
  /// Drop or ECN echo: W_max <- cwnd, cwnd <- beta * cwnd.
  void on_congestion(SimTime now);
  /// Retransmission timeout: collapse to one packet.
  void on_timeout(SimTime now);
  /// Upper-bounds the window (ABC's in-flight cap); never below one packet.
  void cap(double limit);

  /// Cubic curve value `t` seconds into the current epoch.
  double target(double t_seconds) const;
  double k() const { return k_; }

  double cwnd() const { return cwnd_; }
  double w_max() const { return w_max_; }
  double ssthresh() const { return ssthresh_; }
  const CubicParams& params() const { return params_; }

 private:
  CubicParams params_;
  double cwnd_;
  double w_max_ = 0.0;
  double ssthresh_;
  std::optional<SimTime> epoch_start_;
  double k_ = 0.0;
  double origin_ = 0.0;
};

/// Legacy Cubic endpoint: one window driven by drops and ECN echoes.
class CubicSender {
 public:
  CubicSender(FlowId flow, CubicParams params = {}, bool ecn_capable = false);

  std::size_t on_ack(const Ack& ack, SimTime now);
  std::size_t on_timeout(SimTime now);
  std::size_t sendable() const;
  Packet transmit(SimTime now, std::uint32_t size = kMtu);

  FlowId flow() const { return flow_; }
  const CubicWindow& window() const { return window_; }
  const Outstanding& outstanding() const { return out_; }
  double inflight() const { return out_.inflight_packets(); }
  const SenderStats& stats() const { return stats_; }

 private:
  FlowId flow_;
  CubicWindow window_;
  bool ecn_capable_;
  Outstanding out_;
  SenderStats stats_;
};

struct DroptailConfig {
  std::size_t capacity = 250;
  bool ecn_marking = false;
  std::size_t ecn_threshold = 50;
};

/// FIFO with tail drop and optional threshold ECN marking for ECN-capable
/// codepoints.
class DroptailRouter {
 public:
  explicit DroptailRouter(DroptailConfig config = {});

  /// Returns the packet if it was dropped.
  std::optional<Packet> enqueue(Packet pkt, SimTime now);
  Packet dequeue(SimTime now);

  bool empty() const { return queue_.empty(); }
  std::size_t queued() const { return queue_.size(); }
  const DroptailConfig& config() const { return config_; }

  std::uint64_t enqueued() const { return enqueued_; }
  std::uint64_t dequeued() const { return dequeued_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  DroptailConfig config_;
  std::deque<Packet> queue_;
  std::uint64_t enqueued_ = 0;
  std::uint64_t dequeued_ = 0;
  std::uint64_t dropped_ = 0;
};

constexpr std::uint64_t kShortFlowBytes = 10000;

/// Mean Poisson arrival rate (flows/s) that offers `load_bps` with flows of
/// `flow_bytes`.
double short_flow_arrival_rate(double load_bps, std::uint64_t flow_bytes);

/// Poisson arrival times in [begin, end) offering `load_bps` on average.
std::vector<SimTime> short_flow_generator(double load_bps, std::uint64_t flow_bytes,
                                          std::uint64_t seed, SimTime begin, SimTime end);

}  // namespace abc
