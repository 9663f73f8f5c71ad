#pragma once

#include <cstdint>

#include "abc/core.hpp"
#include "abc/legacy.hpp"
#include "abc/transport.hpp"

namespace abc {

struct AbcSenderParams {
  double initial_window = 10.0;
  /// The +1/w term of the window rule (one packet per RTT).
  bool additive_increase = true;
  /// Track the Cubic shadow window for non-ABC bottlenecks.
  bool dual_window = true;
  /// Cap both windows at twice the in-flight packets.
  bool inflight_cap = true;
  CubicParams cubic;
};

/// Accel/brake window w_abc plus the Cubic shadow window w_cubic; the
/// effective window is their minimum.
class AbcWindows {
 public:
  explicit AbcWindows(AbcSenderParams params = {});

  /// Byte-counted feedback: delta packets echoed with `mark`.
  void on_feedback(double delta, Mark mark);
  void on_cubic_ack(SimTime now, double delta);
  void on_congestion(SimTime now);
  void on_timeout(SimTime now);
  /// Caps both windows at 2 * max(inflight, 1).
  void apply_cap(double inflight);

  double w_abc() const { return w_abc_; }
  double w_cubic() const;
  double window() const;
  /// True when both windows respect the cap for `inflight`.
  bool within_cap(double inflight) const;

  const AbcSenderParams& params() const { return params_; }

 private:
  AbcSenderParams params_;
  double w_abc_;
  CubicWindow cubic_;
};

/// ABC endpoint: windows plus send-side bookkeeping for one flow.
class AbcSender {
 public:
  AbcSender(FlowId flow, AbcSenderParams params = {});

  /// Processes one ACK; returns how many packets may now be transmitted.
  std::size_t on_ack(const Ack& ack, SimTime now);
  /// Retransmission timeout: all outstanding packets are presumed lost.
  std::size_t on_timeout(SimTime now);

  std::size_t sendable() const;
  Packet transmit(SimTime now, std::uint32_t size = kMtu);
  /// Caps both windows at twice the packets in flight. Called at the end of
  /// each event, after the transmissions it released; capping before them
  /// pins the window at 2m under m-packet delayed ACKs.
  void apply_cap();
  /// Records the cap invariant once an event has been fully processed.
  void check_cap();

  FlowId flow() const { return flow_; }
  const AbcWindows& windows() const { return windows_; }
  const Outstanding& outstanding() const { return out_; }
  double inflight() const { return out_.inflight_packets(); }
  const SenderStats& stats() const { return stats_; }

 private:
  FlowId flow_;
  AbcWindows windows_;
  Outstanding out_;
  SenderStats stats_;
};

/// Window at which 2f + 1/w = 1, i.e. 1 / (1 - 2f). Requires f < 0.5.
double steady_state_window(double f);

/// Expected per-RTT change of w_abc when only a fraction p of ACKs arrive:
/// (2f - 1) p w, ignoring additive increase.
double lost_ack_drift(double f, double p, double w);

}  // namespace abc
