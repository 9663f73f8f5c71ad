#pragma once

#include <map>
#include <optional>

#include "abc/core.hpp"

namespace abc {

struct AckAccounting {
  bool valid = false;             // false for duplicate or unknown ACKs
  double acked_packets = 0.0;     // bytes_newly_acked / MTU
  double lost_packets = 0.0;      // gaps below the acked sequence
  bool congestion_event = false;  // loss or ECE, at most once per window of data
  std::optional<SimTime> rtt_sample;
};

struct SenderStats {
  std::uint64_t acks = 0;
  std::uint64_t ignored_acks = 0;
  std::uint64_t congestion_events = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t cap_checks = 0;
  std::uint64_t cap_violations = 0;
  double accel_bytes = 0.0;
  double brake_bytes = 0.0;
};

/// Sequence numbers, unacknowledged packets, loss inference and RTO for one
/// flow. Paths never reorder, so any unacknowledged packet below an ACKed
/// sequence number is lost.
class Outstanding {
 public:
  Packet transmit(FlowId flow, SimTime now, std::uint32_t size, EcnCodepoint ecn, bool abc);
  AckAccounting on_ack(const Ack& ack, SimTime now);
  /// Declares every outstanding packet lost; returns how many (in MTUs).
  double lose_all();

  double inflight_packets() const { return mtu_packets(static_cast<double>(inflight_bytes_)); }
  std::size_t inflight_count() const { return unacked_.size(); }
  std::uint64_t next_seq() const { return next_seq_; }
  std::uint64_t bytes_sent() const { return bytes_sent_; }
  std::uint64_t bytes_acked() const { return bytes_acked_; }
  double lost_total() const { return lost_total_; }

  SimTime rto() const;
  std::optional<SimTime> srtt() const { return srtt_; }
  /// Starts a fresh loss-recovery window (after a timeout).
  void mark_recovery() { recovery_seq_ = next_seq_; }

  static constexpr SimTime kMinRto = msec(200);

 private:
  struct Sent {
    SimTime send_time;
    std::uint32_t size;
  };
  std::map<std::uint64_t, Sent> unacked_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t recovery_seq_ = 0;
  std::uint64_t inflight_bytes_ = 0;
  std::uint64_t bytes_sent_ = 0;
  std::uint64_t bytes_acked_ = 0;
  double lost_total_ = 0.0;
  std::optional<SimTime> srtt_;
  SimTime rttvar_ = 0;
};

}  // namespace abc
