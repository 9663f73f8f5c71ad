#pragma once

#include <vector>

#include "abc/core.hpp"

namespace abc {

/// Per-flow ACK generator. Coalesces up to m packets carrying the same
/// accel/brake state; a state change flushes the pending run with its old
/// mark and acknowledges the new packet immediately with the new mark.
/// ECN-set packets join the current run and raise ECE on the next ACK.
class EchoState {
 public:
  explicit EchoState(FlowId flow, unsigned coalesce = 2);

  /// Zero, one, or two ACKs (old run flush plus new-state ACK).
  std::vector<Ack> on_packet(const Packet& pkt);
  /// Delayed-ACK timer: acknowledges whatever is pending.
  std::vector<Ack> flush();

  unsigned pending() const { return pending_; }
  Mark last_mark() const { return last_mark_; }
  unsigned coalesce() const { return coalesce_; }

 private:
  Ack make_ack();

  FlowId flow_;
  unsigned coalesce_;
  Mark last_mark_ = Mark::Accel;
  unsigned pending_ = 0;
  std::uint32_t pending_bytes_ = 0;
  std::uint64_t last_seq_ = 0;
  SimTime last_send_time_ = 0;
  bool ece_pending_ = false;
};

}  // namespace abc
