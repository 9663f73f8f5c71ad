#include "abc/receiver.hpp"

namespace abc {

EchoState::EchoState(FlowId flow, unsigned coalesce) : flow_(flow), coalesce_(coalesce) {
  if (coalesce == 0) throw ConfigError("ACK coalescing count must be at least 1");
}

Ack EchoState::make_ack() {
  Ack ack;
  ack.flow_id = flow_;
  ack.acked_seq = last_seq_;
  ack.bytes_newly_acked = pending_bytes_;
  ack.echo_mark = last_mark_;
  ack.ece = ece_pending_;
  ack.echo_send_time = last_send_time_;
  pending_ = 0;
  pending_bytes_ = 0;
  ece_pending_ = false;
  return ack;
}

std::vector<Ack> EchoState::on_packet(const Packet& pkt) {
  std::vector<Ack> out;
  const bool carries_mark = pkt.ecn == EcnCodepoint::Accel || pkt.ecn == EcnCodepoint::Brake;
  const Mark mark = pkt.ecn == EcnCodepoint::Brake ? Mark::Brake : Mark::Accel;
  bool state_changed = false;
  if (carries_mark && mark != last_mark_) {
    if (pending_ > 0) out.push_back(make_ack());
    last_mark_ = mark;
    state_changed = true;
  }
  ++pending_;
  pending_bytes_ += pkt.size;
  last_seq_ = pkt.seq;
  last_send_time_ = pkt.send_time;
  if (pkt.ecn == EcnCodepoint::EcnSet) ece_pending_ = true;
  if (state_changed || pending_ >= coalesce_) out.push_back(make_ack());
  return out;
}

std::vector<Ack> EchoState::flush() {
  std::vector<Ack> out;
  if (pending_ > 0) out.push_back(make_ack());
  return out;
}

}  // namespace abc
