#include "abc/transport.hpp"

#include <algorithm>

namespace abc {

Packet Outstanding::transmit(FlowId flow, SimTime now, std::uint32_t size, EcnCodepoint ecn, bool abc) {
  Packet pkt;
  pkt.flow_id = flow;
  pkt.seq = next_seq_++;
  pkt.size = size;
  pkt.ecn = ecn;
  pkt.abc = abc;
  pkt.send_time = now;
  unacked_.emplace(pkt.seq, Sent{now, size});
  inflight_bytes_ += size;
  bytes_sent_ += size;
  return pkt;
}

AckAccounting Outstanding::on_ack(const Ack& ack, SimTime now) {
  AckAccounting out;
  auto it = unacked_.find(ack.acked_seq);
  if (it == unacked_.end()) return out;
  out.valid = true;
  if (now >= it->second.send_time) out.rtt_sample = now - it->second.send_time;

  std::uint64_t removed = 0;
  for (auto e = unacked_.begin(); e != unacked_.end() && e->first <= ack.acked_seq;) {
    removed += e->second.size;
    e = unacked_.erase(e);
  }
  const std::uint64_t acked = std::min<std::uint64_t>(ack.bytes_newly_acked, removed);
  inflight_bytes_ -= removed;
  bytes_acked_ += acked;
  out.acked_packets = mtu_packets(static_cast<double>(acked));
  out.lost_packets = mtu_packets(static_cast<double>(removed - acked));
  lost_total_ += out.lost_packets;

  if ((out.lost_packets > 0.0 || ack.ece) && ack.acked_seq >= recovery_seq_) {
    out.congestion_event = true;
    recovery_seq_ = next_seq_;
  }

  if (out.rtt_sample) {
    const SimTime r = *out.rtt_sample;
    if (!srtt_) {
      srtt_ = r;
      rttvar_ = r / 2;
    } else {
      const SimTime diff = r > *srtt_ ? r - *srtt_ : *srtt_ - r;
      rttvar_ = (3 * rttvar_ + diff) / 4;
      srtt_ = (7 * *srtt_ + r) / 8;
    }
  }
  return out;
}

double Outstanding::lose_all() {
  const double lost = inflight_packets();
  lost_total_ += lost;
  unacked_.clear();
  inflight_bytes_ = 0;
  return lost;
}

SimTime Outstanding::rto() const {
  if (!srtt_) return sec(1);
  return std::max(kMinRto, *srtt_ + 4 * rttvar_);
}

}  // namespace abc
