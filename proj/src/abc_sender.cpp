#include "abc/abc_sender.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abc {

AbcWindows::AbcWindows(AbcSenderParams params)
    : params_(params), w_abc_(params.initial_window), cubic_([&] {
        CubicParams c = params.cubic;
        c.initial_window = params.initial_window;
        return c;
      }()) {}

void AbcWindows::on_feedback(double delta, Mark mark) {
  if (delta <= 0.0) return;
  const double ai = params_.additive_increase ? 1.0 / w_abc_ : 0.0;
  const double step = mark == Mark::Accel ? 1.0 : -1.0;
  w_abc_ = std::max(1.0, w_abc_ + delta * (step + ai));
}

void AbcWindows::on_cubic_ack(SimTime now, double delta) {
  if (params_.dual_window) cubic_.on_ack(now, delta);
}

void AbcWindows::on_congestion(SimTime now) {
  if (params_.dual_window) cubic_.on_congestion(now);
}

void AbcWindows::on_timeout(SimTime now) {
  if (params_.dual_window) cubic_.on_timeout(now);
}

void AbcWindows::apply_cap(double inflight) {
  if (!params_.inflight_cap) return;
  const double limit = 2.0 * std::max(inflight, 1.0);
  w_abc_ = std::max(1.0, std::min(w_abc_, limit));
  if (params_.dual_window) cubic_.cap(limit);
}

double AbcWindows::w_cubic() const {
  return params_.dual_window ? cubic_.cwnd() : std::numeric_limits<double>::infinity();
}

double AbcWindows::window() const { return std::min(w_abc_, w_cubic()); }

bool AbcWindows::within_cap(double inflight) const {
  if (!params_.inflight_cap) return true;
  const double limit = 2.0 * std::max(inflight, 1.0) + 1e-9;
  return w_abc_ <= limit && (!params_.dual_window || cubic_.cwnd() <= limit);
}

AbcSender::AbcSender(FlowId flow, AbcSenderParams params) : flow_(flow), windows_(params) {}

std::size_t AbcSender::on_ack(const Ack& ack, SimTime now) {
  const auto acc = out_.on_ack(ack, now);
  if (!acc.valid) {
    ++stats_.ignored_acks;
    return sendable();
  }
  ++stats_.acks;
  (ack.echo_mark == Mark::Accel ? stats_.accel_bytes : stats_.brake_bytes) += ack.bytes_newly_acked;
  windows_.on_feedback(acc.acked_packets, ack.echo_mark);
  if (acc.congestion_event) {
    ++stats_.congestion_events;
    windows_.on_congestion(now);
  } else if (!ack.ece && acc.lost_packets == 0.0) {
    windows_.on_cubic_ack(now, acc.acked_packets);
  }
  return sendable();
}

std::size_t AbcSender::on_timeout(SimTime now) {
  ++stats_.timeouts;
  out_.lose_all();
  out_.mark_recovery();
  windows_.on_timeout(now);
  return sendable();
}

std::size_t AbcSender::sendable() const {
  const double room = std::ceil(windows_.window() - 1e-9) - static_cast<double>(out_.inflight_count());
  return room > 0.0 ? static_cast<std::size_t>(room) : 0;
}

Packet AbcSender::transmit(SimTime now, std::uint32_t size) {
  return out_.transmit(flow_, now, size, EcnCodepoint::Accel, true);
}

void AbcSender::apply_cap() { windows_.apply_cap(out_.inflight_packets()); }

void AbcSender::check_cap() {
  ++stats_.cap_checks;
  if (!windows_.within_cap(out_.inflight_packets())) ++stats_.cap_violations;
}

double steady_state_window(double f) {
  if (!(f < 0.5)) throw std::domain_error("no steady-state window for f >= 0.5");
  return 1.0 / (1.0 - 2.0 * f);
}

double lost_ack_drift(double f, double p, double w) { return (2.0 * f - 1.0) * p * w; }

}  // namespace abc
