#include "abc/legacy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace abc {

CubicWindow::CubicWindow(CubicParams params)
    : params_(params), cwnd_(params.initial_window), ssthresh_(params.initial_ssthresh) {}

double CubicWindow::target(double t_seconds) const {
  const double d = t_seconds - k_;
  return params_.c * d * d * d + origin_;
}

void CubicWindow::on_ack(SimTime now, double acked_packets) {
  if (acked_packets <= 0.0) return;
  if (cwnd_ < ssthresh_) {
    cwnd_ += acked_packets;
    return;
  }
  if (!epoch_start_) {
    epoch_start_ = now;
    if (cwnd_ < w_max_) {
      k_ = std::cbrt((w_max_ - cwnd_) / params_.c);
      origin_ = w_max_;
    } else {
      k_ = 0.0;
      origin_ = cwnd_;
    }
  }
  const double goal = target(to_seconds(now - *epoch_start_));
  const double step = goal > cwnd_ ? (goal - cwnd_) / cwnd_ : 0.01 / cwnd_;
  // At most half a packet per acked packet, as in the Linux implementation.
  cwnd_ += std::min(step, 0.5) * acked_packets;
}

void CubicWindow::on_congestion(SimTime /*now*/) {
  w_max_ = cwnd_;
  cwnd_ = std::max(1.0, cwnd_ * params_.beta);
  ssthresh_ = std::max(cwnd_, 2.0);
  epoch_start_.reset();
}

void CubicWindow::on_timeout(SimTime /*now*/) {
  w_max_ = cwnd_;
  ssthresh_ = std::max(cwnd_ * params_.beta, 2.0);
  cwnd_ = 1.0;
  epoch_start_.reset();
}

void CubicWindow::cap(double limit) { cwnd_ = std::max(1.0, std::min(cwnd_, limit)); }

CubicSender::CubicSender(FlowId flow, CubicParams params, bool ecn_capable)
    : flow_(flow), window_(params), ecn_capable_(ecn_capable) {}

std::size_t CubicSender::on_ack(const Ack& ack, SimTime now) {
  const auto acc = out_.on_ack(ack, now);
  if (!acc.valid) {
    ++stats_.ignored_acks;
    return sendable();
  }
  ++stats_.acks;
  if (acc.congestion_event) {
    ++stats_.congestion_events;
    window_.on_congestion(now);
  } else if (!ack.ece && acc.lost_packets == 0.0) {
    window_.on_ack(now, acc.acked_packets);
  }
  return sendable();
}

std::size_t CubicSender::on_timeout(SimTime now) {
  ++stats_.timeouts;
  out_.lose_all();
  out_.mark_recovery();
  window_.on_timeout(now);
  return sendable();
}

std::size_t CubicSender::sendable() const {
  const double room = std::ceil(window_.cwnd() - 1e-9) - static_cast<double>(out_.inflight_count());
  return room > 0.0 ? static_cast<std::size_t>(room) : 0;
}

Packet CubicSender::transmit(SimTime now, std::uint32_t size) {
  // ECT(0) shares its bits with the ABC brake codepoint.
  return out_.transmit(flow_, now, size, ecn_capable_ ? EcnCodepoint::Brake : EcnCodepoint::NotEct,
                       false);
}

DroptailRouter::DroptailRouter(DroptailConfig config) : config_(config) {
  if (config_.capacity == 0) throw ConfigError("droptail buffer must hold at least one packet");
}

std::optional<Packet> DroptailRouter::enqueue(Packet pkt, SimTime now) {
  if (queue_.size() >= config_.capacity) {
    ++dropped_;
    return pkt;
  }
  if (config_.ecn_marking && queue_.size() > config_.ecn_threshold && is_ecn_capable(pkt.ecn)) {
    pkt.ecn = EcnCodepoint::EcnSet;
  }
  pkt.enqueue_time = now;
  queue_.push_back(pkt);
  ++enqueued_;
  return std::nullopt;
}

Packet DroptailRouter::dequeue(SimTime now) {
  if (queue_.empty()) throw std::logic_error("dequeue from empty droptail queue");
  Packet pkt = queue_.front();
  queue_.pop_front();
  pkt.dequeue_time = now;
  ++dequeued_;
  return pkt;
}

double short_flow_arrival_rate(double load_bps, std::uint64_t flow_bytes) {
  if (flow_bytes == 0) throw std::invalid_argument("short flows need a positive size");
  return load_bps / (8.0 * static_cast<double>(flow_bytes));
}

std::vector<SimTime> short_flow_generator(double load_bps, std::uint64_t flow_bytes,
                                          std::uint64_t seed, SimTime begin, SimTime end) {
  std::vector<SimTime> arrivals;
  const double rate = short_flow_arrival_rate(load_bps, flow_bytes);
  if (rate <= 0.0 || end <= begin) return arrivals;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(rate);
  double t = to_seconds(begin);
  const double stop = to_seconds(end);
  for (;;) {
    t += gap(rng);
    if (t >= stop) break;
    arrivals.push_back(from_seconds(t));
  }
  return arrivals;
}

}  // namespace abc
