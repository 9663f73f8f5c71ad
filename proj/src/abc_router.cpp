#include "abc/abc_router.hpp"

#include <algorithm>
#include <numeric>

namespace abc {

void AbcParams::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
  if (delta == 0) throw ConfigError("delta must be positive");
  if (window == 0) throw ConfigError("measurement window must be positive");
  if (!(token_limit >= 1.0)) throw ConfigError("token_limit must be at least 1");
}

double target_rate(const AbcParams& params, double mu_bps, SimTime queuing_delay) {
  const double excess =
      queuing_delay > params.delay_threshold ? to_seconds(queuing_delay - params.delay_threshold) : 0.0;
  const double tr = params.eta * mu_bps - mu_bps / to_seconds(params.delta) * excess;
  return std::max(0.0, tr);
}

double accel_fraction(double target_bps, double current_bps) {
  if (current_bps <= 0.0) return 1.0;
  return std::clamp(0.5 * target_bps / current_bps, 0.0, 1.0);
}

MarkerState::MarkerState(double token_limit) : limit_(token_limit) {}

EcnCodepoint MarkerState::mark(EcnCodepoint incoming, double fraction) {
  token_ = std::min(token_ + fraction, limit_);
  if (incoming != EcnCodepoint::Accel) return incoming;
  if (token_ > 1.0) {
    token_ -= 1.0;
    return EcnCodepoint::Accel;
  }
  return EcnCodepoint::Brake;
}

Packet MarkerState::mark(Packet pkt, double fraction) {
  pkt.ecn = mark(pkt.ecn, fraction);
  return pkt;
}

RateWindow::RateWindow(SimTime window) : window_(window) {}

void RateWindow::evict(SimTime now) {
  while (!samples_.empty() && samples_.front().first + window_ <= now) {
    bytes_ -= samples_.front().second;
    samples_.pop_front();
  }
}

void RateWindow::record(SimTime now, std::uint32_t bytes) {
  evict(now);
  samples_.emplace_back(now, bytes);
  bytes_ += bytes;
}

double RateWindow::rate_bps(SimTime now) {
  evict(now);
  return static_cast<double>(bytes_) * 8.0 / to_seconds(window_);
}

DualQueue::DualQueue(std::size_t capacity_packets, double weight_abc) : capacity_(capacity_packets) {
  if (capacity_packets == 0) throw ConfigError("buffer must hold at least one packet");
  set_weight(weight_abc);
}

void DualQueue::set_weight(double weight_abc) {
  weight_ = std::clamp(weight_abc, 0.0, 1.0);
  const double wa = std::max(weight_, kMinShare);
  const double wl = std::max(1.0 - weight_, kMinShare);
  const double scale = kMtu / std::max(wa, wl);
  quantum_ = {wa * scale, wl * scale};
}

std::optional<Packet> DualQueue::enqueue(Packet pkt, QueueKind kind) {
  const std::size_t q = index(kind);
  if (size() < capacity_) {
    queues_[q].push_back(pkt);
    return std::nullopt;
  }
  const std::size_t other = 1 - q;
  if (queues_[other].size() > queues_[q].size()) {
    Packet victim = queues_[other].back();
    queues_[other].pop_back();
    queues_[q].push_back(pkt);
    return victim;
  }
  return pkt;
}

const Packet* DualQueue::head(QueueKind kind) const {
  const auto& q = queues_[index(kind)];
  return q.empty() ? nullptr : &q.front();
}

void DualQueue::credit(std::size_t q) {
  if (queues_[q].empty()) {
    deficit_[q] = 0.0;
  } else {
    deficit_[q] += quantum_[q];
  }
}

std::pair<Packet, QueueKind> DualQueue::dequeue() {
  if (empty()) throw std::logic_error("dequeue from empty dual queue");
  for (;;) {
    auto& q = queues_[turn_];
    if (q.empty()) {
      deficit_[turn_] = 0.0;
      turn_ = 1 - turn_;
      credit(turn_);
      continue;
    }
    if (deficit_[turn_] >= q.front().size) {
      deficit_[turn_] -= q.front().size;
      Packet pkt = q.front();
      q.pop_front();
      const auto kind = static_cast<QueueKind>(turn_);
      if (q.empty()) deficit_[turn_] = 0.0;
      return {pkt, kind};
    }
    turn_ = 1 - turn_;
    credit(turn_);
  }
}

std::vector<double> max_min_allocation(std::span<const double> demands, double capacity) {
  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return demands[a] < demands[b]; });
  std::vector<double> alloc(demands.size(), 0.0);
  double remaining = std::max(0.0, capacity);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double share = remaining / static_cast<double>(order.size() - i);
    const double d = std::max(0.0, demands[order[i]]);
    if (d <= share) {
      alloc[order[i]] = d;
      remaining -= d;
    } else {
      for (std::size_t j = i; j < order.size(); ++j) alloc[order[j]] = share;
      break;
    }
  }
  return alloc;
}

double update_weights(std::span<const RateEntry> table, double capacity_bps, double headroom,
                      double current_weight) {
  // An aggregate stands for many small flows, each below any fair level, so
  // it is served in full before the long flows share what is left.
  double aggregate_demand = 0.0;
  for (const auto& e : table) {
    if (e.short_aggregate) aggregate_demand += e.rate_bps;
  }
  const double scale = aggregate_demand > capacity_bps ? capacity_bps / aggregate_demand : 1.0;
  std::vector<double> long_demands;
  for (const auto& e : table) {
    if (!e.short_aggregate) long_demands.push_back(e.rate_bps * (1.0 + headroom));
  }
  const auto long_alloc = max_min_allocation(long_demands, std::max(0.0, capacity_bps - aggregate_demand * scale));
  double abc = 0.0;
  double total = 0.0;
  std::size_t next_long = 0;
  for (const auto& e : table) {
    const double a = e.short_aggregate ? e.rate_bps * scale : long_alloc[next_long++];
    total += a;
    if (e.queue == QueueKind::Abc) abc += a;
  }
  if (total <= 0.0) return current_weight;
  return abc / total;
}

AbcRouter::AbcRouter(AbcRouterConfig config, const LinkProcess& link)
    : config_(std::move(config)),
      link_(&link),
      oracle_(link, config_.params.window),
      queue_(config_.buffer_packets, config_.initial_weight),
      marker_(config_.params.token_limit),
      abc_rate_(config_.params.window),
      sketches_{SpaceSavingSketch(config_.sketch_counters), SpaceSavingSketch(config_.sketch_counters)} {
  config_.params.validate();
  if (config_.weight_period == 0) throw ConfigError("weight period must be positive");
  if (config_.top_k == 0 || config_.sketch_counters < config_.top_k)
    throw ConfigError("sketch needs at least top_k counters and top_k must be positive");
  if (config_.forced_fraction && (*config_.forced_fraction < 0.0 || *config_.forced_fraction > 1.0))
    throw ConfigError("forced fraction must lie in [0, 1]");
}

std::optional<Packet> AbcRouter::enqueue(Packet pkt, SimTime now) {
  pkt.enqueue_time = now;
  return queue_.enqueue(pkt, pkt.abc ? QueueKind::Abc : QueueKind::Legacy);
}

void AbcRouter::maybe_update_weight(SimTime now) {
  if (now < epoch_start_ + config_.weight_period) return;
  const SimTime period = now - epoch_start_;
  const double capacity = link_->capacity_bits(epoch_start_, now) / to_seconds(period);
  std::vector<RateEntry> table;
  for (std::size_t q = 0; q < 2; ++q) {
    const auto kind = static_cast<QueueKind>(q);
    double top_sum = 0.0;
    const auto ranked = top_rates(sketches_[q], period);
    for (std::size_t i = 0; i < std::min(config_.top_k, ranked.size()); ++i) {
      table.push_back({ranked[i].guaranteed_bps, kind, false});
      top_sum += ranked[i].guaranteed_bps;
    }
    const double aggregate = static_cast<double>(epoch_bytes_[q]) * 8.0 / to_seconds(period);
    const double residual = aggregate - top_sum;
    if (residual > 0.0) table.push_back({residual, kind, true});
    sketches_[q].reset();
    epoch_bytes_[q] = 0;
  }
  queue_.set_weight(update_weights(table, capacity, config_.headroom, queue_.weight()));
  epoch_start_ = now;
}

DequeueResult AbcRouter::on_dequeue(SimTime now) {
  maybe_update_weight(now);
  auto [pkt, kind] = queue_.dequeue();
  pkt.dequeue_time = now;
  const std::size_t q = static_cast<std::size_t>(kind);
  sketches_[q].record(pkt.flow_id, pkt.size);
  epoch_bytes_[q] += pkt.size;

  DequeueRecord rec;
  rec.time = now;
  rec.queue = kind;
  rec.x = now - pkt.enqueue_time;
  if (kind == QueueKind::Legacy) {
    rec.token = marker_.token();
    rec.mark = pkt.ecn;
    return {pkt, rec};
  }
  abc_rate_.record(now, pkt.size);
  rec.cr = abc_rate_.rate_bps(now);
  const double mu = oracle_.capacity_bps(now) * queue_.weight();
  rec.tr = target_rate(config_.params, mu, rec.x);
  rec.f = config_.forced_fraction ? *config_.forced_fraction : accel_fraction(rec.tr, rec.cr);
  pkt = marker_.mark(pkt, rec.f);
  rec.token = marker_.token();
  rec.mark = pkt.ecn;
  return {pkt, rec};
}

}  // namespace abc
