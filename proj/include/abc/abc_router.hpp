#pragma once

#include <array>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "abc/core.hpp"
#include "abc/links.hpp"
#include "abc/topk.hpp"

namespace abc {

struct AbcParams {
  double eta = 0.98;                 // target utilization, in (0,1)
  SimTime delta = msec(133);         // queue drain horizon
  SimTime delay_threshold = msec(50);  // d_t
  SimTime window = msec(20);         // dequeue-rate / capacity window T
  double token_limit = 2.0;

  void validate() const;
};

/// tr = eta*mu - (mu/delta)*(x - d_t)+, clamped at zero.
double target_rate(const AbcParams& params, double mu_bps, SimTime queuing_delay);

/// f = min(tr / (2 cr), 1); an idle router (cr == 0) lets everything accelerate.
double accel_fraction(double target_bps, double current_bps);

/// Deterministic token-bucket marker. Only ever turns Accel into Brake.
class MarkerState {
 public:
  explicit MarkerState(double token_limit = 2.0);

  EcnCodepoint mark(EcnCodepoint incoming, double fraction);
  Packet mark(Packet pkt, double fraction);

  double token() const { return token_; }
  double token_limit() const { return limit_; }

 private:
  double token_ = 0.0;
  double limit_;
};

/// Bytes dequeued over the trailing window (now - T, now].
class RateWindow {
 public:
  explicit RateWindow(SimTime window);

  void record(SimTime now, std::uint32_t bytes);
  double rate_bps(SimTime now);

 private:
  void evict(SimTime now);

  SimTime window_;
  std::deque<std::pair<SimTime, std::uint32_t>> samples_;
  std::uint64_t bytes_ = 0;
};

enum class QueueKind : std::uint8_t { Abc = 0, Legacy = 1 };

/// Two FIFOs sharing one packet budget, served by deficit round robin in
/// proportion to (w, 1 - w). Overflow drops from the tail of the longer queue.
class DualQueue {
 public:
  explicit DualQueue(std::size_t capacity_packets, double weight_abc = 0.5);

  /// Returns the packet dropped to make room, if any (possibly `pkt` itself).
  std::optional<Packet> enqueue(Packet pkt, QueueKind kind);
  std::pair<Packet, QueueKind> dequeue();

  const Packet* head(QueueKind kind) const;
  bool empty() const { return size() == 0; }
  std::size_t size() const { return queues_[0].size() + queues_[1].size(); }
  std::size_t size(QueueKind kind) const { return queues_[index(kind)].size(); }
  std::size_t capacity() const { return capacity_; }

  void set_weight(double weight_abc);
  double weight() const { return weight_; }

  /// Smallest service share either queue keeps while backlogged.
  static constexpr double kMinShare = 0.01;

 private:
  static constexpr std::size_t index(QueueKind k) { return static_cast<std::size_t>(k); }
  void credit(std::size_t q);

  std::size_t capacity_;
  double weight_;
  std::array<std::deque<Packet>, 2> queues_;
  std::array<double, 2> deficit_{0.0, 0.0};
  std::array<double, 2> quantum_{};
  std::size_t turn_ = 0;
};

/// One row of the flow-rate table that drives queue weights.
struct RateEntry {
  double rate_bps = 0.0;
  QueueKind queue = QueueKind::Abc;
  bool short_aggregate = false;  // residual of non-top-K flows
};

/// Water-filling max-min allocation of `capacity` among `demands`.
std::vector<double> max_min_allocation(std::span<const double> demands, double capacity);

/// Max-min based ABC queue weight. Short-flow aggregates are served their
/// rate first (scaled down together if they exceed capacity); top-K flows
/// then water-fill the rest with demand (1 + headroom) times their rate.
/// Returns `current_weight` when nothing is allocated.
double update_weights(std::span<const RateEntry> table, double capacity_bps, double headroom,
                      double current_weight);

struct AbcRouterConfig {
  AbcParams params;
  std::size_t buffer_packets = 250;
  double initial_weight = 0.5;
  SimTime weight_period = msec(100);
  double headroom = 0.10;  // X
  std::size_t top_k = 10;  // flows per queue treated as long-running
  /// Space Saving counters per queue; more than top_k so short-flow churn
  /// does not evict the long flows being ranked.
  std::size_t sketch_counters = 64;
  /// Scripted marking fraction, bypassing the target-rate computation.
  std::optional<double> forced_fraction;
};

struct DequeueRecord {
  SimTime time = 0;
  QueueKind queue = QueueKind::Abc;
  double f = 0.0;
  double tr = 0.0;
  double cr = 0.0;
  SimTime x = 0;
  double token = 0.0;
  EcnCodepoint mark = EcnCodepoint::NotEct;

  friend bool operator==(const DequeueRecord&, const DequeueRecord&) = default;
};

struct DequeueResult {
  Packet packet;
  DequeueRecord record;
};

class AbcRouter {
 public:
  AbcRouter(AbcRouterConfig config, const LinkProcess& link);

  /// Returns the dropped packet, if the arrival overflowed the buffer.
  std::optional<Packet> enqueue(Packet pkt, SimTime now);
  DequeueResult on_dequeue(SimTime now);

  bool empty() const { return queue_.empty(); }
  std::size_t queued() const { return queue_.size(); }
  std::size_t queued(QueueKind k) const { return queue_.size(k); }
  double weight() const { return queue_.weight(); }
  const AbcRouterConfig& config() const { return config_; }

 private:
  void maybe_update_weight(SimTime now);

  AbcRouterConfig config_;
  const LinkProcess* link_;
  OracleRateView oracle_;
  DualQueue queue_;
  MarkerState marker_;
  RateWindow abc_rate_;
  std::array<SpaceSavingSketch, 2> sketches_;
  std::array<std::uint64_t, 2> epoch_bytes_{0, 0};
  SimTime epoch_start_ = 0;
};

}  // namespace abc
