#include "abc/engine.hpp"

#include <memory>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>
#include <variant>

#include "abc/receiver.hpp"

namespace abc {

std::string_view to_string(Discipline d) { return d == Discipline::Abc ? "abc" : "droptail"; }

void Topology::validate() const {
  if (hops.empty()) throw ConfigError("topology needs at least one hop");
  std::set<std::string> names;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    const auto& h = hops[i];
    const std::string key = "hops[" + std::to_string(i) + "]";
    if (!h.link) throw ConfigError(key + ".link: missing capacity process");
    if (h.name.empty()) throw ConfigError(key + ".name: must not be empty");
    if (!names.insert(h.name).second) throw ConfigError(key + ".name: duplicate hop name " + h.name);
    if (h.discipline == Discipline::Abc) {
      h.abc.params.validate();
      if (h.abc.buffer_packets == 0) throw ConfigError(key + ".buffer: must be positive");
    } else if (h.droptail.capacity == 0) {
      throw ConfigError(key + ".buffer: must be positive");
    }
  }
  auto check_path = [&](const std::vector<std::size_t>& path, const std::string& key) {
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (path[k] >= hops.size()) throw ConfigError(key + ".path: unknown hop index");
      if (k > 0 && path[k] <= path[k - 1]) throw ConfigError(key + ".path: hops must appear in topology order");
    }
  };
  std::set<FlowId> ids;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const auto& f = flows[i];
    const std::string key = "flows[" + std::to_string(i) + "]";
    if (!ids.insert(f.id).second) throw ConfigError(key + ".id: duplicate flow id");
    if (f.ack_coalesce == 0) throw ConfigError(key + ".ack_coalesce: must be at least 1");
    if (f.stop && *f.stop < f.start) throw ConfigError(key + ".stop: precedes start");
    if (f.bytes && *f.bytes == 0) throw ConfigError(key + ".bytes: must be positive");
    check_path(f.path, key);
  }
  if (short_flows) {
    if (short_flows->load_bps < 0.0) throw ConfigError("short_flows.load: must be non-negative");
    if (short_flows->flow_bytes == 0) throw ConfigError("short_flows.bytes: must be positive");
    check_path(short_flows->path, "short_flows");
    for (FlowId id : ids) {
      if (id >= short_flows->first_id) throw ConfigError("short_flows.first_id: overlaps a flow id");
    }
  }
}

namespace {

enum class EventKind : std::uint8_t {
  FlowStart,
  ShortFlowArrival,
  HopArrival,
  HopDequeue,
  ReceiverArrival,
  AckArrival,
  RtoTimer,
  DelayedAck,
  Sample,
};

struct Event {
  SimTime time = 0;
  std::uint64_t order = 0;
  EventKind kind = EventKind::Sample;
  std::size_t target = 0;
  std::uint64_t tag = 0;
  std::variant<std::monostate, Packet, Ack> payload;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.time != b.time ? a.time > b.time : a.order > b.order;
  }
};

struct FlowRuntime {
  FlowSpec spec;
  bool short_flow = false;
  std::variant<AbcSender, CubicSender> sender;
  EchoState echo;
  bool started = false;
  bool finished = false;
  SimTime finish_time = 0;
  bool rto_armed = false;
  SimTime last_progress = 0;
  SimTime last_launch = 0;  // first-hop arrival of the newest packet
  std::uint64_t ack_generation = 0;
  std::uint64_t bytes_delivered = 0;
  std::uint64_t sent_since_sample = 0;
  std::size_t first_hop = 0;
  std::vector<std::size_t> next_hop;  // by hop index; kNone after the last

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void route(std::size_t hop_count) {
    std::vector<std::size_t> path = spec.path;
    if (path.empty()) {
      for (std::size_t h = 0; h < hop_count; ++h) path.push_back(h);
    }
    first_hop = path.front();
    next_hop.assign(hop_count, kNone);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) next_hop[path[k]] = path[k + 1];
  }

  static std::variant<AbcSender, CubicSender> make_sender(const FlowSpec& s) {
    if (s.scheme == Scheme::Abc) return AbcSender(s.id, s.abc);
    return CubicSender(s.id, s.cubic, s.ecn_capable);
  }

  FlowRuntime(FlowSpec s, bool is_short)
      : spec(std::move(s)), short_flow(is_short), sender(make_sender(spec)), echo(spec.id, spec.ack_coalesce) {}

  const Outstanding& outstanding() const {
    return std::visit([](const auto& snd) -> const Outstanding& { return snd.outstanding(); }, sender);
  }
  const SenderStats& stats() const {
    return std::visit([](const auto& snd) -> const SenderStats& { return snd.stats(); }, sender);
  }
  std::size_t sendable() const {
    return std::visit([](const auto& snd) { return snd.sendable(); }, sender);
  }
};

struct HopRuntime {
  LinkProcess link;
  std::optional<AbcRouter> abc;
  std::optional<DroptailRouter> droptail;
  SimTime delay_to_next = 0;
  bool busy = false;
  HopLog log;

  explicit HopRuntime(const HopSpec& spec) : link(*spec.link), delay_to_next(spec.delay_to_next) {
    link.reset_cursor();
    log.name = spec.name;
    if (spec.discipline == Discipline::Abc) {
      abc.emplace(spec.abc, link);
    } else {
      droptail.emplace(spec.droptail);
    }
  }

  std::size_t queued() const { return abc ? abc->queued() : droptail->queued(); }
  bool empty() const { return queued() == 0; }
};

class Simulation {
 public:
  Simulation(const Topology& topo, SimTime duration, std::uint64_t seed, const RunOptions& opts)
      : duration_(duration), opts_(opts) {
    topo.validate();
    if (opts_.sample_interval == 0) throw ConfigError("sample interval must be positive");
    for (const auto& h : topo.hops) hops_.push_back(std::make_unique<HopRuntime>(h));
    for (const auto& f : topo.flows) add_flow(f, false);
    for (std::size_t i = 0; i < flows_.size(); ++i) {
      push(flows_[i]->spec.start, EventKind::FlowStart, i);
    }
    if (topo.short_flows && topo.short_flows->load_bps > 0.0) {
      short_spec_ = *topo.short_flows;
      // Sub-stream 1 of the run seed drives short-flow arrivals.
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1u};
      std::mt19937_64 streams(seq);
      short_arrivals_ =
          short_flow_generator(short_spec_->load_bps, short_spec_->flow_bytes, streams(), 0, duration);
      if (!short_arrivals_.empty()) push(short_arrivals_[0], EventKind::ShortFlowArrival, 0);
    }
    // Sub-stream 2 jitters departures.
    std::seed_seq jitter_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 2u};
    jitter_rng_.seed(jitter_seq);
    push(0, EventKind::Sample, 0);
  }

  MetricsLog run() {
    log_.duration = duration_;
    while (!events_.empty() && events_.top().time < duration_) {
      Event ev = events_.top();
      events_.pop();
      dispatch(ev);
    }
    return finish();
  }

 private:
  void push(SimTime t, EventKind kind, std::size_t target, std::uint64_t tag = 0,
            std::variant<std::monostate, Packet, Ack> payload = {}) {
    events_.push(Event{t, next_order_++, kind, target, tag, std::move(payload)});
  }

  std::size_t add_flow(const FlowSpec& spec, bool is_short) {
    const std::size_t idx = flows_.size();
    flows_.push_back(std::make_unique<FlowRuntime>(spec, is_short));
    flows_.back()->route(hops_.size());
    index_.emplace(spec.id, idx);
    return idx;
  }

  void dispatch(const Event& ev) {
    const SimTime now = ev.time;
    switch (ev.kind) {
      case EventKind::FlowStart:
        flows_[ev.target]->started = true;
        try_send(ev.target, now);
        break;
      case EventKind::ShortFlowArrival:
        on_short_arrival(ev.target, now);
        break;
      case EventKind::HopArrival:
        --in_transit_;
        on_hop_arrival(ev.target, std::get<Packet>(ev.payload), now);
        break;
      case EventKind::HopDequeue:
        on_hop_dequeue(ev.target, now);
        break;
      case EventKind::ReceiverArrival:
        --in_transit_;
        on_receive(std::get<Packet>(ev.payload), now);
        break;
      case EventKind::AckArrival:
        on_ack(ev.target, std::get<Ack>(ev.payload), now);
        break;
      case EventKind::RtoTimer:
        on_rto(ev.target, now);
        break;
      case EventKind::DelayedAck: {
        auto& fl = *flows_[ev.target];
        if (ev.tag == fl.ack_generation) send_acks(ev.target, fl.echo.flush(), now);
        break;
      }
      case EventKind::Sample:
        sample(now);
        push(now + opts_.sample_interval, EventKind::Sample, 0);
        break;
    }
  }

  void on_short_arrival(std::size_t i, SimTime now) {
    FlowSpec spec;
    spec.id = short_spec_->first_id + static_cast<FlowId>(i);
    spec.scheme = Scheme::Cubic;
    spec.start = now;
    spec.fwd_delay = short_spec_->fwd_delay;
    spec.rev_delay = short_spec_->rev_delay;
    spec.bytes = short_spec_->flow_bytes;
    spec.path = short_spec_->path;
    const std::size_t idx = add_flow(spec, true);
    flows_[idx]->started = true;
    try_send(idx, now);
    if (i + 1 < short_arrivals_.size()) push(short_arrivals_[i + 1], EventKind::ShortFlowArrival, i + 1);
  }

  void try_send(std::size_t idx, SimTime now) {
    auto& fl = *flows_[idx];
    if (!fl.started || fl.finished) return;
    if (!fl.spec.stop || now < *fl.spec.stop) {
      const std::size_t room = fl.sendable();
      for (std::size_t k = 0; k < room; ++k) {
        const auto& out = fl.outstanding();
        if (fl.spec.bytes) {
          const std::uint64_t committed = out.bytes_acked() + out.inflight_count() * std::uint64_t{kMtu};
          if (committed >= *fl.spec.bytes) break;
        }
        if (out.inflight_count() == 0) fl.last_progress = now;
        Packet pkt = std::visit([&](auto& snd) { return snd.transmit(now, kMtu); }, fl.sender);
        ++sent_;
        fl.sent_since_sample += pkt.size;
        ++in_transit_;
        SimTime launch = now + fl.spec.fwd_delay;
        if (opts_.send_jitter > 0) {
          launch += std::uniform_int_distribution<SimTime>(0, opts_.send_jitter)(jitter_rng_);
          launch = std::max(launch, fl.last_launch);  // no reordering
          fl.last_launch = launch;
        }
        push(launch, EventKind::HopArrival, fl.first_hop, 0, pkt);
      }
      arm_rto(idx, now);
    }
    if (auto* a = std::get_if<AbcSender>(&fl.sender)) {
      a->apply_cap();
      a->check_cap();
    }
  }

  void arm_rto(std::size_t idx, SimTime /*now*/) {
    auto& fl = *flows_[idx];
    if (fl.rto_armed || fl.outstanding().inflight_count() == 0) return;
    fl.rto_armed = true;
    push(fl.last_progress + fl.outstanding().rto(), EventKind::RtoTimer, idx);
  }

  void on_rto(std::size_t idx, SimTime now) {
    auto& fl = *flows_[idx];
    fl.rto_armed = false;
    if (fl.finished || fl.outstanding().inflight_count() == 0) return;
    const SimTime deadline = fl.last_progress + fl.outstanding().rto();
    if (now < deadline) {
      fl.rto_armed = true;
      push(deadline, EventKind::RtoTimer, idx);
      return;
    }
    std::visit([&](auto& snd) { snd.on_timeout(now); }, fl.sender);
    fl.last_progress = now;
    try_send(idx, now);
  }

  void on_hop_arrival(std::size_t h, Packet pkt, SimTime now) {
    auto& hop = *hops_[h];
    std::optional<Packet> dropped = hop.abc ? hop.abc->enqueue(pkt, now) : hop.droptail->enqueue(pkt, now);
    if (dropped) {
      ++dropped_;
      ++hop.log.dropped;
      log_.drops.push_back({dropped->flow_id, dropped->seq, now, static_cast<std::uint32_t>(h)});
    }
    if (!hop.busy && !hop.empty()) schedule_dequeue(h, now);
  }

  void schedule_dequeue(std::size_t h, SimTime now) {
    auto& hop = *hops_[h];
    hop.busy = true;
    push(hop.link.claim(now, kMtu), EventKind::HopDequeue, h);
  }

  void on_hop_dequeue(std::size_t h, SimTime now) {
    auto& hop = *hops_[h];
    Packet pkt;
    QueueKind kind = QueueKind::Legacy;
    if (hop.abc) {
      auto res = hop.abc->on_dequeue(now);
      pkt = res.packet;
      kind = res.record.queue;
      if (opts_.record_dequeues) hop.log.dequeues.push_back(res.record);
    } else {
      pkt = hop.droptail->dequeue(now);
    }
    hop.log.delivered_bytes += pkt.size;
    if (opts_.record_hop_records)
      hop.log.records.push_back({pkt.flow_id, pkt.enqueue_time, pkt.dequeue_time, pkt.size, kind});
    ++in_transit_;
    const std::size_t next = flows_[index_.at(pkt.flow_id)]->next_hop[h];
    if (next != FlowRuntime::kNone) {
      push(now + hop.delay_to_next, EventKind::HopArrival, next, 0, pkt);
    } else {
      push(now + hop.delay_to_next, EventKind::ReceiverArrival, 0, 0, pkt);
    }
    if (hop.empty()) {
      hop.busy = false;
    } else {
      schedule_dequeue(h, now);
    }
  }

  void on_receive(const Packet& pkt, SimTime now) {
    ++delivered_;
    const std::size_t idx = index_.at(pkt.flow_id);
    auto& fl = *flows_[idx];
    fl.bytes_delivered += pkt.size;
    log_.deliveries.push_back({pkt.flow_id, pkt.seq, pkt.send_time, now, pkt.size});
    send_acks(idx, fl.echo.on_packet(pkt), now);
    if (fl.echo.pending() == 1) {
      ++fl.ack_generation;
      push(now + opts_.delayed_ack_timeout, EventKind::DelayedAck, idx, fl.ack_generation);
    }
  }

  void send_acks(std::size_t idx, const std::vector<Ack>& acks, SimTime now) {
    for (const auto& a : acks) push(now + flows_[idx]->spec.rev_delay, EventKind::AckArrival, idx, 0, a);
  }

  void on_ack(std::size_t idx, const Ack& ack, SimTime now) {
    auto& fl = *flows_[idx];
    const auto before = fl.stats().acks;
    std::visit([&](auto& snd) { snd.on_ack(ack, now); }, fl.sender);
    if (fl.stats().acks != before) fl.last_progress = now;
    if (fl.spec.bytes && !fl.finished && fl.outstanding().bytes_acked() >= *fl.spec.bytes) {
      fl.finished = true;
      fl.finish_time = now;
      return;
    }
    try_send(idx, now);
  }

  void sample(SimTime now) {
    for (auto& p : flows_) {
      auto& fl = *p;
      if (fl.short_flow || !fl.started || fl.finished) continue;
      FlowSample s;
      s.time = now;
      s.flow = fl.spec.id;
      s.inflight = fl.outstanding().inflight_packets();
      if (const auto* a = std::get_if<AbcSender>(&fl.sender)) {
        s.w_abc = a->windows().w_abc();
        s.w_cubic = a->windows().params().dual_window ? a->windows().w_cubic() : 0.0;
      } else {
        s.w_cubic = std::get<CubicSender>(fl.sender).window().cwnd();
      }
      s.send_rate_bps = static_cast<double>(fl.sent_since_sample) * 8.0 / to_seconds(opts_.sample_interval);
      fl.sent_since_sample = 0;
      log_.samples.push_back(s);
    }
  }

  MetricsLog finish() {
    std::uint64_t queued = 0;
    for (auto& hp : hops_) {
      queued += hp->queued();
      hp->log.capacity_bits = hp->link.capacity_bits(0, duration_);
      log_.hops.push_back(std::move(hp->log));
    }
    for (const auto& p : flows_) {
      const auto& fl = *p;
      if (!fl.started) continue;
      const auto& st = fl.stats();
      FlowSummary s;
      s.flow = fl.spec.id;
      s.scheme = fl.spec.scheme;
      s.short_flow = fl.short_flow;
      s.start = fl.spec.start;
      s.stop = fl.finished ? fl.finish_time : (fl.spec.stop ? std::min(*fl.spec.stop, duration_) : duration_);
      s.bytes_sent = fl.outstanding().bytes_sent();
      s.bytes_delivered = fl.bytes_delivered;
      s.congestion_events = st.congestion_events;
      s.timeouts = st.timeouts;
      s.cap_checks = st.cap_checks;
      s.cap_violations = st.cap_violations;
      s.accel_bytes = st.accel_bytes;
      s.brake_bytes = st.brake_bytes;
      log_.flows.push_back(s);
    }
    log_.conservation = {sent_, delivered_, dropped_, in_transit_, queued};
    if (duration_ == 0) {
      log_.hops.clear();
      log_.flows.clear();
    }
    return std::move(log_);
  }

  SimTime duration_;
  RunOptions opts_;
  std::vector<std::unique_ptr<HopRuntime>> hops_;
  std::vector<std::unique_ptr<FlowRuntime>> flows_;
  std::unordered_map<FlowId, std::size_t> index_;
  std::optional<ShortFlowSpec> short_spec_;
  std::vector<SimTime> short_arrivals_;
  std::mt19937_64 jitter_rng_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t next_order_ = 0;
  MetricsLog log_;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t in_transit_ = 0;
};

}  // namespace

MetricsLog run(const Topology& topology, SimTime duration, std::uint64_t seed, const RunOptions& options) {
  Simulation sim(topology, duration, seed, options);
  return sim.run();
}

}  // namespace abc
