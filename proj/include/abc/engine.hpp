#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abc/abc_router.hpp"
#include "abc/abc_sender.hpp"
#include "abc/legacy.hpp"
#include "abc/links.hpp"
#include "abc/metrics.hpp"

namespace abc {

/// One long-running (or byte-limited) flow. The minimum RTT is fwd_delay plus
/// the delay_to_next of each hop on the path plus rev_delay.
struct FlowSpec {
  FlowId id = 0;
  Scheme scheme = Scheme::Abc;
  SimTime start = 0;
  std::optional<SimTime> stop;          // stops sending new data
  SimTime fwd_delay = msec(50);         // sender to first hop
  SimTime rev_delay = msec(50);         // receiver back to sender
  std::optional<std::uint64_t> bytes;   // byte-limited when set
  unsigned ack_coalesce = 2;
  AbcSenderParams abc;
  CubicParams cubic;
  bool ecn_capable = false;  // Cubic only
  /// Hop indices crossed, strictly increasing; empty means every hop.
  std::vector<std::size_t> path;
};

enum class Discipline : std::uint8_t { Abc, Droptail };

std::string_view to_string(Discipline d);

struct HopSpec {
  std::string name;
  std::optional<LinkProcess> link;
  Discipline discipline = Discipline::Abc;
  AbcRouterConfig abc;
  DroptailConfig droptail;
  SimTime delay_to_next = 0;  // propagation to the next hop or the receiver
};

/// Poisson arrivals of short Cubic flows into the legacy queue.
struct ShortFlowSpec {
  double load_bps = 0.0;
  std::uint64_t flow_bytes = kShortFlowBytes;
  SimTime fwd_delay = msec(50);
  SimTime rev_delay = msec(50);
  FlowId first_id = 1000000;
  std::vector<std::size_t> path;
};

struct Topology {
  std::vector<HopSpec> hops;
  std::vector<FlowSpec> flows;
  std::optional<ShortFlowSpec> short_flows;

  /// Throws ConfigError on an unusable topology.
  void validate() const;
};

struct RunOptions {
  bool record_dequeues = false;
  bool record_hop_records = true;
  SimTime sample_interval = msec(10);
  SimTime delayed_ack_timeout = msec(10);
  /// Each packet reaches its first hop up to this much later than the
  /// propagation delay (uniform, per-flow order kept). Breaks the phase
  /// locking deterministic tail-drop queues otherwise show.
  SimTime send_jitter = 0;
};

/// Runs the simulation up to (but excluding) `duration`. Deterministic in
/// (topology, duration, seed, options).
MetricsLog run(const Topology& topology, SimTime duration, std::uint64_t seed,
               const RunOptions& options = {});

}  // namespace abc
