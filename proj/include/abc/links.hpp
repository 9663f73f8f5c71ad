#pragma once

#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "abc/core.hpp"

namespace abc {

/// Returned when a link never delivers again.
constexpr SimTime kNever = ~SimTime{0};

struct RateStep {
  SimTime start = 0;
  double rate_bps = 0.0;
};

/// Time-varying link capacity. Rate-based variants serialize one packet at a
/// time; trace variants deliver one MTU per listed opportunity (Mahimahi
/// shape, looped with period equal to the last timestamp).
class LinkProcess {
 public:
  enum class Kind { Fixed, Step, Trace };

  static LinkProcess fixed(double rate_bps);
  static LinkProcess step(std::vector<RateStep> schedule);
  static LinkProcess trace(std::vector<SimTime> opportunities);
  /// One integer per line, the millisecond offset of one MTU opportunity.
  static LinkProcess load_trace(const std::filesystem::path& path);

  Kind kind() const;

  /// Earliest time >= now at which one MTU may leave, ignoring the cursor.
  SimTime next_delivery(SimTime now) const;

  /// Reserves the next unused delivery slot at or after `now` for a packet of
  /// `bytes` and returns its departure time. Advances the cursor.
  SimTime claim(SimTime now, std::uint32_t bytes = kMtu);

  /// Deliverable bits in the half-open window (t0, t1].
  double capacity_bits(SimTime t0, SimTime t1) const;

  /// Nominal rate at t; for traces, the average over one period.
  double rate_at(SimTime t) const;

  void reset_cursor();

 private:
  struct Fixed {
    double rate_bps;
  };
  struct Step {
    std::vector<RateStep> schedule;
  };
  struct Trace {
    std::vector<SimTime> times;
    SimTime period;
  };

  explicit LinkProcess(std::variant<Fixed, Step, Trace> v) : impl_(std::move(v)) {}

  std::uint64_t trace_first_index(const Trace& tr, SimTime t) const;
  SimTime trace_time(const Trace& tr, std::uint64_t index) const;
  std::size_t step_segment(const Step& st, SimTime t) const;

  std::variant<Fixed, Step, Trace> impl_;
  SimTime busy_until_ = 0;
  std::uint64_t cursor_ = 0;
};

/// Serialization time of `bytes` at `rate_bps`, rounded to the nearest
/// microsecond and never zero.
SimTime transmission_time(std::uint32_t bytes, double rate_bps);

/// Router-side oracle view of capacity: opportunities over the trailing
/// window T, scaled to bits/s.
class OracleRateView {
 public:
  OracleRateView(const LinkProcess& link, SimTime window);

  double capacity_bps(SimTime now) const;
  SimTime window() const { return window_; }

 private:
  const LinkProcess* link_;
  SimTime window_;
};

}  // namespace abc
