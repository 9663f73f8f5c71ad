#pragma once

#include <cstdint>
#include <vector>

#include "abc/core.hpp"

namespace abc {

struct SketchEntry {
  FlowId flow = 0;
  std::uint64_t count = 0;  // bytes, overestimate
  std::uint64_t error = 0;  // bytes inherited on eviction

  friend bool operator==(const SketchEntry&, const SketchEntry&) = default;
};

/// Space Saving heavy-hitter sketch over byte counts with K counters.
/// For a tracked flow: count - error <= true bytes <= count.
class SpaceSavingSketch {
 public:
  explicit SpaceSavingSketch(std::size_t capacity);

  void record(FlowId flow, std::uint64_t bytes);

  /// Entries by descending count, ties by ascending flow id.
  std::vector<SketchEntry> entries() const;

  std::uint64_t total_bytes() const { return total_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  void reset();

 private:
  std::size_t capacity_;
  std::vector<SketchEntry> entries_;
  std::uint64_t total_ = 0;
};

struct FlowRate {
  FlowId flow = 0;
  double rate_bps = 0.0;        // count / interval
  double guaranteed_bps = 0.0;  // (count - error) / interval
};

/// Per-flow average rates over one measurement epoch, descending.
std::vector<FlowRate> top_rates(const SpaceSavingSketch& sketch, SimTime interval);

}  // namespace abc
