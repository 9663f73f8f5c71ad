#include "abc/topk.hpp"

#include <algorithm>

namespace abc {

SpaceSavingSketch::SpaceSavingSketch(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("space saving sketch needs at least one counter");
  entries_.reserve(capacity);
}

void SpaceSavingSketch::record(FlowId flow, std::uint64_t bytes) {
  total_ += bytes;
  for (auto& e : entries_) {
    if (e.flow == flow) {
      e.count += bytes;
      return;
    }
  }
  if (entries_.size() < capacity_) {
    entries_.push_back({flow, bytes, 0});
    return;
  }
  auto victim = std::min_element(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
    return a.count != b.count ? a.count < b.count : a.flow < b.flow;
  });
  const std::uint64_t inherited = victim->count;
  *victim = {flow, inherited + bytes, inherited};
}

std::vector<SketchEntry> SpaceSavingSketch::entries() const {
  auto out = entries_;
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.count != b.count ? a.count > b.count : a.flow < b.flow;
  });
  return out;
}

void SpaceSavingSketch::reset() {
  entries_.clear();
  total_ = 0;
}

std::vector<FlowRate> top_rates(const SpaceSavingSketch& sketch, SimTime interval) {
  if (interval == 0) throw std::invalid_argument("top_rates interval must be positive");
  const double secs = to_seconds(interval);
  std::vector<FlowRate> out;
  for (const auto& e : sketch.entries()) {
    out.push_back({e.flow, static_cast<double>(e.count) * 8.0 / secs,
                   static_cast<double>(e.count - e.error) * 8.0 / secs});
  }
  return out;
}

}  // namespace abc
