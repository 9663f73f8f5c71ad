#include "abc/links.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace abc {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

SimTime transmission_time(std::uint32_t bytes, double rate_bps) {
  const double us = static_cast<double>(bytes) * 8.0 / rate_bps * 1e6;
  return std::max<SimTime>(1, static_cast<SimTime>(std::llround(us)));
}

LinkProcess LinkProcess::fixed(double rate_bps) {
  if (!(rate_bps > 0.0)) throw ConfigError("fixed link rate must be positive");
  return LinkProcess(Fixed{rate_bps});
}

LinkProcess LinkProcess::step(std::vector<RateStep> schedule) {
  if (schedule.empty()) throw ConfigError("step link needs at least one segment");
  if (schedule.front().start != 0) throw ConfigError("step schedule must start at time 0");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i].start <= schedule[i - 1].start)
      throw ConfigError("step schedule start times must be strictly increasing");
  }
  bool any_positive = false;
  for (const auto& s : schedule) {
    if (s.rate_bps < 0.0) throw ConfigError("step rate must be non-negative");
    any_positive = any_positive || s.rate_bps > 0.0;
  }
  if (!any_positive) throw ConfigError("step schedule never carries traffic");
  return LinkProcess(Step{std::move(schedule)});
}

LinkProcess LinkProcess::trace(std::vector<SimTime> opportunities) {
  if (opportunities.empty()) throw ConfigError("trace link has no delivery opportunities");
  if (!std::is_sorted(opportunities.begin(), opportunities.end()))
    throw ConfigError("trace timestamps must be non-decreasing");
  const SimTime period = opportunities.back();
  if (period == 0) throw ConfigError("trace period (last timestamp) must be positive");
  return LinkProcess(Trace{std::move(opportunities), period});
}

LinkProcess LinkProcess::load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path.string());
  std::vector<SimTime> times;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::size_t used = 0;
    unsigned long long ms = 0;
    try {
      ms = std::stoull(line.substr(first), &used);
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected an integer");
    }
    times.push_back(msec(ms));
  }
  return trace(std::move(times));
}

LinkProcess::Kind LinkProcess::kind() const {
  return std::visit(Overloaded{[](const Fixed&) { return Kind::Fixed; },
                               [](const Step&) { return Kind::Step; },
                               [](const Trace&) { return Kind::Trace; }},
                    impl_);
}

std::size_t LinkProcess::step_segment(const Step& st, SimTime t) const {
  auto it = std::upper_bound(st.schedule.begin(), st.schedule.end(), t,
                             [](SimTime v, const RateStep& s) { return v < s.start; });
  return static_cast<std::size_t>(std::distance(st.schedule.begin(), it)) - 1;
}

std::uint64_t LinkProcess::trace_first_index(const Trace& tr, SimTime t) const {
  const std::uint64_t n = tr.times.size();
  if (t == 0) {
    return static_cast<std::uint64_t>(
        std::lower_bound(tr.times.begin(), tr.times.end(), SimTime{0}) - tr.times.begin());
  }
  const std::uint64_t cycle = (t - 1) / tr.period;
  const SimTime rem = t - cycle * tr.period;  // in [1, period]
  const auto pos = std::lower_bound(tr.times.begin(), tr.times.end(), rem) - tr.times.begin();
  return cycle * n + static_cast<std::uint64_t>(pos);
}

SimTime LinkProcess::trace_time(const Trace& tr, std::uint64_t index) const {
  const std::uint64_t n = tr.times.size();
  return (index / n) * tr.period + tr.times[index % n];
}

SimTime LinkProcess::next_delivery(SimTime now) const {
  return std::visit(
      Overloaded{
          [&](const Fixed& f) { return now + transmission_time(kMtu, f.rate_bps); },
          [&](const Step& st) {
            std::size_t seg = step_segment(st, now);
            SimTime start = now;
            while (st.schedule[seg].rate_bps <= 0.0) {
              // Links are down until the next positive segment.
              if (++seg == st.schedule.size()) return kNever;
              start = st.schedule[seg].start;
            }
            return start + transmission_time(kMtu, st.schedule[seg].rate_bps);
          },
          [&](const Trace& tr) { return trace_time(tr, trace_first_index(tr, now)); }},
      impl_);
}

SimTime LinkProcess::claim(SimTime now, std::uint32_t bytes) {
  return std::visit(
      Overloaded{[&](const Fixed& f) {
                   const SimTime start = std::max(now, busy_until_);
                   busy_until_ = start + transmission_time(bytes, f.rate_bps);
                   return busy_until_;
                 },
                 [&](const Step& st) {
                   SimTime start = std::max(now, busy_until_);
                   std::size_t seg = step_segment(st, start);
                   while (st.schedule[seg].rate_bps <= 0.0) {
                     if (++seg == st.schedule.size()) return busy_until_ = kNever;
                     start = st.schedule[seg].start;
                   }
                   busy_until_ = start + transmission_time(bytes, st.schedule[seg].rate_bps);
                   return busy_until_;
                 },
                 [&](const Trace& tr) {
                   const std::uint64_t k = std::max(cursor_, trace_first_index(tr, now));
                   cursor_ = k + 1;
                   return trace_time(tr, k);
                 }},
      impl_);
}

double LinkProcess::capacity_bits(SimTime t0, SimTime t1) const {
  if (t1 <= t0) return 0.0;
  return std::visit(
      Overloaded{[&](const Fixed& f) { return f.rate_bps * to_seconds(t1 - t0); },
                 [&](const Step& st) {
                   double bits = 0.0;
                   for (std::size_t i = step_segment(st, t0); i < st.schedule.size(); ++i) {
                     const SimTime seg_begin = std::max(t0, st.schedule[i].start);
                     const SimTime seg_end =
                         i + 1 < st.schedule.size() ? std::min(t1, st.schedule[i + 1].start) : t1;
                     if (seg_begin >= t1) break;
                     if (seg_end > seg_begin)
                       bits += st.schedule[i].rate_bps * to_seconds(seg_end - seg_begin);
                   }
                   return bits;
                 },
                 [&](const Trace& tr) {
                   const auto count = trace_first_index(tr, t1 + 1) - trace_first_index(tr, t0 + 1);
                   return static_cast<double>(count) * kMtu * 8.0;
                 }},
      impl_);
}

double LinkProcess::rate_at(SimTime t) const {
  return std::visit(Overloaded{[](const Fixed& f) { return f.rate_bps; },
                               [&](const Step& st) { return st.schedule[step_segment(st, t)].rate_bps; },
                               [](const Trace& tr) {
                                 return static_cast<double>(tr.times.size()) * kMtu * 8.0 /
                                        to_seconds(tr.period);
                               }},
                    impl_);
}

void LinkProcess::reset_cursor() {
  busy_until_ = 0;
  cursor_ = 0;
}

OracleRateView::OracleRateView(const LinkProcess& link, SimTime window)
    : link_(&link), window_(window) {
  if (window == 0) throw ConfigError("oracle window must be positive");
}

double OracleRateView::capacity_bps(SimTime now) const {
  // Before one full window has elapsed the oracle looks at [0, T].
  const SimTime end = std::max(now, window_);
  return link_->capacity_bits(end - window_, end) / to_seconds(window_);
}

}  // namespace abc
