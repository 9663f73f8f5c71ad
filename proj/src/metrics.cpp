#include "abc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace abc {

std::string_view to_string(Scheme s) { return s == Scheme::Abc ? "abc" : "cubic"; }

double utilization(const MetricsLog& log, std::size_t hop) {
  const auto& h = log.hops.at(hop);
  if (h.capacity_bits <= 0.0) return 0.0;
  return static_cast<double>(h.delivered_bytes) * 8.0 / h.capacity_bits;
}

SimTime percentile_nearest_rank(std::vector<SimTime> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percentile must lie in (0, 1]");
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  return values[rank - 1];
}

std::vector<SimTime> hop_delays(const MetricsLog& log, std::size_t hop, const DelayFilter& filter) {
  std::vector<SimTime> out;
  for (const auto& r : log.hops.at(hop).records) {
    if (r.dequeue < filter.from || r.dequeue >= filter.to) continue;
    if (filter.queue && r.queue != *filter.queue) continue;
    out.push_back(r.delay());
  }
  return out;
}

SimTime delay_percentile(const MetricsLog& log, std::size_t hop, double p, const DelayFilter& filter) {
  return percentile_nearest_rank(hop_delays(log, hop, filter), p);
}

double mean_delay(const MetricsLog& log, std::size_t hop, const DelayFilter& filter) {
  const auto d = hop_delays(log, hop, filter);
  if (d.empty()) throw std::invalid_argument("mean delay of an empty sample");
  double sum = 0.0;
  for (auto v : d) sum += static_cast<double>(v);
  return sum / static_cast<double>(d.size());
}

double jain_index(std::span<const double> throughputs) {
  if (throughputs.empty()) throw std::invalid_argument("jain index of an empty list");
  double sum = 0.0;
  double sq = 0.0;
  for (double x : throughputs) {
    if (x < 0.0) throw std::invalid_argument("jain index needs non-negative throughputs");
    sum += x;
    sq += x * x;
  }
  if (sq == 0.0) throw std::invalid_argument("jain index undefined for all-zero throughputs");
  return sum * sum / (static_cast<double>(throughputs.size()) * sq);
}

double flow_throughput(const MetricsLog& log, FlowId flow, SimTime from, SimTime to) {
  if (to <= from) return 0.0;
  std::uint64_t bytes = 0;
  for (const auto& d : log.deliveries) {
    if (d.flow == flow && d.recv_time >= from && d.recv_time < to) bytes += d.size;
  }
  return static_cast<double>(bytes) * 8.0 / to_seconds(to - from);
}

std::vector<double> throughput_series(const MetricsLog& log, FlowId flow, SimTime bin) {
  if (bin == 0) throw std::invalid_argument("throughput bin must be positive");
  std::vector<double> out((log.duration + bin - 1) / bin, 0.0);
  for (const auto& d : log.deliveries) {
    if (d.flow != flow) continue;
    const auto i = d.recv_time / bin;
    if (i < out.size()) out[i] += d.size * 8.0;
  }
  for (auto& v : out) v /= to_seconds(bin);
  return out;
}

std::string summary_text(const MetricsLog& log) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "duration_s = " << to_seconds(log.duration) << "\n";
  os << "packets_sent = " << log.conservation.sent << "\n";
  os << "packets_delivered = " << log.conservation.delivered << "\n";
  os << "packets_dropped = " << log.conservation.dropped << "\n";
  os << "packets_in_transit = " << log.conservation.in_transit << "\n";
  os << "packets_queued = " << log.conservation.queued << "\n";
  for (std::size_t h = 0; h < log.hops.size(); ++h) {
    const auto& hop = log.hops[h];
    const std::string key = "hop." + hop.name + ".";
    os << key << "utilization = " << utilization(log, h) << "\n";
    os << key << "dropped = " << hop.dropped << "\n";
    if (!hop.records.empty()) {
      os << key << "delay_mean_ms = " << mean_delay(log, h) / 1000.0 << "\n";
      os << key << "delay_p95_ms = " << static_cast<double>(delay_percentile(log, h, 0.95)) / 1000.0
         << "\n";
    }
  }
  const SimTime from = steady_window_start(log.duration);
  std::vector<double> long_rates;
  std::uint64_t short_flows = 0;
  for (const auto& f : log.flows) {
    if (f.short_flow) {
      ++short_flows;
      continue;
    }
    const double rate = flow_throughput(log, f.flow, from, log.duration);
    long_rates.push_back(rate);
    const std::string key = "flow." + std::to_string(f.flow) + ".";
    os << key << "scheme = " << to_string(f.scheme) << "\n";
    os << key << "throughput_mbps = " << rate / 1e6 << "\n";
    os << key << "bytes_delivered = " << f.bytes_delivered << "\n";
    os << key << "congestion_events = " << f.congestion_events << "\n";
    os << key << "timeouts = " << f.timeouts << "\n";
    if (f.scheme == Scheme::Abc) os << key << "cap_violations = " << f.cap_violations << "\n";
  }
  os << "short_flows = " << short_flows << "\n";
  const bool any_traffic = std::any_of(long_rates.begin(), long_rates.end(), [](double r) { return r > 0; });
  if (any_traffic) os << "jain_index = " << jain_index(long_rates) << "\n";
  return os.str();
}

}  // namespace abc
