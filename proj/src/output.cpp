#include "abc/output.hpp"

#include <fstream>
#include <iomanip>
#include <map>

namespace abc {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << std::setprecision(10);
  return out;
}

void write_flow(const MetricsLog& log, FlowId flow, const std::filesystem::path& p) {
  auto out = open_out(p);
  out << "time_s,w_abc,w_cubic,inflight,send_rate_bps,recv_rate_bps\n";
  std::vector<const FlowSample*> rows;
  for (const auto& s : log.samples) {
    if (s.flow == flow) rows.push_back(&s);
  }
  if (rows.empty()) return;
  // Receive rate over the interval ending at each sample.
  std::map<SimTime, std::uint64_t> recv;
  for (const auto& d : log.deliveries) {
    if (d.flow == flow) recv[d.recv_time] += d.size;
  }
  SimTime prev = 0;
  for (const auto* s : rows) {
    std::uint64_t bytes = 0;
    for (auto it = recv.lower_bound(prev); it != recv.end() && it->first < s->time; ++it) bytes += it->second;
    const double span = to_seconds(s->time - prev);
    out << to_seconds(s->time) << ',' << s->w_abc << ',' << s->w_cubic << ',' << s->inflight << ','
        << s->send_rate_bps << ',' << (span > 0 ? bytes * 8.0 / span : 0.0) << "\n";
    prev = s->time;
  }
}

void write_router(const HopLog& hop, SimTime duration, SimTime bin, const std::filesystem::path& p) {
  auto out = open_out(p);
  out << "time_s,throughput_bps,abc_bytes,legacy_bytes,mean_delay_ms,max_delay_ms\n";
  const std::size_t bins = static_cast<std::size_t>((duration + bin - 1) / bin);
  std::vector<std::uint64_t> abc_bytes(bins, 0), legacy_bytes(bins, 0), count(bins, 0);
  std::vector<double> delay_sum(bins, 0.0);
  std::vector<SimTime> delay_max(bins, 0);
  for (const auto& r : hop.records) {
    const auto i = static_cast<std::size_t>(r.dequeue / bin);
    if (i >= bins) continue;
    (r.queue == QueueKind::Abc ? abc_bytes : legacy_bytes)[i] += r.size;
    ++count[i];
    delay_sum[i] += static_cast<double>(r.delay());
    delay_max[i] = std::max(delay_max[i], r.delay());
  }
  for (std::size_t i = 0; i < bins; ++i) {
    const double bytes = static_cast<double>(abc_bytes[i] + legacy_bytes[i]);
    out << to_seconds(i * bin) << ',' << bytes * 8.0 / to_seconds(bin) << ',' << abc_bytes[i] << ','
        << legacy_bytes[i] << ',' << (count[i] ? delay_sum[i] / count[i] / 1000.0 : 0.0) << ','
        << static_cast<double>(delay_max[i]) / 1000.0 << "\n";
  }
}

}  // namespace

void write_run_outputs(const MetricsLog& log, const std::filesystem::path& dir, SimTime router_bin) {
  std::filesystem::create_directories(dir / "flows");
  std::filesystem::create_directories(dir / "routers");
  {
    auto out = open_out(dir / "summary.txt");
    out << summary_text(log);
  }
  for (const auto& f : log.flows) {
    if (!f.short_flow) write_flow(log, f.flow, dir / "flows" / (std::to_string(f.flow) + ".csv"));
  }
  for (const auto& h : log.hops) write_router(h, log.duration, router_bin, dir / "routers" / (h.name + ".csv"));
}

}  // namespace abc
