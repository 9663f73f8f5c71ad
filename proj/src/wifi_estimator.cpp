#include "abc/wifi_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace abc {

double instantaneous_rate(const AmpduAckEvent& e) {
  if (e.inter_ack == 0) throw std::invalid_argument("inter-ACK time must be positive");
  return e.batch * e.frame_bits / to_seconds(e.inter_ack);
}

double backlogged_projection(const AmpduAckEvent& e) {
  if (e.inter_ack == 0) throw std::invalid_argument("inter-ACK time must be positive");
  if (!(e.bitrate_bps > 0.0)) throw std::invalid_argument("bitrate must be positive");
  const double missing = static_cast<double>(e.max_batch) - static_cast<double>(e.batch);
  const double projected = to_seconds(e.inter_ack) + missing * e.frame_bits / e.bitrate_bps;
  return e.max_batch * e.frame_bits / projected;
}

CapacityFilter::CapacityFilter(SimTime window) : window_(window) {
  if (window == 0) throw ConfigError("estimator window must be positive");
}

CapacityEstimate CapacityFilter::add(const AmpduAckEvent& e) {
  const SimTime now = e.time;
  if (!origin_) origin_ = now > e.inter_ack ? now - e.inter_ack : 0;
  samples_.push_back({now, backlogged_projection(e), e.batch * e.frame_bits});
  while (!samples_.empty() && samples_.front().time + window_ <= now) samples_.pop_front();

  const double half_life = to_seconds(window_) / 2.0;
  double wsum = 0.0;
  double acc = 0.0;
  double bits = 0.0;
  for (const auto& s : samples_) {
    const double w = std::exp2(-to_seconds(now - s.time) / half_life);
    wsum += w;
    acc += w * s.projection;
    bits += s.bits;
  }
  CapacityEstimate out;
  out.time = now;
  out.filtered_bps = acc / wsum;
  // Until a full window has been observed, measure over what has been seen.
  const SimTime span = std::min(window_, std::max<SimTime>(now - *origin_, 1));
  out.current_bps = bits / to_seconds(span);
  const double cap = 2.0 * out.current_bps;
  out.cap_binding = out.filtered_bps > cap;
  out.estimate_bps = out.cap_binding ? cap : out.filtered_bps;
  return out;
}

std::vector<CapacityEstimate> estimate_capacity(const std::vector<AmpduAckEvent>& events, SimTime window) {
  CapacityFilter filter(window);
  std::vector<CapacityEstimate> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(filter.add(e));
  return out;
}

double inter_ack_slope(const std::vector<AmpduAckEvent>& events) {
  if (events.size() < 2) throw std::invalid_argument("slope needs at least two events");
  double mb = 0.0;
  double mt = 0.0;
  for (const auto& e : events) {
    mb += e.batch;
    mt += to_seconds(e.inter_ack);
  }
  mb /= static_cast<double>(events.size());
  mt /= static_cast<double>(events.size());
  double sbt = 0.0;
  double sbb = 0.0;
  for (const auto& e : events) {
    const double db = e.batch - mb;
    sbt += db * (to_seconds(e.inter_ack) - mt);
    sbb += db * db;
  }
  if (sbb == 0.0) throw std::invalid_argument("slope undefined: every batch has the same size");
  return sbt / sbb;
}

double MacProfile::capacity_bps() const {
  const double bits = max_batch * frame_bits;
  return bits / (bits / bitrate_bps + overhead_mean_s);
}

void MacTraceConfig::validate() const {
  if (schedule.empty()) throw ConfigError("mac.schedule: needs at least one profile");
  if (schedule.front().start != 0) throw ConfigError("mac.schedule[0].start: must be 0");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& p = schedule[i];
    const std::string key = "mac.schedule[" + std::to_string(i) + "]";
    if (i > 0 && p.start <= schedule[i - 1].start) throw ConfigError(key + ".start: must increase");
    if (!(p.bitrate_bps > 0.0)) throw ConfigError(key + ".R: must be positive");
    if (p.max_batch == 0) throw ConfigError(key + ".M: must be positive");
    if (!(p.frame_bits > 0.0)) throw ConfigError(key + ".S: must be positive");
    if (p.overhead_min_s < 0.0 || p.overhead_mean_s < p.overhead_min_s || p.overhead_stddev_s < 0.0)
      throw ConfigError(key + ".overhead: need 0 <= min <= mean and stddev >= 0");
    if (offered_load_bps > 2.0 * p.capacity_bps())
      throw ConfigError("mac.load: exceeds twice the capacity of " + key);
  }
  if (!(offered_load_bps > 0.0)) throw ConfigError("mac.load: must be positive");
  if (users == 0) throw ConfigError("mac.users: must be positive");
}

namespace {

const MacProfile& profile_at(const MacTraceConfig& c, SimTime t) {
  auto it = std::upper_bound(c.schedule.begin(), c.schedule.end(), t,
                             [](SimTime v, const MacProfile& p) { return v < p.start; });
  return *std::prev(it);
}

class Overhead {
 public:
  explicit Overhead(const MacProfile& p) : shift_(p.overhead_min_s) {
    const double m = p.overhead_mean_s - p.overhead_min_s;
    if (m <= 0.0 || p.overhead_stddev_s == 0.0) {
      constant_ = p.overhead_mean_s;
      return;
    }
    const double s2 = std::log1p(p.overhead_stddev_s * p.overhead_stddev_s / (m * m));
    dist_ = std::lognormal_distribution<double>(std::log(m) - s2 / 2.0, std::sqrt(s2));
  }
  double operator()(std::mt19937_64& rng) {
    return constant_ ? *constant_ : shift_ + dist_(rng);
  }

 private:
  double shift_;
  std::optional<double> constant_;
  std::lognormal_distribution<double> dist_;
};

}  // namespace

double true_capacity(const MacTraceConfig& config, SimTime t) { return profile_at(config, t).capacity_bps(); }

std::vector<AmpduAckEvent> generate_mac_trace(const MacTraceConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  const std::uint32_t users = config.mode == MacQueueMode::Shared ? 1 : config.users;
  std::vector<std::uint64_t> queue(users, 0);
  std::vector<SimTime> ready_since(users, 0);
  std::uniform_int_distribution<std::uint32_t> pick_user(0, users - 1);

  auto next_gap = [&](SimTime t) {
    const double rate = config.offered_load_bps / profile_at(config, t).frame_bits;
    return std::max<SimTime>(1, from_seconds(std::exponential_distribution<double>(rate)(rng)));
  };

  std::vector<AmpduAckEvent> out;
  SimTime next_arrival = next_gap(0);
  bool busy = false;
  SimTime busy_until = 0;
  SimTime service_start = 0;
  std::uint32_t serving = 0;
  std::uint32_t batch = 0;
  std::uint32_t rr = 0;
  SimTime now = 0;

  while (now < config.duration) {
    if (busy && busy_until <= next_arrival) {
      now = busy_until;
      if (now >= config.duration) break;
      const auto& prof = profile_at(config, service_start);
      AmpduAckEvent e;
      e.time = now;
      e.batch = batch;
      e.frame_bits = prof.frame_bits;
      e.bitrate_bps = prof.bitrate_bps;
      e.max_batch = prof.max_batch;
      if (config.mode == MacQueueMode::PerUser) {
        e.inter_ack = now - ready_since[serving];
        e.user = serving;
      } else {
        e.inter_ack = now - service_start;
      }
      out.push_back(e);
      ready_since[serving] = now;
      busy = false;
    } else {
      now = next_arrival;
      if (now >= config.duration) break;
      const std::uint32_t u = pick_user(rng);
      if (queue[u]++ == 0 && !(busy && serving == u)) ready_since[u] = std::max(ready_since[u], now);
      next_arrival = now + next_gap(now);
    }
    if (busy) continue;
    // Round robin over backlogged users.
    for (std::uint32_t k = 0; k < users; ++k) {
      const std::uint32_t u = (rr + k) % users;
      if (queue[u] == 0) continue;
      const auto& prof = profile_at(config, now);
      Overhead overhead(prof);
      batch = static_cast<std::uint32_t>(std::min<std::uint64_t>(queue[u], prof.max_batch));
      queue[u] -= batch;
      serving = u;
      service_start = now;
      busy = true;
      busy_until = now + std::max<SimTime>(
                             1, from_seconds(batch * prof.frame_bits / prof.bitrate_bps + overhead(rng)));
      rr = (u + 1) % users;
      break;
    }
  }
  return out;
}

void write_mac_trace(std::ostream& out, const std::vector<AmpduAckEvent>& events) {
  const bool with_user = std::any_of(events.begin(), events.end(), [](const auto& e) { return e.user.has_value(); });
  out << "time_us,b,S_bits,R_bps,M,T_IA_us" << (with_user ? ",user" : "") << "\n";
  out << std::setprecision(17);
  for (const auto& e : events) {
    out << e.time << ',' << e.batch << ',' << e.frame_bits << ',' << e.bitrate_bps << ',' << e.max_batch << ','
        << e.inter_ack;
    if (with_user) out << ',' << e.user.value_or(0);
    out << "\n";
  }
}

std::vector<AmpduAckEvent> read_mac_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("MAC trace: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const bool with_user = line == "time_us,b,S_bits,R_bps,M,T_IA_us,user";
  if (!with_user && line != "time_us,b,S_bits,R_bps,M,T_IA_us")
    throw ConfigError("MAC trace: unexpected header '" + line + "'");
  std::vector<AmpduAckEvent> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    const std::size_t want = with_user ? 7 : 6;
    const std::string where = "MAC trace line " + std::to_string(lineno);
    if (cols.size() != want) throw ConfigError(where + ": expected " + std::to_string(want) + " columns");
    AmpduAckEvent e;
    try {
      e.time = std::stoull(cols[0]);
      e.batch = static_cast<std::uint32_t>(std::stoul(cols[1]));
      e.frame_bits = std::stod(cols[2]);
      e.bitrate_bps = std::stod(cols[3]);
      e.max_batch = static_cast<std::uint32_t>(std::stoul(cols[4]));
      e.inter_ack = std::stoull(cols[5]);
      if (with_user) e.user = static_cast<std::uint32_t>(std::stoul(cols[6]));
    } catch (const std::exception&) {
      throw ConfigError(where + ": malformed number");
    }
    if (e.batch == 0 || e.batch > e.max_batch) throw ConfigError(where + ": need 1 <= b <= M");
    if (e.inter_ack == 0) throw ConfigError(where + ": T_IA_us must be positive");
    out.push_back(e);
  }
  return out;
}

std::vector<AmpduAckEvent> read_mac_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open MAC trace " + path.string());
  return read_mac_trace(in);
}

}  // namespace abc
