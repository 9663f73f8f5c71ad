#include "abc/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace abc {

namespace {

double parse_scaled(const std::string& text, const std::vector<std::pair<std::string, double>>& units,
                    const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string("expected a ") + what + ", got '" + text + "'");
  }
  const std::string suffix = text.substr(used);
  for (const auto& [name, scale] : units) {
    if (suffix == name) {
      if (!std::isfinite(value) || value < 0.0)
        throw ConfigError(std::string(what) + " must be finite and non-negative: '" + text + "'");
      return value * scale;
    }
  }
  throw ConfigError(std::string("unknown ") + what + " unit in '" + text + "'");
}

// Strict node reader: every key must be consumed, so typos surface as errors.
class Reader {
 public:
  Reader(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(path_ + ": expected a mapping");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    const YAML::Node& n = node_;  // const lookup never inserts
    return n && n.IsMap() && n[key] && !n[key].IsNull();
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  YAML::Node raw(const std::string& k) {
    if (!has(k)) throw ConfigError(key(k) + ": required key missing");
    const YAML::Node& n = node_;
    return n[k];
  }

  template <typename T>
  T get(const std::string& k) {
    const auto n = raw(k);
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(key(k) + ": wrong type");
    }
  }

  template <typename T>
  T get(const std::string& k, T fallback) {
    return has(k) ? get<T>(k) : fallback;
  }

  SimTime duration(const std::string& k) {
    try {
      return parse_duration(get<std::string>(k));
    } catch (const ConfigError& e) {
      throw ConfigError(key(k) + ": " + e.what());
    }
  }
  SimTime duration(const std::string& k, SimTime fallback) { return has(k) ? duration(k) : fallback; }

  double rate(const std::string& k) {
    try {
      return parse_rate(get<std::string>(k));
    } catch (const ConfigError& e) {
      throw ConfigError(key(k) + ": " + e.what());
    }
  }

  double fraction(const std::string& k, double fallback, double lo, double hi) {
    const double v = get<double>(k, fallback);
    if (!(v >= lo && v <= hi)) {
      std::ostringstream os;
      os << key(k) << ": must lie in [" << lo << ", " << hi << "]";
      throw ConfigError(os.str());
    }
    return v;
  }

  template <typename T>
  T choice(const std::string& k, T fallback, const std::vector<std::pair<std::string, T>>& options) {
    if (!has(k)) return fallback;
    const auto s = get<std::string>(k);
    for (const auto& [name, v] : options) {
      if (s == name) return v;
    }
    throw ConfigError(key(k) + ": unknown value '" + s + "'");
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (!seen_.count(k)) throw ConfigError(key(k) + ": unknown key");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

LinkProcess parse_link(Reader r, const std::filesystem::path& base) {
  const auto type = r.get<std::string>("type");
  LinkProcess link = LinkProcess::fixed(1.0);
  if (type == "fixed") {
    link = LinkProcess::fixed(r.rate("rate"));
  } else if (type == "step") {
    const auto steps = r.raw("steps");
    if (!steps.IsSequence() || steps.size() == 0) throw ConfigError(r.key("steps") + ": expected a non-empty list");
    std::vector<RateStep> schedule;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      Reader s(steps[i], r.key("steps[" + std::to_string(i) + "]"));
      schedule.push_back({s.duration("at"), s.rate("rate")});
      s.finish();
    }
    try {
      link = LinkProcess::step(std::move(schedule));
    } catch (const ConfigError& e) {
      throw ConfigError(r.key("steps") + ": " + e.what());
    }
  } else if (type == "sawtooth") {
    // Expands to a step schedule ramping between low and high.
    const double low = r.rate("low");
    const double high = r.rate("high");
    const SimTime period = r.duration("period");
    const auto steps = r.get<unsigned>("steps", 10);
    const SimTime until = r.duration("until");
    if (steps < 2 || period == 0) throw ConfigError(r.key("period") + ": need period > 0 and steps >= 2");
    std::vector<RateStep> schedule;
    for (SimTime t = 0; t < until; t += period) {
      for (unsigned k = 0; k < steps; ++k) {
        const double rate = high - (high - low) * k / (steps - 1);
        schedule.push_back({t + period * k / steps, rate});
      }
    }
    link = LinkProcess::step(std::move(schedule));
  } else if (type == "trace") {
    auto file = std::filesystem::path(r.get<std::string>("file"));
    if (file.is_relative()) file = base / file;
    if (!std::filesystem::exists(file)) throw ConfigError(r.key("file") + ": no such file " + file.string());
    try {
      link = LinkProcess::load_trace(file);
    } catch (const ConfigError& e) {
      throw ConfigError(r.key("file") + ": " + e.what());
    }
  } else {
    throw ConfigError(r.key("type") + ": unknown link type '" + type + "'");
  }
  r.finish();
  return link;
}

AbcRouterConfig parse_abc(Reader r, std::size_t buffer) {
  AbcRouterConfig c;
  c.buffer_packets = buffer;
  c.params.eta = r.fraction("eta", c.params.eta, 0.0, 1.0);
  c.params.delta = r.duration("delta", c.params.delta);
  c.params.delay_threshold = r.duration("delay_threshold", c.params.delay_threshold);
  c.params.window = r.duration("window", c.params.window);
  c.params.token_limit = r.get<double>("token_limit", c.params.token_limit);
  c.initial_weight = r.fraction("initial_weight", c.initial_weight, 0.0, 1.0);
  c.weight_period = r.duration("weight_period", c.weight_period);
  c.headroom = r.get<double>("headroom", c.headroom);
  c.top_k = r.get<std::size_t>("top_k", c.top_k);
  c.sketch_counters = r.get<std::size_t>("sketch_counters", c.sketch_counters);
  if (r.has("forced_fraction")) c.forced_fraction = r.fraction("forced_fraction", 0.0, 0.0, 1.0);
  try {
    c.params.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(r.key("") + " " + e.what());
  }
  if (c.headroom < 0.0) throw ConfigError(r.key("headroom") + ": must be non-negative");
  if (c.top_k == 0) throw ConfigError(r.key("top_k") + ": must be positive");
  if (c.sketch_counters < c.top_k) throw ConfigError(r.key("sketch_counters") + ": must be at least top_k");
  r.finish();
  return c;
}

HopSpec parse_hop(Reader r, const std::filesystem::path& base) {
  HopSpec h;
  h.name = r.get<std::string>("name");
  h.discipline = r.choice<Discipline>("discipline", Discipline::Abc,
                                      {{"abc", Discipline::Abc}, {"droptail", Discipline::Droptail}});
  const auto buffer = r.get<std::size_t>("buffer", 250);
  if (buffer == 0) throw ConfigError(r.key("buffer") + ": must be positive");
  h.delay_to_next = r.duration("delay_to_next", 0);
  if (!r.has("link")) throw ConfigError(r.key("link") + ": every hop needs a capacity process");
  h.link = parse_link(Reader(r.raw("link"), r.key("link")), base);
  if (h.discipline == Discipline::Abc) {
    h.abc = parse_abc(Reader(r.has("abc") ? r.raw("abc") : YAML::Node(), r.key("abc")), buffer);
    if (r.has("droptail")) throw ConfigError(r.key("droptail") + ": only valid for droptail hops");
  } else {
    Reader d(r.has("droptail") ? r.raw("droptail") : YAML::Node(), r.key("droptail"));
    h.droptail.capacity = buffer;
    h.droptail.ecn_marking = d.get<bool>("ecn_marking", false);
    h.droptail.ecn_threshold = d.get<std::size_t>("ecn_threshold", 50);
    d.finish();
    if (r.has("abc")) throw ConfigError(r.key("abc") + ": only valid for abc hops");
  }
  r.finish();
  return h;
}

struct PathDelays {
  SimTime fwd;
  SimTime rev;
};

PathDelays parse_delays(Reader& r, SimTime hop_delay) {
  if (r.has("rtt")) {
    if (r.has("fwd_delay") || r.has("rev_delay"))
      throw ConfigError(r.key("rtt") + ": give either rtt or fwd_delay/rev_delay, not both");
    const SimTime rtt = r.duration("rtt");
    const SimTime rev = rtt / 2;
    if (rtt - rev < hop_delay) throw ConfigError(r.key("rtt") + ": shorter than the hop propagation delays");
    return {rtt - rev - hop_delay, rev};
  }
  return {r.duration("fwd_delay"), r.duration("rev_delay")};
}

std::vector<std::size_t> parse_path(Reader& r, const Topology& topo) {
  std::vector<std::size_t> path;
  if (!r.has("path")) return path;
  const auto node = r.raw("path");
  if (!node.IsSequence() || node.size() == 0) throw ConfigError(r.key("path") + ": expected a non-empty list of hop names");
  for (const auto& n : node) {
    const auto name = n.as<std::string>();
    std::size_t h = 0;
    while (h < topo.hops.size() && topo.hops[h].name != name) ++h;
    if (h == topo.hops.size()) throw ConfigError(r.key("path") + ": unknown hop '" + name + "'");
    if (!path.empty() && h <= path.back()) throw ConfigError(r.key("path") + ": hops must appear in topology order");
    path.push_back(h);
  }
  return path;
}

SimTime path_delay(const Topology& topo, const std::vector<std::size_t>& path) {
  SimTime total = 0;
  if (path.empty()) {
    for (const auto& h : topo.hops) total += h.delay_to_next;
  } else {
    for (auto h : path) total += topo.hops[h].delay_to_next;
  }
  return total;
}

void parse_flows(const YAML::Node& node, Topology& topo) {
  if (!node.IsSequence()) throw ConfigError("flows: expected a list");
  FlowId next_id = 1;
  for (std::size_t i = 0; i < node.size(); ++i) {
    Reader r(node[i], "flows[" + std::to_string(i) + "]");
    FlowSpec f;
    f.scheme = r.choice<Scheme>("scheme", Scheme::Abc, {{"abc", Scheme::Abc}, {"cubic", Scheme::Cubic}});
    f.id = r.get<FlowId>("id", next_id);
    f.start = r.duration("start", 0);
    if (r.has("stop")) f.stop = r.duration("stop");
    f.path = parse_path(r, topo);
    const auto d = parse_delays(r, path_delay(topo, f.path));
    f.fwd_delay = d.fwd;
    f.rev_delay = d.rev;
    if (r.has("bytes")) f.bytes = r.get<std::uint64_t>("bytes");
    f.ack_coalesce = r.get<unsigned>("ack_coalesce", 2);
    f.abc.initial_window = r.get<double>("initial_window", f.abc.initial_window);
    f.cubic.initial_window = f.abc.initial_window;
    f.abc.dual_window = r.get<bool>("dual_window", true);
    f.abc.additive_increase = r.get<bool>("additive_increase", true);
    f.abc.inflight_cap = r.get<bool>("inflight_cap", true);
    f.ecn_capable = r.get<bool>("ecn", false);
    if (f.ecn_capable && f.scheme != Scheme::Cubic) throw ConfigError(r.key("ecn") + ": only valid for cubic flows");
    const auto count = r.get<unsigned>("count", 1);
    const SimTime spacing = r.duration("start_spacing", 0);
    if (count == 0) throw ConfigError(r.key("count") + ": must be positive");
    r.finish();
    for (unsigned k = 0; k < count; ++k) {
      FlowSpec copy = f;
      copy.id = f.id + k;
      copy.start = f.start + spacing * k;
      if (copy.stop && *copy.stop < copy.start) throw ConfigError(r.key("stop") + ": precedes start");
      topo.flows.push_back(copy);
    }
    next_id = f.id + count;
  }
}

}  // namespace

SimTime parse_duration(const std::string& text) {
  const double us = parse_scaled(text, {{"us", 1.0}, {"ms", 1e3}, {"s", 1e6}}, "duration");
  return static_cast<SimTime>(std::llround(us));
}

double parse_rate(const std::string& text) {
  return parse_scaled(text, {{"bps", 1.0}, {"kbps", 1e3}, {"Mbps", 1e6}, {"Gbps", 1e9}}, "rate");
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("top level: expected a mapping");
  Reader top(root, "");
  Scenario sc;
  sc.name = top.get<std::string>("name", "scenario");

  Reader run(top.has("run") ? top.raw("run") : YAML::Node(), "run");
  sc.duration = run.duration("duration", sc.duration);
  sc.seed = run.get<std::uint64_t>("seed", sc.seed);
  sc.options.sample_interval = run.duration("sample_interval", sc.options.sample_interval);
  sc.options.delayed_ack_timeout = run.duration("delayed_ack_timeout", sc.options.delayed_ack_timeout);
  sc.options.record_dequeues = run.get<bool>("record_dequeues", false);
  sc.options.send_jitter = run.duration("send_jitter", sc.options.send_jitter);
  sc.router_bin = run.duration("router_bin", sc.router_bin);
  if (run.has("output")) sc.output_dir = base_dir / run.get<std::string>("output");
  if (sc.options.sample_interval == 0) throw ConfigError("run.sample_interval: must be positive");
  if (sc.router_bin == 0) throw ConfigError("run.router_bin: must be positive");
  run.finish();

  const auto hops = top.raw("hops");
  if (!hops.IsSequence() || hops.size() == 0) throw ConfigError("hops: expected a non-empty list");
  for (std::size_t i = 0; i < hops.size(); ++i) {
    sc.topology.hops.push_back(parse_hop(Reader(hops[i], "hops[" + std::to_string(i) + "]"), base_dir));
  }

  parse_flows(top.has("flows") ? top.raw("flows") : YAML::Node(YAML::NodeType::Sequence), sc.topology);

  if (top.has("short_flows")) {
    Reader r(top.raw("short_flows"), "short_flows");
    ShortFlowSpec s;
    s.load_bps = r.rate("load");
    s.flow_bytes = r.get<std::uint64_t>("bytes", s.flow_bytes);
    s.path = parse_path(r, sc.topology);
    const auto d = parse_delays(r, path_delay(sc.topology, s.path));
    s.fwd_delay = d.fwd;
    s.rev_delay = d.rev;
    s.first_id = r.get<FlowId>("first_id", s.first_id);
    r.finish();
    sc.topology.short_flows = s;
  }
  top.finish();
  sc.topology.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace abc
