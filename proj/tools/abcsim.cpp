// Command-line front end: scenario runs, the fluid integrator and the Wi-Fi
// capacity estimator.
#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "abc/fluid.hpp"
#include "abc/output.hpp"
#include "abc/scenario.hpp"
#include "abc/sweep.hpp"
#include "abc/wifi_estimator.hpp"

namespace {

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> duration;
  bool validate_only = false;
  unsigned seeds = 1;
  int threads = 0;
};

abc::Scenario load(const RunArgs& a) {
  auto sc = abc::load_scenario(a.config);
  if (a.seed) sc.seed = *a.seed;
  if (a.duration) sc.duration = abc::parse_duration(*a.duration);
  if (!a.out.empty()) sc.output_dir = a.out;
  return sc;
}

int cmd_validate(const RunArgs& a) {
  const auto sc = load(a);
  std::cout << "ok: " << sc.name << " (" << sc.topology.hops.size() << " hops, " << sc.topology.flows.size()
            << " flows)\n";
  return 0;
}

int cmd_run(const RunArgs& a) {
  const auto sc = load(a);
  if (a.validate_only) return cmd_validate(a);
  const std::filesystem::path out = sc.output_dir.value_or("out");
  if (a.seeds <= 1) {
    const auto log = abc::run(sc.topology, sc.duration, sc.seed, sc.options);
    abc::write_run_outputs(log, out, sc.router_bin);
    std::cout << abc::summary_text(log);
    return 0;
  }
  // Seed sweep: one independent simulation per seed, in parallel.
  std::vector<abc::SweepCase> cases;
  for (unsigned k = 0; k < a.seeds; ++k) cases.push_back({sc.topology, sc.duration, sc.seed + k, sc.options});
  const auto logs = abc::run_sweep(cases, a.threads);
  for (unsigned k = 0; k < a.seeds; ++k) {
    const auto dir = out / ("seed_" + std::to_string(sc.seed + k));
    abc::write_run_outputs(logs[k], dir, sc.router_bin);
    std::cout << "wrote " << dir.string() << "\n";
  }
  return 0;
}

struct FluidArgs {
  abc::FluidParams params;
  double eta = 0.98;
  std::string delta = "133ms", threshold = "50ms", tau = "100ms", l = "100ms", duration = "20s";
  std::string mu = "24Mbps";
  std::optional<std::string> step;
  double x0_ms = 0.0;
  bool self_consistent = false;
  std::string out;
};

int cmd_fluid(FluidArgs& a) {
  auto& p = a.params;
  p.eta = a.eta;
  p.delta = abc::parse_duration(a.delta);
  p.delay_threshold = abc::parse_duration(a.threshold);
  p.tau = abc::parse_duration(a.tau);
  p.ai_period = abc::parse_duration(a.l);
  p.mu_bps = abc::parse_rate(a.mu);
  p.validate();
  if (a.self_consistent) p = abc::self_consistent(p);
  const double x0 = a.x0_ms / 1000.0;
  const auto step = a.step ? abc::parse_duration(*a.step) : abc::default_step(p);
  const auto traj = abc::integrate(p, [x0](double) { return x0; }, abc::parse_duration(a.duration), step);
  const auto verdict = abc::assess(p, traj);
  if (!a.out.empty()) {
    std::ofstream csv(a.out);
    if (!csv) throw std::runtime_error("cannot write " + a.out);
    csv << std::setprecision(10) << "t_s,x_s\n";
    for (std::size_t k = 0; k < traj.x_s.size(); ++k) csv << traj.time_s[k] << ',' << traj.x_s[k] << "\n";
  }
  std::cout << std::setprecision(8) << "A = " << p.a() << "\n"
            << "l_s = " << abc::to_seconds(p.ai_period) << "\n"
            << "x_star_s = " << verdict.target_s << "\n"
            << "r_star_bps = " << abc::fixed_point_rate(p) << "\n"
            << "verdict = " << abc::to_string(verdict.verdict) << "\n"
            << "settling_time_s = " << verdict.settling_time_s << "\n"
            << "max_final_deviation_s = " << verdict.max_deviation_s << "\n";
  return 0;
}

struct WifiArgs {
  std::string trace;
  std::string out;
  std::string window = "40ms";
  // Generator mode.
  bool generate = false;
  std::string rate = "65Mbps", load = "20Mbps", duration = "10s";
  unsigned max_batch = 32;
  double frame_bits = 12000.0;
  double overhead_mean_ms = 1.0, overhead_sd_ms = 0.1, overhead_min_ms = 0.2;
  unsigned users = 1;
  std::string mode = "shared";
  std::uint64_t seed = 1;
};

int cmd_wifi(const WifiArgs& a) {
  if (a.generate) {
    abc::MacTraceConfig cfg;
    auto& prof = cfg.schedule.front();
    prof.bitrate_bps = abc::parse_rate(a.rate);
    prof.max_batch = a.max_batch;
    prof.frame_bits = a.frame_bits;
    prof.overhead_mean_s = a.overhead_mean_ms / 1000.0;
    prof.overhead_stddev_s = a.overhead_sd_ms / 1000.0;
    prof.overhead_min_s = a.overhead_min_ms / 1000.0;
    cfg.offered_load_bps = abc::parse_rate(a.load);
    cfg.duration = abc::parse_duration(a.duration);
    cfg.users = a.users;
    if (a.mode != "shared" && a.mode != "per-user") throw abc::ConfigError("--mode: expected shared or per-user");
    cfg.mode = a.mode == "shared" ? abc::MacQueueMode::Shared : abc::MacQueueMode::PerUser;
    const auto events = abc::generate_mac_trace(cfg, a.seed);
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    abc::write_mac_trace(out, events);
    std::cout << "events = " << events.size() << "\ncapacity_bps = " << prof.capacity_bps() << "\n";
    return 0;
  }
  if (a.trace.empty()) throw abc::ConfigError("--trace: required unless --generate is given");
  const auto events = abc::read_mac_trace(a.trace);
  const auto est = abc::estimate_capacity(events, abc::parse_duration(a.window));
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
    out = &file;
  }
  *out << std::setprecision(10) << "time_us,mu_hat_bps,current_bps,cap_binding\n";
  for (const auto& e : est) {
    *out << e.time << ',' << e.estimate_bps << ',' << e.current_bps << ',' << (e.cap_binding ? 1 : 0) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packet-level simulator for accel-brake congestion control"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto add_run_flags = [&](CLI::App* sub, bool full) {
    sub->add_option("--config", run_args.config, "Scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", run_args.seed, "Override run.seed");
    sub->add_option("--duration", run_args.duration, "Override run.duration, e.g. 30s");
    if (!full) return;
    sub->add_option("--out", run_args.out, "Output directory (overrides run.output)");
    sub->add_flag("--validate-only", run_args.validate_only, "Parse and check the topology, then exit");
    sub->add_option("--seeds", run_args.seeds, "Run this many consecutive seeds in parallel")->check(CLI::PositiveNumber);
    sub->add_option("--threads", run_args.threads, "Worker threads for --seeds (0 = all cores)");
  };
  auto* run = app.add_subcommand("run", "Run a scenario and write its outputs");
  add_run_flags(run, true);
  auto* validate = app.add_subcommand("validate", "Parse a scenario and check the topology");
  add_run_flags(validate, false);

  FluidArgs fluid_args;
  auto* fluid = app.add_subcommand("fluid", "Integrate the aggregate-queue fluid model");
  fluid->add_option("--eta", fluid_args.eta, "Target utilization");
  fluid->add_option("--delta", fluid_args.delta, "Queue drain horizon");
  fluid->add_option("--delay-threshold", fluid_args.threshold, "Queuing delay threshold");
  fluid->add_option("--flows", fluid_args.params.flows, "Number of flows");
  fluid->add_option("--mu", fluid_args.mu, "Link capacity, e.g. 24Mbps");
  fluid->add_option("--tau", fluid_args.tau, "Feedback delay");
  fluid->add_option("--l", fluid_args.l, "Additive-increase period");
  fluid->add_flag("--self-consistent", fluid_args.self_consistent, "Set l to tau plus the equilibrium delay");
  fluid->add_option("--duration", fluid_args.duration, "Integration horizon");
  fluid->add_option("--step", fluid_args.step, "Euler step (default tau/100)");
  fluid->add_option("--x0-ms", fluid_args.x0_ms, "Constant initial history, in ms");
  fluid->add_option("--out", fluid_args.out, "Trajectory CSV (t_s,x_s)");

  WifiArgs wifi_args;
  auto* wifi = app.add_subcommand("wifi-estimate", "Estimate link capacity from a MAC trace");
  wifi->add_option("--config,--trace", wifi_args.trace, "MAC trace CSV");
  wifi->add_option("--out", wifi_args.out, "Output CSV (stdout if omitted)");
  wifi->add_option("--window", wifi_args.window, "Filter window");
  wifi->add_flag("--generate", wifi_args.generate, "Write a synthetic MAC trace to --out instead");
  wifi->add_option("--rate", wifi_args.rate, "PHY bitrate R");
  wifi->add_option("--max-batch", wifi_args.max_batch, "Largest A-MPDU M");
  wifi->add_option("--frame-bits", wifi_args.frame_bits, "Frame size S in bits");
  wifi->add_option("--overhead-mean-ms", wifi_args.overhead_mean_ms, "Mean per-batch overhead");
  wifi->add_option("--overhead-sd-ms", wifi_args.overhead_sd_ms, "Overhead standard deviation");
  wifi->add_option("--overhead-min-ms", wifi_args.overhead_min_ms, "Overhead lower bound");
  wifi->add_option("--load", wifi_args.load, "Offered load");
  wifi->add_option("--duration", wifi_args.duration, "Trace length");
  wifi->add_option("--users", wifi_args.users, "Number of stations");
  wifi->add_option("--mode", wifi_args.mode, "shared or per-user");
  wifi->add_option("--seed", wifi_args.seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args);
    if (*validate) return cmd_validate(run_args);
    if (*fluid) return cmd_fluid(fluid_args);
    if (*wifi) return cmd_wifi(wifi_args);
  } catch (const abc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
