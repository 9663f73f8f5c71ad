#include <doctest.h>

#include <sstream>

#include "abc/wifi_estimator.hpp"

using namespace abc;

namespace {
AmpduAckEvent event(std::uint32_t b, std::uint32_t m, double s, double r, SimTime tia) {
  AmpduAckEvent e;
  e.batch = b;
  e.max_batch = m;
  e.frame_bits = s;
  e.bitrate_bps = r;
  e.inter_ack = tia;
  return e;
}
}  // namespace

TEST_CASE("instantaneous rate") {
  CHECK(instantaneous_rate(event(20, 20, 12000, 120e6, 2000)) == doctest::Approx(120e6));
  CHECK(instantaneous_rate(event(10, 20, 12000, 120e6, msec(2))) == doctest::Approx(60e6));
  CHECK(instantaneous_rate(event(1, 20, 12000, 120e6, msec(12))) == doctest::Approx(1e6));
}

TEST_CASE("backlogged projection") {
  const auto full = event(20, 20, 12000, 120e6, 2000);
  CHECK(backlogged_projection(full) == doctest::Approx(instantaneous_rate(full)));
  CHECK(backlogged_projection(event(10, 20, 12000, 120e6, msec(2))) == doctest::Approx(80e6));
  double prev = 1e18;
  for (std::uint32_t b = 20; b >= 1; --b) {
    const double v = backlogged_projection(event(b, 20, 12000, 1e6, msec(2)));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("filter caps at twice the delivered rate") {
  CapacityFilter f(msec(40));
  CapacityEstimate last;
  // One small batch every 10 ms on a fast link: projection far above 2x.
  for (int i = 1; i <= 20; ++i) {
    auto e = event(1, 32, 12000, 65e6, 1200);
    e.time = msec(10) * static_cast<SimTime>(i);
    last = f.add(e);
  }
  CHECK(last.cap_binding);
  CHECK(last.current_bps == doctest::Approx(4 * 12000 / 0.04));
  CHECK(last.estimate_bps == doctest::Approx(2 * last.current_bps));
}

TEST_CASE("backlogged generator always sends full batches") {
  MacTraceConfig cfg;
  cfg.offered_load_bps = 1.5 * cfg.schedule[0].capacity_bps();
  cfg.duration = sec(2);
  const auto ev = generate_mac_trace(cfg, 1);
  REQUIRE(ev.size() > 100);
  std::size_t full = 0;
  for (std::size_t i = 20; i < ev.size(); ++i) full += ev[i].batch == ev[i].max_batch;
  CHECK(full == ev.size() - 20);
  CHECK(generate_mac_trace(cfg, 1) == ev);
}

TEST_CASE("constant overhead at half load recovers the closed form") {
  MacTraceConfig cfg;
  auto& p = cfg.schedule[0];
  p.overhead_stddev_s = 0.0;
  p.overhead_min_s = p.overhead_mean_s;
  cfg.offered_load_bps = 0.5 * p.capacity_bps();
  cfg.duration = sec(2);
  const auto ev = generate_mac_trace(cfg, 2);
  const double truth = p.max_batch * p.frame_bits * p.bitrate_bps / (p.max_batch * p.frame_bits + p.bitrate_bps * p.overhead_mean_s);
  for (const auto& e : ev) CHECK(backlogged_projection(e) == doctest::Approx(truth).epsilon(1e-3));
  CHECK(inter_ack_slope(ev) == doctest::Approx(p.frame_bits / p.bitrate_bps).epsilon(0.02));
}

TEST_CASE("per-user mode counts other users' airtime") {
  MacTraceConfig cfg;
  cfg.users = 2;
  cfg.mode = MacQueueMode::PerUser;
  cfg.offered_load_bps = 1.5 * cfg.schedule[0].capacity_bps();
  cfg.duration = sec(2);
  const auto ev = generate_mac_trace(cfg, 3);
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 50; i < ev.size(); ++i) {
    REQUIRE(ev[i].user);
    sum += backlogged_projection(ev[i]);
    ++n;
  }
  CHECK(sum / n == doctest::Approx(cfg.schedule[0].capacity_bps() / 2).epsilon(0.05));
}

TEST_CASE("MAC trace CSV round trip and validation") {
  MacTraceConfig cfg;
  cfg.duration = msec(300);
  const auto ev = generate_mac_trace(cfg, 4);
  std::stringstream ss;
  write_mac_trace(ss, ev);
  CHECK(ss.str().rfind("time_us,b,S_bits,R_bps,M,T_IA_us\n", 0) == 0);
  CHECK(read_mac_trace(ss) == ev);

  std::stringstream bad_header("t,b\n");
  CHECK_THROWS_AS(read_mac_trace(bad_header), ConfigError);
  std::stringstream bad_batch("time_us,b,S_bits,R_bps,M,T_IA_us\n10,5,12000,1e6,4,100\n");
  CHECK_THROWS_AS(read_mac_trace(bad_batch), ConfigError);
  std::stringstream with_user("time_us,b,S_bits,R_bps,M,T_IA_us,user\n10,2,12000,1e6,4,100,1\n");
  const auto u = read_mac_trace(with_user);
  REQUIRE(u.size() == 1);
  CHECK(u[0].user == 1u);

  MacTraceConfig over;
  over.offered_load_bps = 3 * over.schedule[0].capacity_bps();
  CHECK_THROWS_AS(over.validate(), ConfigError);
}
