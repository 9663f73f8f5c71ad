#include <doctest.h>

#include "abc/metrics.hpp"

using namespace abc;

TEST_CASE("nearest-rank percentile") {
  std::vector<SimTime> v;
  for (SimTime i = 1; i <= 100; ++i) v.push_back(msec(i));
  CHECK(percentile_nearest_rank(v, 0.95) == msec(95));
  CHECK(percentile_nearest_rank(v, 1.0) == msec(100));
  CHECK(percentile_nearest_rank(v, 0.001) == msec(1));
  CHECK(percentile_nearest_rank(std::vector<SimTime>(7, 42), 0.3) == 42);
  CHECK_THROWS(percentile_nearest_rank({}, 0.5));
}

TEST_CASE("jain index") {
  const std::vector<double> equal{3, 3, 3};
  CHECK(jain_index(equal) == doctest::Approx(1.0));
  const std::vector<double> one_zero{1, 0};
  CHECK(jain_index(one_zero) == doctest::Approx(0.5));
  const std::vector<double> mixed{2, 1, 1};
  CHECK(jain_index(mixed) == doctest::Approx(16.0 / 18.0));
  const std::vector<double> scaled{20, 10, 10};
  CHECK(jain_index(scaled) == doctest::Approx(jain_index(mixed)));
  const std::vector<double> zeros{0, 0};
  CHECK_THROWS(jain_index(zeros));
  CHECK_THROWS(jain_index(std::vector<double>{}));
}

TEST_CASE("utilization and delays from a hand-built log") {
  MetricsLog log;
  log.duration = sec(1);
  HopLog hop;
  hop.name = "h";
  hop.capacity_bits = 12e6;
  hop.delivered_bytes = 750000;
  for (SimTime i = 0; i < 10; ++i) hop.records.push_back({1, i * 1000, i * 1000 + 500 * (i + 1), kMtu, QueueKind::Abc});
  log.hops.push_back(hop);
  CHECK(utilization(log, 0) == doctest::Approx(0.5));
  CHECK(delay_percentile(log, 0, 0.5) == 2500);
  CHECK(mean_delay(log, 0) == doctest::Approx(2750.0));
  DelayFilter late;
  late.from = 5000;  // filters on dequeue time
  CHECK(hop_delays(log, 0, late).size() == 7);
  DelayFilter legacy;
  legacy.queue = QueueKind::Legacy;
  CHECK(hop_delays(log, 0, legacy).empty());
  CHECK_THROWS(delay_percentile(log, 0, 0.5, legacy));
}

TEST_CASE("idle hop has zero utilization") {
  MetricsLog log;
  HopLog hop;
  hop.capacity_bits = 1e6;
  log.hops.push_back(hop);
  CHECK(utilization(log, 0) == 0.0);
}

TEST_CASE("throughput from deliveries") {
  MetricsLog log;
  log.duration = sec(2);
  for (SimTime t = 0; t < sec(2); t += msec(1)) log.deliveries.push_back({1, 0, 0, t, kMtu});
  CHECK(flow_throughput(log, 1, 0, sec(2)) == doctest::Approx(12e6));
  CHECK(flow_throughput(log, 2, 0, sec(2)) == 0.0);
  const auto series = throughput_series(log, 1, msec(500));
  REQUIRE(series.size() == 4);
  for (double v : series) CHECK(v == doctest::Approx(12e6));
  CHECK(steady_window_start(sec(60)) == sec(20));
}
