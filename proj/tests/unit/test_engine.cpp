#include <doctest.h>

#include "abc/engine.hpp"

using namespace abc;

namespace {

Topology single(double rate, Discipline d = Discipline::Abc) {
  Topology t;
  HopSpec h;
  h.name = "bottleneck";
  h.link = LinkProcess::fixed(rate);
  h.discipline = d;
  t.hops.push_back(h);
  FlowSpec f;
  f.id = 1;
  t.flows.push_back(f);
  return t;
}

}  // namespace

TEST_CASE("single ABC flow fills a fixed link") {
  const auto log = run(single(12e6), sec(60), 1);
  CHECK(log.deliveries.size() >= 50000);
  CHECK(utilization(log, 0) > 0.98);
  CHECK(utilization(log, 0) <= 1.0);
  CHECK(log.conservation.holds());
}

TEST_CASE("zero-duration run yields an empty log") {
  const auto log = run(single(12e6), 0, 1);
  CHECK(log.empty());
  CHECK(log.hops.empty());
  CHECK(log.flows.empty());
}

TEST_CASE("equal seeds give identical logs") {
  auto t = single(24e6);
  t.flows.push_back(t.flows[0]);
  t.flows[1].id = 2;
  t.flows[1].scheme = Scheme::Cubic;
  t.short_flows = ShortFlowSpec{4e6};
  const auto a = run(t, sec(5), 9);
  const auto b = run(t, sec(5), 9);
  CHECK(a == b);
  const auto c = run(t, sec(5), 10);
  CHECK_FALSE(a == c);
}

TEST_CASE("missing capacity process is a configuration error") {
  auto t = single(12e6);
  t.hops[0].link.reset();
  CHECK_THROWS_AS(run(t, sec(1), 1), ConfigError);
  auto u = single(12e6);
  u.hops.clear();
  CHECK_THROWS_AS(run(u, sec(1), 1), ConfigError);
  auto v = single(12e6);
  v.flows.push_back(v.flows[0]);
  CHECK_THROWS_AS(run(v, sec(1), 1), ConfigError);
}

TEST_CASE("packets are conserved with drops and short flows") {
  auto t = single(12e6, Discipline::Droptail);
  t.flows[0].scheme = Scheme::Cubic;
  t.hops[0].droptail.capacity = 20;
  t.short_flows = ShortFlowSpec{2e6};
  for (SimTime d : {msec(1234), sec(3), sec(7)}) {
    const auto log = run(t, d, 3);
    CHECK(log.conservation.holds());
    CHECK(log.conservation.dropped > 0);
    CHECK(log.drops.size() == log.conservation.dropped);
  }
}

TEST_CASE("queuing delays are non-negative and bounded by the buffer") {
  auto t = single(12e6, Discipline::Droptail);
  t.flows[0].scheme = Scheme::Cubic;
  const auto log = run(t, sec(20), 1);
  CHECK(utilization(log, 0) > 0.95);
  const auto worst = delay_percentile(log, 0, 1.0);
  CHECK(worst <= msec(251));  // 250 packets at 1 ms each, plus one in service
  CHECK(worst >= msec(200));  // Cubic fills the buffer
}

TEST_CASE("ACK clocking emerges: an ABC flow never overruns the cap") {
  const auto log = run(single(12e6), sec(20), 1);
  REQUIRE(log.flows.size() == 1);
  CHECK(log.flows[0].cap_checks > 0);
  CHECK(log.flows[0].cap_violations == 0);
  CHECK(log.flows[0].timeouts == 0);
}

TEST_CASE("byte-limited flows finish") {
  auto t = single(12e6);
  t.flows[0].bytes = 10000;
  const auto log = run(t, sec(2), 1);
  REQUIRE(log.flows.size() == 1);
  CHECK(log.flows[0].bytes_delivered == 7 * kMtu);
  CHECK(log.flows[0].stop < sec(1));
}

TEST_CASE("flows may skip hops") {
  auto t = single(12e6);
  HopSpec second;
  second.name = "second";
  second.link = LinkProcess::fixed(6e6);
  second.discipline = Discipline::Droptail;
  t.hops.push_back(second);
  t.flows[0].path = {0};
  const auto log = run(t, sec(5), 1);
  CHECK(log.hops[1].records.empty());
  CHECK(log.hops[0].records.size() > 1000);
  t.flows[0].path = {1, 0};
  CHECK_THROWS_AS(run(t, sec(1), 1), ConfigError);
}

TEST_CASE("samples record both windows") {
  const auto log = run(single(12e6), sec(1), 1);
  REQUIRE_FALSE(log.samples.empty());
  CHECK(log.samples.front().w_abc == 10.0);
  CHECK(log.samples.size() == 100);
}
