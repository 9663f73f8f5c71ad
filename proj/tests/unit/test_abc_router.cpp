#include <doctest.h>

#include <random>

#include "../support/waterfill_oracle.hpp"
#include "abc/abc_router.hpp"

using namespace abc;

namespace {
AbcParams defaults() { return AbcParams{}; }
}  // namespace

TEST_CASE("target rate") {
  const auto p = defaults();
  CHECK(target_rate(p, 10e6, 0) == doctest::Approx(9.8e6));
  CHECK(target_rate(p, 10e6, p.delay_threshold) == doctest::Approx(9.8e6));
  CHECK(target_rate(p, 10e6, msec(183)) == 0.0);  // raw value is -0.2 Mbit/s
  CHECK(target_rate(p, 10e6, msec(100)) == doctest::Approx(9.8e6 - 10e6 * 50.0 / 133.0));
  CHECK(target_rate(p, 0.0, msec(100)) == 0.0);
}

TEST_CASE("accel fraction") {
  CHECK(accel_fraction(5e6, 5e6) == 0.5);
  CHECK(accel_fraction(10e6, 5e6) == 1.0);
  CHECK(accel_fraction(0.0, 5e6) == 0.0);
  CHECK(accel_fraction(30e6, 5e6) == 1.0);
  CHECK(accel_fraction(1e6, 0.0) == 1.0);  // idle router
}

TEST_CASE("token bucket marking") {
  MarkerState m(2.0);
  CHECK(m.mark(EcnCodepoint::Accel, 0.6) == EcnCodepoint::Brake);
  CHECK(m.mark(EcnCodepoint::Accel, 0.6) == EcnCodepoint::Accel);
  CHECK(m.token() == doctest::Approx(0.2));

  MarkerState full(2.0);
  full.mark(EcnCodepoint::Accel, 1.0);
  for (int i = 0; i < 100; ++i) CHECK(full.mark(EcnCodepoint::Accel, 1.0) == EcnCodepoint::Accel);

  MarkerState any(2.0);
  for (double f : {0.0, 0.5, 1.0}) {
    CHECK(any.mark(EcnCodepoint::Brake, f) == EcnCodepoint::Brake);
    CHECK(any.mark(EcnCodepoint::EcnSet, f) == EcnCodepoint::EcnSet);
    CHECK(any.mark(EcnCodepoint::NotEct, f) == EcnCodepoint::NotEct);
  }
  CHECK(any.token() <= any.token_limit());
}

TEST_CASE("marking stays within budget for constant f") {
  for (double f : {0.1, 0.33, 0.5, 0.77, 0.95}) {
    MarkerState m(2.0);
    int accel = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) accel += m.mark(EcnCodepoint::Accel, f) == EcnCodepoint::Accel;
    CHECK(accel <= n * f + 2.0);
    CHECK(accel >= n * f - 2.0);
  }
}

TEST_CASE("rate window evicts samples older than T") {
  RateWindow w(msec(20));
  CHECK(w.rate_bps(0) == 0.0);
  w.record(msec(1), 1500);
  w.record(msec(10), 1500);
  CHECK(w.rate_bps(msec(10)) == doctest::Approx(2 * 12000 / 0.02));
  CHECK(w.rate_bps(msec(21)) == doctest::Approx(12000 / 0.02));
  CHECK(w.rate_bps(msec(30)) == 0.0);
}

TEST_CASE("dequeue rate on a backlogged fixed link converges to the link rate") {
  RateWindow w(msec(20));
  const double rate = 12e6;
  SimTime t = 0;
  for (int i = 0; i < 100; ++i) {
    t += transmission_time(kMtu, rate);
    w.record(t, kMtu);
  }
  CHECK(w.rate_bps(t) == doctest::Approx(rate).epsilon(0.06));
}

TEST_CASE("dual queue deficit round robin") {
  DualQueue q(5000, 0.5);
  for (int i = 0; i < 1000; ++i) {
    q.enqueue(Packet{}, QueueKind::Abc);
    q.enqueue(Packet{}, QueueKind::Legacy);
  }
  int abc = 0;
  for (int i = 0; i < 1000; ++i) abc += q.dequeue().second == QueueKind::Abc;
  CHECK(abc >= 499);
  CHECK(abc <= 501);

  DualQueue w(5000, 0.8);
  for (int i = 0; i < 2000; ++i) {
    w.enqueue(Packet{}, QueueKind::Abc);
    w.enqueue(Packet{}, QueueKind::Legacy);
  }
  int wa = 0;
  for (int i = 0; i < 1000; ++i) wa += w.dequeue().second == QueueKind::Abc;
  CHECK(wa == doctest::Approx(800).epsilon(0.01));
}

TEST_CASE("dual queue is work conserving") {
  DualQueue q(10, 1.0);
  q.enqueue(Packet{}, QueueKind::Legacy);
  CHECK(q.dequeue().second == QueueKind::Legacy);
  q.set_weight(0.0);
  q.enqueue(Packet{}, QueueKind::Abc);
  CHECK(q.dequeue().second == QueueKind::Abc);
  CHECK(q.empty());
  CHECK_THROWS(q.dequeue());
}

TEST_CASE("shared buffer drops from the longer queue") {
  DualQueue q(4, 0.5);
  for (std::uint64_t i = 0; i < 3; ++i) CHECK_FALSE(q.enqueue(Packet{1, i}, QueueKind::Legacy));
  CHECK_FALSE(q.enqueue(Packet{2, 0}, QueueKind::Abc));
  const auto victim = q.enqueue(Packet{2, 1}, QueueKind::Abc);
  REQUIRE(victim);
  CHECK(victim->flow_id == 1);
  CHECK(victim->seq == 2);
  CHECK(q.size(QueueKind::Abc) == 2);
  const auto self = q.enqueue(Packet{2, 2}, QueueKind::Abc);
  REQUIRE(self);
  CHECK(self->flow_id == 2);
  CHECK(q.size() == 4);
}

TEST_CASE("update_weights examples") {
  const std::vector<RateEntry> even{{5.0, QueueKind::Abc, false}, {5.0, QueueKind::Legacy, false}};
  CHECK(update_weights(even, 10.0, 0.1, 0.3) == doctest::Approx(0.5));

  const std::vector<RateEntry> only_abc{{5.0, QueueKind::Abc, false}, {1.0, QueueKind::Abc, false}};
  CHECK(update_weights(only_abc, 10.0, 0.1, 0.3) == 1.0);

  const std::vector<RateEntry> shorts{{10.0, QueueKind::Abc, false}, {2.0, QueueKind::Legacy, true}};
  CHECK(update_weights(shorts, 12.0, 0.1, 0.3) == doctest::Approx(10.0 / 12.0));

  CHECK(update_weights({}, 12.0, 0.1, 0.3) == 0.3);
}

TEST_CASE("a large short aggregate is not capped at the per-flow fair level") {
  // 38 of 96 to legacy shorts, the rest split between one flow per queue.
  const std::vector<RateEntry> table{{40.0, QueueKind::Abc, false},
                                     {40.0, QueueKind::Legacy, false},
                                     {38.0, QueueKind::Legacy, true}};
  CHECK(update_weights(table, 96.0, 0.1, 0.5) == doctest::Approx(29.0 / 96.0));

  // Aggregates beyond capacity are shrunk together and leave nothing over.
  const std::vector<RateEntry> flooded{{10.0, QueueKind::Abc, false},
                                       {60.0, QueueKind::Abc, true},
                                       {60.0, QueueKind::Legacy, true}};
  CHECK(update_weights(flooded, 100.0, 0.1, 0.3) == doctest::Approx(0.5));
}

TEST_CASE("max-min allocation matches the exact oracle") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> count(1, 6), demand(0, 40), cap(1, 120);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = count(rng);
    std::vector<double> d;
    std::vector<oracle::Rational> dr;
    for (int i = 0; i < n; ++i) {
      const int v = demand(rng);
      d.push_back(v);
      dr.emplace_back(v);
    }
    const int c = cap(rng);
    const auto got = max_min_allocation(d, c);
    const auto want = oracle::water_fill(dr, oracle::Rational(c));
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i].value()).epsilon(1e-12));
  }
}

TEST_CASE("router marks ABC packets and passes legacy packets") {
  const auto link = LinkProcess::fixed(12e6);
  AbcRouterConfig cfg;
  cfg.forced_fraction = 0.5;
  AbcRouter r(cfg, link);
  Packet legacy;
  legacy.abc = false;
  legacy.ecn = EcnCodepoint::Brake;
  r.enqueue(legacy, 0);
  const auto out = r.on_dequeue(1000);
  CHECK(out.record.queue == QueueKind::Legacy);
  CHECK(out.packet.ecn == EcnCodepoint::Brake);
  CHECK(out.packet.dequeue_time == 1000);

  for (int i = 0; i < 100; ++i) r.enqueue(Packet{}, 2000);
  int accel = 0;
  for (int i = 0; i < 100; ++i) {
    const auto res = r.on_dequeue(2000 + 1000 * static_cast<SimTime>(i + 1));
    CHECK(res.record.f == 0.5);
    CHECK(res.record.x == 1000 * static_cast<SimTime>(i + 1));
    accel += res.packet.ecn == EcnCodepoint::Accel;
  }
  CHECK(accel >= 49);
  CHECK(accel <= 51);
}

TEST_CASE("router target rate follows the head-of-line delay") {
  const auto link = LinkProcess::fixed(12e6);
  AbcRouterConfig cfg;
  cfg.initial_weight = 1.0;
  AbcRouter r(cfg, link);
  r.enqueue(Packet{}, 0);
  const auto res = r.on_dequeue(msec(150));
  CHECK(res.record.x == msec(150));
  CHECK(res.record.tr == doctest::Approx(target_rate(cfg.params, 12e6, msec(150))));
  CHECK(res.record.cr == doctest::Approx(12000 / 0.02));
}

TEST_CASE("router weights track max-min shares") {
  const auto link = LinkProcess::fixed(12e6);
  AbcRouter r(AbcRouterConfig{}, link);
  // One ABC and one legacy flow, both backlogged, over several periods.
  SimTime t = 0;
  for (int i = 0; i < 3000; ++i) {
    Packet a;
    a.flow_id = 1;
    Packet l;
    l.flow_id = 2;
    l.abc = false;
    r.enqueue(a, t);
    r.enqueue(l, t);
    t += 1000;
    r.on_dequeue(t);
    t += 1000;
    r.on_dequeue(t);
  }
  CHECK(r.weight() == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("abc parameter validation") {
  AbcParams p;
  p.eta = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = AbcParams{};
  p.token_limit = 0.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = AbcParams{};
  p.delta = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
