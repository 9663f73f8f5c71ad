#include <doctest.h>

#include <map>
#include <random>

#include "abc/topk.hpp"

using namespace abc;

TEST_CASE("space saving under capacity is exact") {
  SpaceSavingSketch s(2);
  s.record(1, 1);
  s.record(1, 1);
  s.record(2, 1);
  const auto e = s.entries();
  REQUIRE(e.size() == 2);
  CHECK(e[0] == SketchEntry{1, 2, 0});
  CHECK(e[1] == SketchEntry{2, 1, 0});
}

TEST_CASE("space saving evicts the minimum and inherits its count") {
  SpaceSavingSketch s(2);
  s.record(1, 1);
  s.record(1, 1);
  s.record(2, 1);
  s.record(3, 1);
  const auto e = s.entries();
  REQUIRE(e.size() == 2);
  CHECK(e[0] == SketchEntry{1, 2, 0});
  CHECK(e[1] == SketchEntry{3, 2, 1});
}

TEST_CASE("top_rates") {
  SpaceSavingSketch s(4);
  CHECK(top_rates(s, msec(100)).empty());
  s.record(7, 25000);
  const auto r = top_rates(s, msec(100));
  REQUIRE(r.size() == 1);
  CHECK(r[0].rate_bps == doctest::Approx(2e6));

  SpaceSavingSketch t(4);
  t.record(9, 100);
  t.record(3, 100);
  const auto tied = top_rates(t, msec(100));
  CHECK(tied[0].flow == 3);
  CHECK(tied[1].flow == 9);
  CHECK_THROWS(top_rates(t, 0));
}

TEST_CASE("space saving bounds against an exact counter") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    SpaceSavingSketch s(1 + trial % 10);
    std::map<FlowId, std::uint64_t> exact;
    // Skewed stream over up to 50 flows.
    std::geometric_distribution<int> flow(0.15);
    std::uniform_int_distribution<int> size(40, 1500);
    for (int i = 0; i < 2000; ++i) {
      const auto f = static_cast<FlowId>(std::min(flow(rng), 49));
      const auto b = static_cast<std::uint64_t>(size(rng));
      s.record(f, b);
      exact[f] += b;
    }
    CHECK(s.size() <= s.capacity());
    for (const auto& e : s.entries()) {
      CHECK(e.count - e.error <= exact[e.flow]);
      CHECK(exact[e.flow] <= e.count);
    }
  }
}
