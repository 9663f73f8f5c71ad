#include <doctest.h>

#include "abc/core.hpp"

using namespace abc;

TEST_CASE("mtu_packets converts bytes to fractional packets") {
  CHECK(mtu_packets(1500) == 1.0);
  CHECK(mtu_packets(0) == 0.0);
  CHECK(mtu_packets(3000) == 2.0);
  CHECK(mtu_packets(750) == 0.5);
}

TEST_CASE("ECN codepoints round-trip through two bits") {
  for (auto c : {EcnCodepoint::NotEct, EcnCodepoint::Accel, EcnCodepoint::Brake, EcnCodepoint::EcnSet}) {
    CHECK(ecn_from_bits(to_bits(c)) == c);
  }
  CHECK(to_bits(EcnCodepoint::NotEct) == 0b00);
  CHECK(to_bits(EcnCodepoint::Accel) == 0b01);
  CHECK(to_bits(EcnCodepoint::Brake) == 0b10);
  CHECK(to_bits(EcnCodepoint::EcnSet) == 0b11);
}

TEST_CASE("both ABC codepoints look ECN-capable to legacy routers") {
  CHECK(is_ecn_capable(EcnCodepoint::Accel));
  CHECK(is_ecn_capable(EcnCodepoint::Brake));
  CHECK_FALSE(is_ecn_capable(EcnCodepoint::NotEct));
  CHECK_FALSE(is_ecn_capable(EcnCodepoint::EcnSet));
}

TEST_CASE("fresh packets default to one MTU marked accelerate") {
  Packet p;
  CHECK(p.size == kMtu);
  CHECK(p.ecn == EcnCodepoint::Accel);
}

TEST_CASE("time helpers") {
  CHECK(msec(1) == 1000);
  CHECK(sec(2) == 2000000);
  CHECK(to_seconds(msec(250)) == doctest::Approx(0.25));
  CHECK(from_seconds(0.0015) == 1500);
}
