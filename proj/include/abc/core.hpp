#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace abc {

/// Microseconds since simulation start.
using SimTime = std::uint64_t;

constexpr SimTime usec(std::uint64_t n) { return n; }
constexpr SimTime msec(std::uint64_t n) { return n * 1000; }
constexpr SimTime sec(std::uint64_t n) { return n * 1000000; }
constexpr double to_seconds(SimTime t) { return static_cast<double>(t) * 1e-6; }
constexpr SimTime from_seconds(double s) { return static_cast<SimTime>(s * 1e6 + 0.5); }

using FlowId = std::uint32_t;

constexpr std::uint32_t kMtu = 1500;

/// Fractional packet count of a byte count, in MTUs.
constexpr double mtu_packets(double bytes) { return bytes / kMtu; }

/// Two-bit IP ECN field as reinterpreted by ABC (ECT, CE).
enum class EcnCodepoint : std::uint8_t {
  NotEct = 0b00,
  Accel = 0b01,
  Brake = 0b10,
  EcnSet = 0b11,
};

constexpr std::uint8_t to_bits(EcnCodepoint c) { return static_cast<std::uint8_t>(c); }

constexpr EcnCodepoint ecn_from_bits(std::uint8_t bits) {
  return static_cast<EcnCodepoint>(bits & 0b11);
}

/// Legacy routers treat both ABC codepoints as ECN-capable transport.
constexpr bool is_ecn_capable(EcnCodepoint c) {
  return c == EcnCodepoint::Accel || c == EcnCodepoint::Brake;
}

std::string_view to_string(EcnCodepoint c);

/// Accel/brake echo carried back on the NS bit.
enum class Mark : std::uint8_t { Accel, Brake };

std::string_view to_string(Mark m);

struct Packet {
  FlowId flow_id = 0;
  std::uint64_t seq = 0;
  std::uint32_t size = kMtu;
  EcnCodepoint ecn = EcnCodepoint::Accel;
  // Router classification hint (IPv6 flow label / IPID in a real deployment).
  bool abc = true;
  SimTime send_time = 0;
  // Per-hop stamps; overwritten at each hop.
  SimTime enqueue_time = 0;
  SimTime dequeue_time = 0;

  friend bool operator==(const Packet&, const Packet&) = default;
};

struct Ack {
  FlowId flow_id = 0;
  std::uint64_t acked_seq = 0;
  std::uint32_t bytes_newly_acked = 0;
  Mark echo_mark = Mark::Accel;
  bool ece = false;
  // Send time of the newest packet covered, for RTT sampling.
  SimTime echo_send_time = 0;

  friend bool operator==(const Ack&, const Ack&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abc
