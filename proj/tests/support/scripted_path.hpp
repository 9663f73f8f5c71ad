#pragma once

// Round-based harness: one ABC sender behind a router that marks with a
// constant fraction, a fixed RTT, per-packet ACKs and random ACK loss.
// Everything sent in response to round k's ACKs forms round k + 1.

#include <random>
#include <vector>

#include "abc/abc_router.hpp"
#include "abc/abc_sender.hpp"
#include "abc/receiver.hpp"

namespace harness {

struct ScriptedPathConfig {
  double fraction = 0.5;
  double initial_window = 10.0;
  bool additive_increase = false;
  double ack_delivery = 1.0;
  std::uint64_t seed = 1;
  // Packets pushed through the marker first so its token is in steady state.
  int marker_warmup = 256;
  double token_limit = 2.0;
  bool inflight_cap = true;
};

class ScriptedPath {
 public:
  explicit ScriptedPath(const ScriptedPathConfig& cfg)
      : cfg_(cfg), sender_(1, params(cfg)), marker_(cfg.token_limit), echo_(1, 1), rng_(cfg.seed) {
    for (int i = 0; i < cfg.marker_warmup; ++i) marker_.mark(abc::EcnCodepoint::Accel, cfg.fraction);
    for (std::size_t k = sender_.sendable(); k > 0; --k) round_.push_back(sender_.transmit(now_));
  }

  /// Window after each of `n` RTTs; element 0 is the starting window.
  std::vector<double> run(int n) {
    std::vector<double> w{sender_.windows().w_abc()};
    std::bernoulli_distribution delivered(cfg_.ack_delivery);
    for (int r = 0; r < n; ++r) {
      now_ += abc::msec(100);
      std::vector<abc::Packet> next;
      for (auto pkt : round_) {
        pkt = marker_.mark(pkt, cfg_.fraction);
        for (const auto& ack : echo_.on_packet(pkt)) {
          if (!delivered(rng_)) continue;
          for (std::size_t k = sender_.on_ack(ack, now_); k > 0; --k) next.push_back(sender_.transmit(now_));
          sender_.apply_cap();
          sender_.check_cap();
          per_ack_.push_back(sender_.windows().w_abc());
        }
      }
      if (next.empty() && sender_.outstanding().inflight_count() > 0) {
        // Every ACK of the round was lost: recover as a retransmission timer would.
        for (std::size_t k = sender_.on_timeout(now_); k > 0; --k) next.push_back(sender_.transmit(now_));
        sender_.apply_cap();
      }
      round_ = std::move(next);
      w.push_back(sender_.windows().w_abc());
    }
    return w;
  }

  const abc::AbcSender& sender() const { return sender_; }
  /// w_abc after every delivered ACK, across all rounds run so far.
  const std::vector<double>& per_ack_windows() const { return per_ack_; }

 private:
  static abc::AbcSenderParams params(const ScriptedPathConfig& cfg) {
    abc::AbcSenderParams p;
    p.initial_window = cfg.initial_window;
    p.additive_increase = cfg.additive_increase;
    p.dual_window = false;
    p.inflight_cap = cfg.inflight_cap;
    return p;
  }

  ScriptedPathConfig cfg_;
  abc::AbcSender sender_;
  abc::MarkerState marker_;
  abc::EchoState echo_;
  std::mt19937_64 rng_;
  abc::SimTime now_ = 0;
  std::vector<abc::Packet> round_;
  std::vector<double> per_ack_;
};

}  // namespace harness
