#include "abc/fluid.hpp"

#include <algorithm>
#include <cmath>

namespace abc {

double FluidParams::a() const {
  const double mu_pkts = mu_bps / (kMtu * 8.0);
  return (eta - 1.0) + static_cast<double>(flows) / (mu_pkts * to_seconds(ai_period));
}

void FluidParams::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("fluid.eta: must lie in (0, 1)");
  if (delta == 0) throw ConfigError("fluid.delta: must be positive");
  if (!(mu_bps > 0.0)) throw ConfigError("fluid.mu: must be positive");
  if (tau == 0) throw ConfigError("fluid.tau: must be positive");
  if (ai_period == 0) throw ConfigError("fluid.l: must be positive");
  if (flows == 0) throw ConfigError("fluid.flows: must be positive");
}

double fixed_point_delay(const FluidParams& p) {
  const double a = p.a();
  return a > 0.0 ? a * to_seconds(p.delta) + to_seconds(p.delay_threshold) : 0.0;
}

double fixed_point_rate(const FluidParams& p) {
  const double a = p.a();
  return a < 0.0 ? (1.0 + a) * p.mu_bps : p.mu_bps;
}

FluidParams self_consistent(FluidParams p, int iterations) {
  // l -> tau + x*(l) is a contraction for any sensible parameters.
  for (int i = 0; i < iterations; ++i) {
    const SimTime next = p.tau + from_seconds(fixed_point_delay(p));
    if (next == p.ai_period) break;
    p.ai_period = next;
  }
  return p;
}

SimTime default_step(const FluidParams& p) { return std::max<SimTime>(1, p.tau / 100); }

FluidTrajectory integrate(const FluidParams& p, const FluidHistory& history, SimTime horizon,
                          SimTime step) {
  p.validate();
  if (step == 0 || step * 50 > p.tau) throw ConfigError("fluid.step: must be positive and at most tau/50");
  const double h = to_seconds(step);
  const auto lag = static_cast<std::size_t>(std::llround(static_cast<double>(p.tau) / static_cast<double>(step)));
  const std::size_t n = static_cast<std::size_t>(horizon / step);
  const double a = p.a();
  const double delta = to_seconds(p.delta);
  const double dt = to_seconds(p.delay_threshold);

  // buf[i] holds x at time (i - lag) * h.
  std::vector<double> buf(lag + n + 1);
  for (std::size_t i = 0; i <= lag; ++i) {
    buf[i] = std::max(0.0, history(-static_cast<double>(lag - i) * h));
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double delayed = buf[k];
    const double x = buf[lag + k];
    const double slope = a - std::max(0.0, delayed - dt) / delta;
    buf[lag + k + 1] = std::max(0.0, x + h * slope);
  }

  FluidTrajectory traj;
  traj.step_s = h;
  traj.time_s.resize(n + 1);
  traj.x_s.assign(buf.begin() + static_cast<std::ptrdiff_t>(lag), buf.end());
  for (std::size_t k = 0; k <= n; ++k) traj.time_s[k] = static_cast<double>(k) * h;
  return traj;
}

std::string_view to_string(FluidVerdict v) {
  return v == FluidVerdict::Converged ? "converged" : "oscillating";
}

FluidAssessment assess(const FluidParams& p, const FluidTrajectory& traj) {
  FluidAssessment out;
  out.target_s = fixed_point_delay(p);
  out.band_s = 0.01 * (out.target_s > 0.0 ? out.target_s : to_seconds(p.delay_threshold));
  if (traj.x_s.empty()) return out;

  const double end = traj.time_s.back();
  const double window_start = end - 10.0 * to_seconds(p.tau);
  bool inside = window_start >= 0.0;
  double last_exit = 0.0;
  for (std::size_t k = 0; k < traj.x_s.size(); ++k) {
    const double dev = std::abs(traj.x_s[k] - out.target_s);
    if (dev > out.band_s) last_exit = traj.time_s[k] + traj.step_s;
    if (traj.time_s[k] >= window_start) {
      out.max_deviation_s = std::max(out.max_deviation_s, dev);
      if (dev > out.band_s) inside = false;
    }
  }
  if (inside) {
    out.verdict = FluidVerdict::Converged;
    out.settling_time_s = last_exit;
  }
  return out;
}

}  // namespace abc
