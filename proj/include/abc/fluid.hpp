#pragma once

#include <functional>
#include <string>
#include <vector>

#include "abc/core.hpp"

namespace abc {

/// Aggregate-queue fluid model: x'(t) = A - (x(t - tau) - d_t)+ / delta, with
/// x the queuing delay in seconds.
struct FluidParams {
  double eta = 0.98;
  SimTime delta = msec(133);
  SimTime delay_threshold = msec(50);
  unsigned flows = 1;
  double mu_bps = 24e6;
  SimTime tau = msec(100);     // feedback delay
  SimTime ai_period = msec(100);  // additive-increase period l

  /// (eta - 1) + N / (mu_pkts * l).
  double a() const;
  void validate() const;
};

/// Equilibrium queuing delay in seconds: A delta + d_t when A > 0, else 0.
double fixed_point_delay(const FluidParams& p);

/// (1 + A) mu when A < 0, otherwise mu.
double fixed_point_rate(const FluidParams& p);

/// Sets ai_period to tau + x* so the model's RTT includes its own standing
/// queue. Returns the adjusted parameters.
FluidParams self_consistent(FluidParams p, int iterations = 200);

struct FluidTrajectory {
  double step_s = 0.0;
  std::vector<double> time_s;
  std::vector<double> x_s;
};

/// Initial history on [-tau, 0], in seconds of queuing delay.
using FluidHistory = std::function<double(double t_seconds)>;

/// Forward Euler with a dense history buffer; x is clamped at zero. Requires
/// step <= tau / 50.
FluidTrajectory integrate(const FluidParams& p, const FluidHistory& history, SimTime horizon,
                          SimTime step);

/// Default step tau / 100 (at least 1 us).
SimTime default_step(const FluidParams& p);

enum class FluidVerdict { Converged, Oscillating };

std::string_view to_string(FluidVerdict v);

struct FluidAssessment {
  FluidVerdict verdict = FluidVerdict::Oscillating;
  double target_s = 0.0;      // x*
  double band_s = 0.0;        // half-width of the settling band
  double settling_time_s = 0.0;  // last exit from the band (converged runs only)
  double max_deviation_s = 0.0;  // over the final window
};

/// Converged when x stays within 1% of x* over the final 10 tau. When x* is
/// zero the band is 1% of d_t instead.
FluidAssessment assess(const FluidParams& p, const FluidTrajectory& traj);

}  // namespace abc
