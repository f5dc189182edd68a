#pragma once

// Physical side of the wear-compensation loop: the receding tool edge, the
// radially movable holder and the contact transducer riding on the edge.
//
// Units are fixed across the project: lengths in micrometres, time in
// seconds, voltages in volts.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace toolsim {

enum class WearMode { ConstantRate, PiecewiseLinear };

/// One segment start of a piecewise wear law: from `time_s` on, the edge
/// recedes at `rate_um_per_s` until the next breakpoint.
struct WearBreakpoint {
  double time_s = 0.0;
  double rate_um_per_s = 0.0;

  friend bool operator==(const WearBreakpoint&, const WearBreakpoint&) = default;
};

struct WearModel {
  WearMode mode = WearMode::ConstantRate;
  double rate_um_per_s = 0.0;
  std::vector<WearBreakpoint> breakpoints;
  double noise_amplitude_um = 0.0;
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument when a rate is negative, breakpoints are
  /// not strictly increasing or do not start at t = 0.
  void validate() const;

  /// Instantaneous wear speed at time t.
  double rate_at(double t_s) const;

  /// Exact integral of the wear speed over [t0, t1].
  double integrate(double t0_s, double t1_s) const;

  friend bool operator==(const WearModel&, const WearModel&) = default;
};

struct TransducerModel {
  double v_contact = 4.0;
  double sensitivity_v_per_um = 1.0;
  double v_floor = 0.0;

  void validate() const;

  /// Gap at which the (noise-free) output equals `v`, on the active range.
  double gap_for_voltage(double v) const;

  friend bool operator==(const TransducerModel&, const TransducerModel&) = default;
};

struct PlantState {
  double t_s = 0.0;
  double wear_depth_um = 0.0;
  double holder_pos_um = 0.0;
  double gap_um = 0.0;
  double transducer_v = 0.0;

  friend bool operator==(const PlantState&, const PlantState&) = default;
};

inline double contact_gap(double wear_depth_um, double holder_pos_um) {
  double gap = wear_depth_um - holder_pos_um;
  return gap > 0.0 ? gap : 0.0;
}

/// v = clamp(v_contact - sensitivity * gap, v_floor, 5).
double transducer_voltage(double gap_um, const TransducerModel& model);

/// Advances time by dt and the edge by the integrated wear over that step.
/// The gap is recomputed; transducer_v is left for the caller to resample.
PlantState advance_wear(PlantState state, const WearModel& model, double dt_s);

/// Moves the holder forward. Throws std::invalid_argument on delta < 0.
PlantState apply_holder_motion(PlantState state, double delta_um);

/// Owns a plant state together with its models and the noise source.
class Plant {
 public:
  Plant(WearModel wear, TransducerModel transducer);

  const PlantState& state() const { return state_; }
  const WearModel& wear_model() const { return wear_; }
  const TransducerModel& transducer_model() const { return transducer_; }

  /// Wear for dt, then holder motion, then a fresh transducer reading.
  void step(double dt_s, double holder_delta_um);

 private:
  void sense();

  WearModel wear_;
  TransducerModel transducer_;
  PlantState state_;
  std::mt19937_64 rng_;
};

}  // namespace toolsim
