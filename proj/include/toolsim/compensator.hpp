#pragma once

// Wear compensation chain: the amplified transducer signal feeds a
// hysteresis detector, which gates an adjustable-frequency pulse generator
// driving the electromagnet. Each stroke pushes the ratchet arm, indexes the
// gang wheel, turns the worm and lead screw, and advances the holder by a
// fixed displacement. Pneumatic brakes hold the holder except while
// compensating.

#include <cstdint>
#include <string_view>

#include "toolsim/adc.hpp"
#include "toolsim/plant.hpp"

namespace toolsim {

struct DetectorConfig {
  double gain = 1.0;
  double v_on = 3.8;   // amplified level at or below which compensation starts
  double v_off = 3.95; // amplified level at or above which it stops

  void validate() const;

  /// v_on mapped back through the transducer law to a gap in micrometres.
  double gap_on(const TransducerModel& transducer) const;
  double gap_off(const TransducerModel& transducer) const;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

/// Hysteresis: true when gain * v <= v_on, false when >= v_off, else unchanged.
bool detector_step(double transducer_v, const DetectorConfig& config, bool prev_active);

struct ActuatorChain {
  int teeth_per_pulse = 1;      // wheel teeth indexed per electromagnet stroke
  int wheel_teeth = 60;         // teeth on the gang wheel
  int worm_ratio = 40;          // wheel turns per lead screw turn
  double screw_pitch_um = 1000; // holder travel per screw turn

  void validate() const;

  friend bool operator==(const ActuatorChain&, const ActuatorChain&) = default;
};

/// pitch * teeth_per_pulse / (wheel_teeth * worm_ratio).
double displacement_per_pulse(const ActuatorChain& chain);

/// Holder travel after `pulses` strokes, computed as pulses * delta.
double holder_travel(const ActuatorChain& chain, std::uint64_t pulses);

/// Pulse frequency whose mean holder speed equals `wear_rate_um_per_s`.
/// Throws std::invalid_argument for a non-positive wear rate.
double required_frequency(double wear_rate_um_per_s, const ActuatorChain& chain);

class PulseGenerator {
 public:
  /// Throws std::invalid_argument unless 0 < frequency < 1 / tick_seconds.
  PulseGenerator(double frequency_hz, double tick_seconds);

  double frequency_hz() const { return frequency_hz_; }
  double period_ticks() const { return period_ticks_; }
  double phase_ticks() const { return phase_ticks_; }

  /// Next tick fires immediately.
  void restart() { phase_ticks_ = 0.0; }

  /// Advances one tick; true if a pulse is emitted on it.
  bool tick();

 private:
  double frequency_hz_;
  double period_ticks_;
  double phase_ticks_ = 0.0;
};

struct BrakeState {
  bool engaged = true;
  Tick engage_delay_ticks = 0;
  Tick release_delay_ticks = 0;
};

enum class CompensatorMode { LockedIdle, Releasing, Compensating, Engaging };
enum class BrakeCommand { Hold, Release, Engage };

std::string_view to_string(CompensatorMode mode);

struct CompensatorFsm {
  CompensatorMode mode = CompensatorMode::LockedIdle;
  std::uint64_t pulses_emitted = 0;
  Tick delay_remaining = 0;
  BrakeState brake;
  PulseGenerator generator;
};

struct CompensatorStep {
  CompensatorFsm fsm;
  bool pulse = false;
  BrakeCommand brake_command = BrakeCommand::Hold;
};

/// One tick of mode sequencing:
///   LOCKED_IDLE --active--> RELEASING --release delay--> COMPENSATING
///   COMPENSATING --inactive--> ENGAGING --engage delay--> LOCKED_IDLE
/// Pulses are emitted only in COMPENSATING, first one on entry.
CompensatorStep compensator_step(CompensatorFsm fsm, bool detector_active);

}  // namespace toolsim
