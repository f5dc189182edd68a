#include "toolsim/compensator.hpp"

#include <cmath>
#include <stdexcept>

namespace toolsim {

void DetectorConfig::validate() const {
  if (!(gain > 0.0) || !std::isfinite(gain)) throw std::invalid_argument("detector gain must be > 0");
  if (!(v_on < v_off)) throw std::invalid_argument("detector v_on must be below v_off");
}

double DetectorConfig::gap_on(const TransducerModel& transducer) const {
  return transducer.gap_for_voltage(v_on / gain);
}

double DetectorConfig::gap_off(const TransducerModel& transducer) const {
  return transducer.gap_for_voltage(v_off / gain);
}

bool detector_step(double transducer_v, const DetectorConfig& config, bool prev_active) {
  double amplified = config.gain * transducer_v;
  if (amplified <= config.v_on) return true;
  if (amplified >= config.v_off) return false;
  return prev_active;
}

void ActuatorChain::validate() const {
  if (teeth_per_pulse < 1) throw std::invalid_argument("teeth_per_pulse must be >= 1");
  if (wheel_teeth < 2) throw std::invalid_argument("wheel_teeth must be >= 2");
  if (worm_ratio < 1) throw std::invalid_argument("worm_ratio must be >= 1");
  if (!(screw_pitch_um > 0.0) || !std::isfinite(screw_pitch_um)) {
    throw std::invalid_argument("screw_pitch must be > 0");
  }
}

double displacement_per_pulse(const ActuatorChain& chain) {
  return chain.screw_pitch_um * chain.teeth_per_pulse /
         (static_cast<double>(chain.wheel_teeth) * chain.worm_ratio);
}

double holder_travel(const ActuatorChain& chain, std::uint64_t pulses) {
  return static_cast<double>(pulses) * displacement_per_pulse(chain);
}

double required_frequency(double wear_rate_um_per_s, const ActuatorChain& chain) {
  if (!(wear_rate_um_per_s > 0.0)) throw std::invalid_argument("wear rate must be > 0");
  return wear_rate_um_per_s / displacement_per_pulse(chain);
}

PulseGenerator::PulseGenerator(double frequency_hz, double tick_seconds)
    : frequency_hz_(frequency_hz), period_ticks_(0.0) {
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
    throw std::invalid_argument("pulse frequency must be > 0");
  }
  if (!(tick_seconds > 0.0)) throw std::invalid_argument("tick length must be > 0");
  if (!(1.0 / tick_seconds > frequency_hz)) {
    throw std::invalid_argument("tick rate must exceed the pulse frequency");
  }
  period_ticks_ = 1.0 / (frequency_hz * tick_seconds);
}

bool PulseGenerator::tick() {
  // A part-per-billion of the period absorbs rounding in period_ticks_.
  bool fire = phase_ticks_ <= 1e-9 * period_ticks_;
  if (fire) phase_ticks_ += period_ticks_;
  phase_ticks_ -= 1.0;
  return fire;
}

std::string_view to_string(CompensatorMode mode) {
  switch (mode) {
    case CompensatorMode::LockedIdle: return "LOCKED_IDLE";
    case CompensatorMode::Releasing: return "RELEASING";
    case CompensatorMode::Compensating: return "COMPENSATING";
    case CompensatorMode::Engaging: return "ENGAGING";
  }
  return "?";
}

CompensatorStep compensator_step(CompensatorFsm fsm, bool detector_active) {
  bool pulse = false;
  BrakeCommand command = BrakeCommand::Hold;

  switch (fsm.mode) {
    case CompensatorMode::LockedIdle:
      if (detector_active) {
        fsm.mode = CompensatorMode::Releasing;
        fsm.delay_remaining = fsm.brake.release_delay_ticks;
        command = BrakeCommand::Release;
      }
      break;

    case CompensatorMode::Releasing:
      if (fsm.delay_remaining > 0) {
        --fsm.delay_remaining;
        break;
      }
      fsm.mode = CompensatorMode::Compensating;
      fsm.brake.engaged = false;
      fsm.generator.restart();
      [[fallthrough]];

    case CompensatorMode::Compensating:
      if (!detector_active) {
        fsm.mode = CompensatorMode::Engaging;
        fsm.delay_remaining = fsm.brake.engage_delay_ticks;
        command = BrakeCommand::Engage;
      } else if (fsm.generator.tick()) {
        pulse = true;
        ++fsm.pulses_emitted;
      }
      break;

    case CompensatorMode::Engaging:
      if (fsm.delay_remaining > 0) {
        --fsm.delay_remaining;
        break;
      }
      fsm.mode = CompensatorMode::LockedIdle;
      fsm.brake.engaged = true;
      break;
  }
  return {fsm, pulse, command};
}

}  // namespace toolsim
