#pragma once

// Global tick loop. Within one tick the order is fixed:
//   1. plant: wear for one tick, then holder motion from the previous
//      tick's pulse, then a new transducer reading
//   2. converter: sample-and-hold on the sampling grid
//   3. link: host step, then device step
//   4. display: refreshed when a conversion completes
//   5. detector and compensator; a pulse moves the holder next tick

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "toolsim/compensator.hpp"
#include "toolsim/display.hpp"
#include "toolsim/link.hpp"
#include "toolsim/scenario.hpp"

namespace toolsim {

struct TraceRecord {
  Tick tick = 0;
  double t_s = 0.0;
  double wear_depth_um = 0.0;
  double holder_pos_um = 0.0;
  double gap_um = 0.0;
  double transducer_v = 0.0;
  double held_v = 0.0;
  std::optional<std::uint8_t> adc_code;  // set on the tick a conversion completes
  bool saturation = false;
  LineStates lines;
  std::uint8_t leds = 0;
  CompensatorMode mode = CompensatorMode::LockedIdle;
  bool pulse = false;
  bool brake_engaged = true;
  std::uint64_t pulses_emitted = 0;
  std::uint64_t dropped_samples = 0;
  std::uint64_t violations = 0;
};

struct RunSummary {
  std::uint64_t conversions_started = 0;
  std::uint64_t delivered_samples = 0;
  std::uint64_t dropped_samples = 0;
  std::uint64_t in_flight_samples = 0;  // conversion still open when the run ended
  std::uint64_t violations = 0;
  double max_gap_um = 0.0;
  double final_gap_um = 0.0;
  double mean_abs_acquisition_error_v = 0.0;
  double max_abs_acquisition_error_v = 0.0;
  std::uint64_t pulses_emitted = 0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  RunSummary summary;
  std::vector<ReceivedCode> received;
};

/// Raised when a per-tick consistency check fails during a run.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(Tick tick, const std::string& what);
  Tick tick() const { return tick_; }

 private:
  Tick tick_;
};

/// Runs a validated scenario. Deterministic for a given scenario.
RunResult run(const Scenario& scenario);

}  // namespace toolsim
