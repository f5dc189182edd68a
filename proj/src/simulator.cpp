#include "toolsim/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace toolsim {

InvariantViolation::InvariantViolation(Tick tick, const std::string& what)
    : std::runtime_error(fmt::format("tick {}: {}", tick, what)), tick_(tick) {}

namespace {

// Per-tick checks of the cross-module invariants; cheap enough to run always.
void check_tick(const TraceRecord& rec, const TraceRecord* prev,
                const std::optional<AdcCode>& last_completed) {
  auto fail = [&](const std::string& what) { throw InvariantViolation(rec.tick, what); };

  if (rec.gap_um != contact_gap(rec.wear_depth_um, rec.holder_pos_um)) fail("gap != max(0, wear - holder)");
  if (!(rec.transducer_v >= 0.0 && rec.transducer_v <= 5.0)) fail("transducer voltage off the rails");
  if (rec.lines.data > 15) fail("data lines out of range");
  if (rec.lines.p_end && !rec.lines.ack) fail("P.END without ACK");
  if (last_completed && rec.leds != last_completed->code) fail("display does not mirror last code");
  if (rec.pulse && rec.mode != CompensatorMode::Compensating) fail("pulse outside COMPENSATING");

  if (prev == nullptr) return;
  if (rec.wear_depth_um < prev->wear_depth_um) fail("wear depth decreased");
  if (rec.holder_pos_um < prev->holder_pos_um) fail("holder retracted");
  if (rec.holder_pos_um != prev->holder_pos_um && (rec.brake_engaged || prev->brake_engaged)) {
    fail("holder moved with the brake engaged");
  }
  if (rec.lines.ack && prev->lines.ack && rec.lines.data != prev->lines.data) {
    fail("data lines changed while ACK high");
  }
}

}  // namespace

RunResult run(const Scenario& sc) {
  RunResult result;
  result.trace.reserve(sc.duration_ticks);

  Plant plant(sc.wear, sc.transducer);
  SampleHold sample_hold(sc.adc.sample_period_ticks);

  DeviceFsm device;
  device.conversion_ticks = sc.adc.conversion_ticks;
  device.timeout_ticks = sc.link_timeout_ticks;
  HostFsm host;
  host.request_period_ticks = sc.adc.sample_period_ticks;
  LineStates lines;

  DisplayState display;
  std::optional<AdcCode> last_completed;
  double in_flight_held = 0.0;
  bool in_flight_saturated = false;

  CompensatorFsm comp{.brake = {.engaged = true,
                                .engage_delay_ticks = sc.brake_engage_delay_ticks,
                                .release_delay_ticks = sc.brake_release_delay_ticks},
                      .generator = PulseGenerator(sc.pulse_frequency_hz, sc.tick_seconds)};
  bool detector_active = false;
  bool pending_pulse = false;
  std::uint64_t pulses_applied = 0;

  double error_sum = 0.0;
  RunSummary& summary = result.summary;

  for (Tick tick = 0; tick < sc.duration_ticks; ++tick) {
    TraceRecord rec;
    rec.tick = tick;

    // 1. plant
    if (tick > 0) {
      double motion = 0.0;
      if (pending_pulse) {
        // Sterbenz: consecutive multiples of delta differ exactly, so the
        // holder lands on pulses_applied * delta without drift.
        ++pulses_applied;
        motion = holder_travel(sc.chain, pulses_applied) - plant.state().holder_pos_um;
      }
      plant.step(sc.tick_seconds, motion);
    }
    const PlantState& ps = plant.state();

    // 2. converter
    double v_in = sc.adc_source == AdcSource::Sine
                      ? sc.sine.at(static_cast<double>(tick) * sc.tick_seconds)
                      : ps.transducer_v;
    if (sample_hold.is_sample_instant(tick)) sample_hold.sample(v_in, tick);
    const double held = *sample_hold.held();
    const AdcCode candidate = quantize(held, sample_hold.latched_at());

    // 3. link
    auto h = host_step(std::move(host), lines, tick);
    host = std::move(h.fsm);
    lines = h.lines;
    if (h.event == HostEvent::Delivered) {
      double err = std::abs(reconstruct(host.received.back().code) - in_flight_held);
      error_sum += err;
      summary.max_abs_acquisition_error_v = std::max(summary.max_abs_acquisition_error_v, err);
    }
    auto d = device_step(std::move(device), lines, tick, candidate);
    device = std::move(d.fsm);
    lines = d.lines;
    if (d.events.conversion_started) {
      in_flight_held = held;
      in_flight_saturated = saturates(held);
    }

    // 4. display
    if (d.events.conversion_completed) {
      last_completed = *device.pending_code;
      display = update_display(*last_completed, tick);
      rec.adc_code = last_completed->code;
      rec.saturation = in_flight_saturated;
    }

    // 5. detector and compensator
    std::optional<double> detector_v;
    if (sc.detector_source == DetectorSource::Analog) {
      detector_v = ps.transducer_v;
    } else if (last_completed) {
      detector_v = reconstruct(*last_completed);
    }
    if (detector_v) detector_active = detector_step(*detector_v, sc.detector, detector_active);
    auto c = compensator_step(std::move(comp), detector_active);
    comp = std::move(c.fsm);
    pending_pulse = c.pulse;

    rec.t_s = ps.t_s;
    rec.wear_depth_um = ps.wear_depth_um;
    rec.holder_pos_um = ps.holder_pos_um;
    rec.gap_um = ps.gap_um;
    rec.transducer_v = ps.transducer_v;
    rec.held_v = held;
    rec.lines = lines;
    rec.leds = static_cast<std::uint8_t>(leds_value(display));
    rec.mode = comp.mode;
    rec.pulse = c.pulse;
    rec.brake_engaged = comp.brake.engaged;
    rec.pulses_emitted = comp.pulses_emitted;
    rec.dropped_samples = device.dropped_samples;
    rec.violations = host.violations;

    check_tick(rec, result.trace.empty() ? nullptr : &result.trace.back(), last_completed);
    summary.max_gap_um = std::max(summary.max_gap_um, rec.gap_um);
    result.trace.push_back(rec);
  }

  summary.conversions_started = device.conversions_started;
  summary.delivered_samples = host.received.size();
  summary.dropped_samples = device.dropped_samples;
  // HIGH_WAIT follows delivery; every other non-idle state holds an open sample.
  summary.in_flight_samples =
      device.state == DeviceState::Idle || device.state == DeviceState::HighWait ? 0 : 1;
  summary.violations = host.violations;
  summary.final_gap_um = result.trace.empty() ? 0.0 : result.trace.back().gap_um;
  summary.mean_abs_acquisition_error_v =
      summary.delivered_samples == 0 ? 0.0 : error_sum / static_cast<double>(summary.delivered_samples);
  summary.pulses_emitted = comp.pulses_emitted;
  result.received = std::move(host.received);
  return result;
}

}  // namespace toolsim
