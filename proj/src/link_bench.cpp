#include "toolsim/link_bench.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include <fmt/format.h>

namespace toolsim {

std::string_view to_string(StallPhase phase) {
  switch (phase) {
    case StallPhase::AbandonDuringConversion: return "abandon-during-conversion";
    case StallPhase::HoldSelAfterLowAck: return "hold-sel-after-low-ack";
    case StallPhase::WithholdHighRequest: return "withhold-high-request";
    case StallPhase::HoldSelAfterHighAck: return "hold-sel-after-high-ack";
  }
  return "?";
}

namespace {

// Decides whether the host's next move is the transition a stall plan withholds.
bool hits_stall(StallPhase phase, const HostFsm& before, const HostFsm& after,
                const LineStates& seen) {
  switch (phase) {
    case StallPhase::AbandonDuringConversion:
      return before.state == HostState::AwaitLow && seen.busy;
    case StallPhase::HoldSelAfterLowAck:
      return before.state == HostState::AwaitLow && after.state == HostState::AwaitHigh;
    case StallPhase::WithholdHighRequest:
      return before.state == HostState::AwaitHigh && !before.sel && after.sel;
    case StallPhase::HoldSelAfterHighAck:
      return before.state == HostState::AwaitHigh && after.state == HostState::Done;
  }
  return false;
}

}  // namespace

LinkBenchResult run_link_bench(std::span<const std::uint8_t> codes, const LinkBenchConfig& config) {
  LinkBenchResult result;

  DeviceFsm device;
  device.conversion_ticks = config.conversion_ticks;
  device.timeout_ticks = config.timeout_ticks;
  HostFsm host;
  host.request_period_ticks = config.sample_period_ticks;
  LineStates lines;

  std::size_t next_code = 0;
  std::int64_t transfer_index = -1;
  std::optional<StallPhase> armed;
  Tick frozen_until = 0;
  bool frozen = false;

  // Generous cap; a healthy run needs one sample period per code.
  const Tick max_ticks = (codes.size() + 4) * (config.sample_period_ticks + config.stall_ticks());

  for (Tick tick = 0; tick < max_ticks; ++tick) {
    if (frozen && tick >= frozen_until) {
      frozen = false;
      if (device.state != DeviceState::Idle) result.device_idle_on_every_resume = false;
      host.state = HostState::Request;
      host.sel = false;
      host.low_nibble.reset();
      host.prev_ack = lines.ack;
    }

    if (frozen) {
      lines.sel = host.sel;
    } else {
      HostFsm before_copy;
      before_copy.state = host.state;
      before_copy.sel = host.sel;
      if (next_code >= codes.size() && host.state == HostState::Request) {
        // Nothing left to request; keep the host parked.
        host.prev_ack = lines.ack;
        lines.sel = host.sel;
      } else {
        auto step = host_step(std::move(host), lines, tick);
        if (step.event == HostEvent::Requested) {
          ++transfer_index;
          armed.reset();
          for (const auto& plan : config.stalls) {
            if (static_cast<std::int64_t>(plan.transfer_index) == transfer_index) armed = plan.phase;
          }
        }
        if (armed && hits_stall(*armed, before_copy, step.fsm, lines)) {
          // Keep the pre-step host; only the abandon case changes SEL.
          host = std::move(step.fsm);
          host.state = before_copy.state;
          host.sel = *armed == StallPhase::AbandonDuringConversion ? false : before_copy.sel;
          if (!host.received.empty() && *armed == StallPhase::HoldSelAfterHighAck) {
            host.received.pop_back();
          }
          lines.sel = host.sel;
          frozen = true;
          frozen_until = tick + config.stall_ticks();
          armed.reset();
          ++result.stalls_injected;
        } else {
          host = std::move(step.fsm);
          lines = step.lines;
        }
      }
    }

    AdcCode sample{next_code < codes.size() ? codes[next_code] : std::uint8_t{0}, tick};
    auto dev = device_step(std::move(device), lines, tick, sample);
    device = std::move(dev.fsm);
    lines = dev.lines;
    if (dev.events.conversion_started) ++next_code;

    result.lines.push_back(lines);
    result.device_states.push_back(device.state);

    if (next_code >= codes.size() && !frozen && device.state == DeviceState::Idle &&
        host.state == HostState::Request) {
      break;
    }
  }

  result.delivered.reserve(host.received.size());
  for (const auto& r : host.received) result.delivered.push_back(r.code);
  result.conversions_started = device.conversions_started;
  result.dropped_samples = device.dropped_samples;
  result.violations = host.violations;
  result.device_idle_at_end = device.state == DeviceState::Idle;
  return result;
}

LineTraceStats scan_lines(std::span<const LineStates> lines) {
  LineTraceStats stats;
  LineStates prev;
  std::uint64_t busy_run = 0;
  auto close_busy_run = [&] {
    if (busy_run == 0) return;
    if (stats.busy_pulses == 1) {
      stats.busy_pulse_width = busy_run;
    } else if (busy_run != stats.busy_pulse_width) {
      stats.busy_pulses_uniform = false;
    }
    busy_run = 0;
  };

  for (const auto& l : lines) {
    if (l.ack && !prev.ack) ++stats.ack_pulses;
    if (l.p_end && !prev.p_end) ++stats.p_end_pulses;
    if (l.busy && !prev.busy) ++stats.busy_pulses;
    if (l.busy) {
      ++stats.busy_high_ticks;
      ++busy_run;
    } else {
      close_busy_run();
    }
    if (l.ack && prev.ack && l.data != prev.data) stats.data_stable_under_ack = false;
    if (l.p_end && !l.ack) stats.p_end_implies_ack = false;
    prev = l;
  }
  close_busy_run();
  return stats;
}

namespace {

ConformanceCheck check_clean_transfer(std::string name, std::span<const std::uint8_t> codes,
                                      const LinkBenchConfig& config) {
  auto run = run_link_bench(codes, config);
  auto stats = scan_lines(run.lines);
  const auto n = static_cast<std::uint64_t>(codes.size());

  std::vector<std::string> failures;
  if (!std::equal(run.delivered.begin(), run.delivered.end(), codes.begin(), codes.end())) {
    failures.push_back(fmt::format("delivered {} codes, expected {} in order", run.delivered.size(),
                                   codes.size()));
  }
  if (stats.ack_pulses != 2 * n) failures.push_back(fmt::format("ACK pulses {}", stats.ack_pulses));
  if (stats.p_end_pulses != n) failures.push_back(fmt::format("P.END pulses {}", stats.p_end_pulses));
  if (stats.busy_high_ticks != n * config.conversion_ticks || !stats.busy_pulses_uniform) {
    failures.push_back(fmt::format("BUSY high {} ticks", stats.busy_high_ticks));
  }
  if (!stats.data_stable_under_ack) failures.emplace_back("data changed under ACK");
  if (!stats.p_end_implies_ack) failures.emplace_back("P.END without ACK");
  if (run.dropped_samples != 0 || run.violations != 0) {
    failures.push_back(fmt::format("dropped {} violations {}", run.dropped_samples, run.violations));
  }

  ConformanceCheck check{std::move(name), failures.empty(), {}};
  if (failures.empty()) {
    check.detail = fmt::format("{} codes, {} ticks", n, run.lines.size());
  } else {
    for (const auto& f : failures) check.detail += (check.detail.empty() ? "" : "; ") + f;
  }
  return check;
}

}  // namespace

std::vector<ConformanceCheck> run_link_conformance(std::size_t random_codes, std::uint64_t seed) {
  std::vector<ConformanceCheck> checks;
  LinkBenchConfig nominal;

  std::vector<std::uint8_t> all(256);
  for (int c = 0; c < 256; ++c) all[c] = static_cast<std::uint8_t>(c);
  checks.push_back(check_clean_transfer("exhaustive 256 codes", all, nominal));

  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> random(random_codes);
  for (auto& c : random) c = static_cast<std::uint8_t>(rng() & 0xFF);
  checks.push_back(
      check_clean_transfer(fmt::format("{} seeded random codes", random_codes), random, nominal));

  // Stall each phase on transfer 2 of 6, then expect clean delivery of the rest.
  const std::vector<std::uint8_t> codes = {0x11, 0x22, 0xA5, 0x5A, 0xFF, 0x00};
  for (auto phase : kAllStallPhases) {
    LinkBenchConfig config;
    config.sample_period_ticks = 16;
    config.stalls = {{2, phase}};
    auto run = run_link_bench(codes, config);

    std::vector<std::uint8_t> expected = codes;
    expected.erase(expected.begin() + 2);
    bool ok = run.stalls_injected == 1 && run.dropped_samples == 1 &&
              run.device_idle_on_every_resume && run.device_idle_at_end &&
              run.delivered == expected && run.conversions_started == codes.size();
    checks.push_back({fmt::format("stall {}", to_string(phase)), ok,
                      fmt::format("dropped {} delivered {}/{} idle-on-resume {}",
                                  run.dropped_samples, run.delivered.size(), expected.size(),
                                  run.device_idle_on_every_resume)});
  }
  return checks;
}

}  // namespace toolsim
