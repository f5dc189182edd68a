#include "toolsim/link.hpp"

#include <stdexcept>
#include <string>

namespace toolsim {

std::uint8_t join_halves(int low, int high) {
  if (low < 0 || low > 15 || high < 0 || high > 15) {
    throw std::out_of_range("nibble out of range: low=" + std::to_string(low) +
                            " high=" + std::to_string(high));
  }
  return static_cast<std::uint8_t>(high * 16 + low);
}

std::string_view to_string(DeviceState state) {
  switch (state) {
    case DeviceState::Idle: return "IDLE";
    case DeviceState::Converting: return "CONVERTING";
    case DeviceState::LowReady: return "LOW_READY";
    case DeviceState::LowWait: return "LOW_WAIT";
    case DeviceState::HighReady: return "HIGH_READY";
    case DeviceState::HighWait: return "HIGH_WAIT";
  }
  return "?";
}

std::string_view to_string(HostState state) {
  switch (state) {
    case HostState::Request: return "REQUEST";
    case HostState::AwaitLow: return "AWAIT_LOW";
    case HostState::AwaitHigh: return "AWAIT_HIGH";
    case HostState::Done: return "DONE";
  }
  return "?";
}

namespace {

// Counts a tick spent waiting on the host; returns true once the budget is gone.
bool wait_expired(DeviceFsm& fsm) { return ++fsm.waited_ticks >= fsm.timeout_ticks; }

void drop_sample(DeviceFsm& fsm, LineStates& lines, DeviceEvents& events) {
  lines.busy = false;
  lines.ack = false;
  lines.p_end = false;
  lines.data = 0;
  fsm.state = DeviceState::Idle;
  fsm.pending_code.reset();
  fsm.waited_ticks = 0;
  ++fsm.dropped_samples;
  events.sample_dropped = true;
}

}  // namespace

DeviceStep device_step(DeviceFsm fsm, LineStates lines, Tick /*tick*/, const AdcCode& sample) {
  DeviceEvents events;
  const bool sel_rise = lines.sel && !fsm.prev_sel;
  const bool sel_fall = !lines.sel && fsm.prev_sel;

  switch (fsm.state) {
    case DeviceState::Idle:
      if (sel_rise) {
        fsm.state = DeviceState::Converting;
        fsm.pending_code = sample;
        fsm.conversion_remaining = fsm.conversion_ticks;
        lines.busy = true;
        ++fsm.conversions_started;
        events.conversion_started = true;
      }
      break;

    case DeviceState::Converting:
      if (--fsm.conversion_remaining == 0) {
        lines.busy = false;
        lines.data = split_code(fsm.pending_code->code).low;
        lines.ack = true;
        fsm.state = DeviceState::LowReady;
        fsm.waited_ticks = 0;
        events.conversion_completed = true;
      }
      break;

    case DeviceState::LowReady:
      if (sel_fall) {
        lines.ack = false;
        fsm.state = DeviceState::LowWait;
        fsm.waited_ticks = 0;
      } else if (wait_expired(fsm)) {
        drop_sample(fsm, lines, events);
      }
      break;

    case DeviceState::LowWait:
      if (sel_rise) {
        lines.data = split_code(fsm.pending_code->code).high;
        lines.ack = true;
        lines.p_end = true;
        fsm.state = DeviceState::HighReady;
        fsm.waited_ticks = 0;
      } else if (wait_expired(fsm)) {
        drop_sample(fsm, lines, events);
      }
      break;

    case DeviceState::HighReady:
      if (sel_fall) {
        lines.ack = false;
        lines.p_end = false;
        fsm.state = DeviceState::HighWait;
        fsm.waited_ticks = 0;
      } else if (wait_expired(fsm)) {
        drop_sample(fsm, lines, events);
      }
      break;

    case DeviceState::HighWait:
      fsm.state = DeviceState::Idle;
      fsm.pending_code.reset();
      break;
  }

  fsm.prev_sel = lines.sel;
  return {std::move(fsm), lines, events};
}

namespace {

void abort_transfer(HostFsm& fsm, HostEvent& event) {
  fsm.sel = false;
  fsm.state = HostState::Request;
  fsm.low_nibble.reset();
  ++fsm.violations;
  event = HostEvent::Violation;
}

}  // namespace

HostStep host_step(HostFsm fsm, LineStates lines, Tick tick) {
  HostEvent event = HostEvent::None;
  const bool ack_rise = lines.ack && !fsm.prev_ack;

  switch (fsm.state) {
    case HostState::Request:
      if (ack_rise) {
        // ACK without a request outstanding.
        abort_transfer(fsm, event);
      } else if (fsm.request_period_ticks > 0 && tick % fsm.request_period_ticks == 0) {
        fsm.sel = true;
        fsm.state = HostState::AwaitLow;
        event = HostEvent::Requested;
      }
      break;

    case HostState::AwaitLow:
      if (ack_rise) {
        if (lines.p_end) {
          abort_transfer(fsm, event);
        } else {
          fsm.low_nibble = lines.data;
          fsm.sel = false;
          fsm.state = HostState::AwaitHigh;
        }
      }
      break;

    case HostState::AwaitHigh:
      if (!fsm.sel) {
        if (ack_rise) {
          abort_transfer(fsm, event);
        } else if (!lines.ack) {
          fsm.sel = true;
        }
      } else if (ack_rise) {
        if (!lines.p_end) {
          abort_transfer(fsm, event);
        } else {
          std::uint8_t code = join_halves(*fsm.low_nibble, lines.data);
          fsm.received.push_back({tick, code});
          fsm.low_nibble.reset();
          fsm.sel = false;
          fsm.state = HostState::Done;
          event = HostEvent::Delivered;
        }
      }
      break;

    case HostState::Done:
      if (ack_rise) {
        abort_transfer(fsm, event);
      } else if (!lines.ack) {
        fsm.state = HostState::Request;
      }
      break;
  }

  fsm.prev_ack = lines.ack;
  lines.sel = fsm.sel;
  return {std::move(fsm), lines, event};
}

}  // namespace toolsim
