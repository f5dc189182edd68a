#pragma once

// Parallel-port read-out of converted codes. Each 8-bit code crosses the
// 4 multiplexed data lines as two nibbles, low half first, under a
// four-phase handshake on SEL (host request) and ACK (device data valid).
// BUSY flags a conversion in progress and P.END marks the second half.
//
//   host        device
//   SEL up  ->  IDLE -> CONVERTING (BUSY for conversion_ticks)
//           <-  LOW_READY   low nibble, ACK up
//   SEL down -> LOW_WAIT    ACK down
//   SEL up  ->  HIGH_READY  high nibble, ACK and P.END up
//   SEL down -> HIGH_WAIT   ACK and P.END down, then IDLE
//
// Data lines never change while ACK is high. A device left waiting on the
// host for timeout_ticks drops the sample and returns to IDLE.

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "toolsim/adc.hpp"

namespace toolsim {

struct LineStates {
  bool sel = false;
  bool busy = false;
  bool ack = false;
  bool p_end = false;
  std::uint8_t data = 0;

  friend bool operator==(const LineStates&, const LineStates&) = default;
};

struct Nibbles {
  std::uint8_t low = 0;
  std::uint8_t high = 0;

  friend bool operator==(const Nibbles&, const Nibbles&) = default;
};

constexpr Nibbles split_code(std::uint8_t code) {
  return {static_cast<std::uint8_t>(code & 0x0F), static_cast<std::uint8_t>(code >> 4)};
}

/// high * 16 + low. Throws std::out_of_range if either half exceeds 15.
std::uint8_t join_halves(int low, int high);

enum class DeviceState { Idle, Converting, LowReady, LowWait, HighReady, HighWait };

std::string_view to_string(DeviceState state);

struct DeviceFsm {
  DeviceState state = DeviceState::Idle;
  std::optional<AdcCode> pending_code;
  Tick conversion_ticks = 2;
  Tick timeout_ticks = 8;

  Tick conversion_remaining = 0;
  Tick waited_ticks = 0;
  bool prev_sel = false;

  std::uint64_t conversions_started = 0;
  std::uint64_t dropped_samples = 0;
};

struct DeviceEvents {
  bool conversion_started = false;
  bool conversion_completed = false;
  bool sample_dropped = false;
};

struct DeviceStep {
  DeviceFsm fsm;
  LineStates lines;
  DeviceEvents events;
};

/// One tick of the device. Reads SEL from `lines` and drives the rest.
/// `sample` is the code latched if a conversion begins on this tick.
DeviceStep device_step(DeviceFsm fsm, LineStates lines, Tick tick, const AdcCode& sample);

enum class HostState { Request, AwaitLow, AwaitHigh, Done };

std::string_view to_string(HostState state);

struct ReceivedCode {
  Tick tick = 0;
  std::uint8_t code = 0;

  friend bool operator==(const ReceivedCode&, const ReceivedCode&) = default;
};

struct HostFsm {
  HostState state = HostState::Request;
  std::optional<std::uint8_t> low_nibble;
  std::vector<ReceivedCode> received;
  Tick request_period_ticks = 10;

  bool sel = false;
  bool prev_ack = false;
  std::uint64_t violations = 0;
};

enum class HostEvent { None, Requested, Delivered, Violation };

struct HostStep {
  HostFsm fsm;
  LineStates lines;
  HostEvent event = HostEvent::None;
};

/// One tick of the host. Raises SEL at multiples of request_period_ticks
/// and walks the handshake. Pass the FSM by move; `received` grows.
HostStep host_step(HostFsm fsm, LineStates lines, Tick tick);

}  // namespace toolsim
