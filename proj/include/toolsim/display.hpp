#pragma once

#include <array>
#include <optional>
#include <string>

#include "toolsim/adc.hpp"

namespace toolsim {

/// Eight LEDs mirroring the last completed conversion. leds[0] is bit 0.
struct DisplayState {
  std::array<bool, 8> leds{};
  std::optional<Tick> last_update_tick;

  friend bool operator==(const DisplayState&, const DisplayState&) = default;
};

DisplayState update_display(const AdcCode& code, Tick completion_tick);

/// LEDs read back as an unsigned byte.
int leds_value(const DisplayState& display);

/// "0"/"1" per LED, bit 7 first.
std::string leds_string(const DisplayState& display);

}  // namespace toolsim
