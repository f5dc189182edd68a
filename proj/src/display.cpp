#include "toolsim/display.hpp"

namespace toolsim {

DisplayState update_display(const AdcCode& code, Tick completion_tick) {
  DisplayState display;
  for (int bit = 0; bit < 8; ++bit) display.leds[bit] = ((code.code >> bit) & 1) != 0;
  display.last_update_tick = completion_tick;
  return display;
}

int leds_value(const DisplayState& display) {
  int value = 0;
  for (int bit = 0; bit < 8; ++bit) {
    if (display.leds[bit]) value |= 1 << bit;
  }
  return value;
}

std::string leds_string(const DisplayState& display) {
  std::string out(8, '0');
  for (int bit = 0; bit < 8; ++bit) {
    if (display.leds[bit]) out[7 - bit] = '1';
  }
  return out;
}

}  // namespace toolsim
