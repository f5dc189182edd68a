#include "toolsim/adc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace toolsim {

void AdcConfig::validate() const {
  if (conversion_ticks < 1) throw std::invalid_argument("conversion_ticks must be >= 1");
  if (sample_period_ticks < conversion_ticks) {
    throw std::invalid_argument("sample_period_ticks must be >= conversion_ticks");
  }
}

AdcCode quantize(double v, Tick sample_tick) {
  // NaN compares false everywhere; treat it as the bottom of the range.
  double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, AdcConfig::kVRef);
  double scaled = std::floor(clamped * AdcConfig::kCodes / AdcConfig::kVRef);
  auto code = static_cast<int>(std::min(scaled, double{AdcConfig::kCodes - 1}));
  return AdcCode{static_cast<std::uint8_t>(code), sample_tick};
}

bool saturates(double v) { return !(v >= 0.0 && v <= AdcConfig::kVRef); }

double reconstruct(std::uint8_t code) {
  return (static_cast<double>(code) + 0.5) * AdcConfig::kVRef / AdcConfig::kCodes;
}

SampleHold::SampleHold(Tick sample_period_ticks) : period_(sample_period_ticks) {
  if (period_ == 0) throw std::invalid_argument("sample period must be >= 1 tick");
}

double SampleHold::sample(double v, Tick tick) {
  if (!is_sample_instant(tick)) {
    throw std::logic_error("sample at tick " + std::to_string(tick) +
                           " is off the sampling grid");
  }
  held_ = v;
  latched_at_ = tick;
  return v;
}

}  // namespace toolsim
