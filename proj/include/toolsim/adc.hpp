#pragma once

// 8-bit converter over a 0-5 V input: a sample-and-hold latched once per
// sampling period followed by binary encoding of the held value.

#include <cstdint>
#include <optional>

namespace toolsim {

using Tick = std::uint64_t;

struct AdcConfig {
  static constexpr double kVRef = 5.0;
  static constexpr int kBits = 8;
  static constexpr int kCodes = 1 << kBits;

  Tick sample_period_ticks = 10;
  Tick conversion_ticks = 2;

  /// Requires sample_period_ticks >= conversion_ticks >= 1.
  void validate() const;

  /// Width of one code step, 5/256 V.
  static constexpr double lsb() { return kVRef / kCodes; }

  friend bool operator==(const AdcConfig&, const AdcConfig&) = default;
};

struct AdcCode {
  std::uint8_t code = 0;
  Tick sample_tick = 0;

  friend bool operator==(const AdcCode&, const AdcCode&) = default;
};

/// code = min(floor(clamp(v, 0, 5) * 256 / 5), 255).
AdcCode quantize(double v, Tick sample_tick = 0);

/// True when `v` lies outside [0, 5] and the converter clamps it.
bool saturates(double v);

/// Mid-rise reconstruction (code + 0.5) * 5 / 256.
double reconstruct(std::uint8_t code);
inline double reconstruct(const AdcCode& code) { return reconstruct(code.code); }

/// Latch register of the sampling stage. The held value only changes at
/// multiples of the sampling period.
class SampleHold {
 public:
  explicit SampleHold(Tick sample_period_ticks);

  bool is_sample_instant(Tick tick) const { return tick % period_ == 0; }

  /// Latches `v`. Throws std::logic_error off the sampling grid.
  double sample(double v, Tick tick);

  std::optional<double> held() const { return held_; }
  Tick latched_at() const { return latched_at_; }

 private:
  Tick period_;
  std::optional<double> held_;
  Tick latched_at_ = 0;
};

}  // namespace toolsim
