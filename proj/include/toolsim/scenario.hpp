#pragma once

// Scenario files: UTF-8 lines of `key = value`, `#` starts a comment, keys
// namespaced per module (`wear.rate`, `adc.sample_period_ticks`, ...).
// print_config() emits the canonical form: every applicable key, fixed
// order, numbers in shortest round-trip notation. A canonical file loads
// and prints back byte-identically.

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toolsim/adc.hpp"
#include "toolsim/compensator.hpp"
#include "toolsim/plant.hpp"

namespace toolsim {

enum class AdcSource { Transducer, Sine };
enum class DetectorSource { Analog, Adc };

/// offset + amplitude * sin(2 pi f t), an alternative converter input.
struct SineSource {
  double offset_v = 2.5;
  double amplitude_v = 2.4;
  double frequency_hz = 0.5;

  double at(double t_s) const;

  friend bool operator==(const SineSource&, const SineSource&) = default;
};

struct Scenario {
  std::string name = "scenario";
  double tick_seconds = 0.01;
  Tick duration_ticks = 1;

  WearModel wear;
  TransducerModel transducer;

  AdcConfig adc;
  AdcSource adc_source = AdcSource::Transducer;
  SineSource sine;

  Tick link_timeout_ticks = 8;

  DetectorConfig detector;
  DetectorSource detector_source = DetectorSource::Analog;
  ActuatorChain chain;
  double pulse_frequency_hz = 1.0;
  Tick brake_engage_delay_ticks = 0;
  Tick brake_release_delay_ticks = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Ticks the nominal handshake needs after a conversion before the host can
/// issue its next request.
inline constexpr Tick kHandshakeTicks = 5;

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string key, std::size_t line, const std::string& message);

  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

struct ScenarioEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

using ScenarioOverride = std::pair<std::string, std::string>;

/// Splits text into entries without interpreting values.
std::vector<ScenarioEntry> parse_scenario_entries(std::string_view text);

/// Parses and fully validates. `overrides` replace (or add) values before
/// validation; an added key reports line 0.
Scenario load_scenario(std::string_view text, std::span<const ScenarioOverride> overrides = {});

Scenario load_scenario_file(const std::filesystem::path& path,
                            std::span<const ScenarioOverride> overrides = {});

std::string print_config(const Scenario& scenario);

}  // namespace toolsim
