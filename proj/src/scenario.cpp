#include "toolsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace toolsim {

double SineSource::at(double t_s) const {
  return offset_v + amplitude_v * std::sin(2.0 * std::numbers::pi * frequency_hz * t_s);
}

ScenarioError::ScenarioError(std::string key, std::size_t line, const std::string& message)
    : std::runtime_error(fmt::format("line {}: {}: {}", line, key, message)),
      key_(std::move(key)),
      line_(line) {}

namespace {

// Canonical key order for print_config.
constexpr std::string_view kKeys[] = {
    "name",
    "tick_seconds",
    "duration_ticks",
    "wear.mode",
    "wear.rate",
    "wear.breakpoints",
    "wear.noise_amplitude",
    "wear.seed",
    "transducer.v_contact",
    "transducer.sensitivity",
    "transducer.v_floor",
    "adc.sample_period_ticks",
    "adc.conversion_ticks",
    "adc.source",
    "sine.offset",
    "sine.amplitude",
    "sine.frequency",
    "link.timeout_ticks",
    "detector.source",
    "detector.gain",
    "detector.v_on",
    "detector.v_off",
    "chain.teeth_per_pulse",
    "chain.wheel_teeth",
    "chain.worm_ratio",
    "chain.screw_pitch",
    "pulse.frequency",
    "brake.engage_delay_ticks",
    "brake.release_delay_ticks",
};

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool is_known_key(std::string_view key) {
  for (auto k : kKeys) {
    if (k == key) return true;
  }
  return false;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

class EntryTable {
 public:
  EntryTable(std::vector<ScenarioEntry> entries, std::size_t eof_line) : eof_line_(eof_line) {
    for (auto& e : entries) {
      if (!is_known_key(e.key)) throw ScenarioError(e.key, e.line, "unknown key");
      auto [it, inserted] = entries_.emplace(e.key, e);
      if (!inserted) {
        throw ScenarioError(e.key, e.line,
                            fmt::format("duplicate key (first set on line {})", it->second.line));
      }
    }
  }

  bool has(std::string_view key) const { return entries_.count(std::string(key)) != 0; }

  std::size_t line_of(std::string_view key) const {
    auto it = entries_.find(std::string(key));
    return it == entries_.end() ? eof_line_ : it->second.line;
  }

  [[noreturn]] void fail(std::string_view key, const std::string& message) const {
    throw ScenarioError(std::string(key), line_of(key), message);
  }

  std::string_view required(std::string_view key) {
    auto it = entries_.find(std::string(key));
    if (it == entries_.end()) throw ScenarioError(std::string(key), eof_line_, "missing required key");
    used_.emplace(std::string(key));
    if (it->second.value.empty()) fail(key, "empty value for required key");
    return it->second.value;
  }

  std::optional<std::string_view> optional(std::string_view key) {
    auto it = entries_.find(std::string(key));
    if (it == entries_.end()) return std::nullopt;
    used_.emplace(std::string(key));
    if (it->second.value.empty()) fail(key, "empty value");
    return std::string_view(it->second.value);
  }

  double number(std::string_view key) { return to_number(key, required(key)); }

  double number_or(std::string_view key, double fallback) {
    auto v = optional(key);
    return v ? to_number(key, *v) : fallback;
  }

  std::uint64_t count(std::string_view key) { return to_count(key, required(key)); }

  std::uint64_t count_or(std::string_view key, std::uint64_t fallback) {
    auto v = optional(key);
    return v ? to_count(key, *v) : fallback;
  }

  /// Every key present must have been consumed by the active modes.
  void reject_unused() const {
    for (const auto& [key, entry] : entries_) {
      if (used_.count(key) == 0) throw ScenarioError(key, entry.line, "key not used by this configuration");
    }
  }

 private:
  double to_number(std::string_view key, std::string_view text) const {
    auto v = parse_double(text);
    if (!v) fail(key, fmt::format("'{}' is not a number", text));
    return *v;
  }

  std::uint64_t to_count(std::string_view key, std::string_view text) const {
    auto v = parse_uint(text);
    if (!v) fail(key, fmt::format("'{}' is not a non-negative integer", text));
    return *v;
  }

  std::map<std::string, ScenarioEntry> entries_;
  std::set<std::string, std::less<>> used_;
  std::size_t eof_line_;
};

std::vector<WearBreakpoint> parse_breakpoints(EntryTable& table, std::string_view text) {
  std::vector<WearBreakpoint> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      table.fail("wear.breakpoints", fmt::format("'{}' is not a time:rate pair", item));
    }
    auto t = parse_double(trim(item.substr(0, colon)));
    auto r = parse_double(trim(item.substr(colon + 1)));
    if (!t || !r) table.fail("wear.breakpoints", fmt::format("'{}' is not a time:rate pair", item));
    out.push_back({*t, *r});
  }
  return out;
}

int small_int(EntryTable& table, std::string_view key, std::uint64_t lo) {
  auto v = table.count(key);
  if (v < lo || v > 1'000'000) table.fail(key, fmt::format("must be in [{}, 1000000]", lo));
  return static_cast<int>(v);
}

}  // namespace

std::vector<ScenarioEntry> parse_scenario_entries(std::string_view text) {
  std::vector<ScenarioEntry> entries;
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (text.empty()) break;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioError(std::string(line), line_no, "expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ScenarioError("", line_no, "missing key before '='");
    entries.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return entries;
}

Scenario load_scenario(std::string_view text, std::span<const ScenarioOverride> overrides) {
  auto entries = parse_scenario_entries(text);
  for (const auto& [key, value] : overrides) {
    bool replaced = false;
    for (auto& e : entries) {
      if (e.key == key) {
        e.value = value;
        replaced = true;
      }
    }
    if (!replaced) entries.push_back({key, value, 0});
  }
  std::size_t eof_line = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  if (!text.empty() && text.back() != '\n') ++eof_line;
  EntryTable table(std::move(entries), eof_line);

  Scenario s;
  if (auto name = table.optional("name")) s.name = std::string(*name);

  s.tick_seconds = table.number("tick_seconds");
  if (!(s.tick_seconds > 0.0)) table.fail("tick_seconds", "must be > 0");
  s.duration_ticks = table.count("duration_ticks");
  if (s.duration_ticks < 1) table.fail("duration_ticks", "must be >= 1");

  auto mode = table.optional("wear.mode").value_or("constant");
  if (mode == "constant") {
    s.wear.mode = WearMode::ConstantRate;
    s.wear.rate_um_per_s = table.number("wear.rate");
    if (s.wear.rate_um_per_s < 0.0) table.fail("wear.rate", "must be >= 0");
  } else if (mode == "piecewise") {
    s.wear.mode = WearMode::PiecewiseLinear;
    s.wear.breakpoints = parse_breakpoints(table, table.required("wear.breakpoints"));
    try {
      s.wear.validate();
    } catch (const std::invalid_argument& e) {
      table.fail("wear.breakpoints", e.what());
    }
  } else {
    table.fail("wear.mode", fmt::format("'{}' is not one of constant, piecewise", mode));
  }
  s.wear.noise_amplitude_um = table.number_or("wear.noise_amplitude", 0.0);
  if (s.wear.noise_amplitude_um < 0.0) table.fail("wear.noise_amplitude", "must be >= 0");
  s.wear.rng_seed = table.count_or("wear.seed", 0);

  s.transducer.v_contact = table.number("transducer.v_contact");
  if (!(s.transducer.v_contact > 0.0 && s.transducer.v_contact <= 5.0)) {
    table.fail("transducer.v_contact", "must be in (0, 5]");
  }
  s.transducer.sensitivity_v_per_um = table.number("transducer.sensitivity");
  if (!(s.transducer.sensitivity_v_per_um > 0.0)) table.fail("transducer.sensitivity", "must be > 0");
  s.transducer.v_floor = table.number_or("transducer.v_floor", 0.0);
  if (!(s.transducer.v_floor >= 0.0 && s.transducer.v_floor < s.transducer.v_contact)) {
    table.fail("transducer.v_floor", "must be >= 0 and below transducer.v_contact");
  }

  s.adc.sample_period_ticks = table.count("adc.sample_period_ticks");
  s.adc.conversion_ticks = table.count("adc.conversion_ticks");
  if (s.adc.conversion_ticks < 1) table.fail("adc.conversion_ticks", "must be >= 1");
  if (s.adc.sample_period_ticks < s.adc.conversion_ticks + kHandshakeTicks) {
    table.fail("adc.sample_period_ticks",
               fmt::format("must be >= adc.conversion_ticks + {} to fit conversion and handshake",
                           kHandshakeTicks));
  }
  auto source = table.optional("adc.source").value_or("transducer");
  if (source == "transducer") {
    s.adc_source = AdcSource::Transducer;
  } else if (source == "sine") {
    s.adc_source = AdcSource::Sine;
    s.sine.offset_v = table.number("sine.offset");
    s.sine.amplitude_v = table.number("sine.amplitude");
    if (s.sine.amplitude_v < 0.0) table.fail("sine.amplitude", "must be >= 0");
    s.sine.frequency_hz = table.number("sine.frequency");
    if (!(s.sine.frequency_hz > 0.0)) table.fail("sine.frequency", "must be > 0");
  } else {
    table.fail("adc.source", fmt::format("'{}' is not one of transducer, sine", source));
  }

  s.link_timeout_ticks = table.count("link.timeout_ticks");
  if (s.link_timeout_ticks < 1) table.fail("link.timeout_ticks", "must be >= 1");

  auto det_source = table.optional("detector.source").value_or("analog");
  if (det_source == "analog") {
    s.detector_source = DetectorSource::Analog;
  } else if (det_source == "adc") {
    s.detector_source = DetectorSource::Adc;
  } else {
    table.fail("detector.source", fmt::format("'{}' is not one of analog, adc", det_source));
  }
  s.detector.gain = table.number("detector.gain");
  if (!(s.detector.gain > 0.0)) table.fail("detector.gain", "must be > 0");
  s.detector.v_on = table.number("detector.v_on");
  s.detector.v_off = table.number("detector.v_off");
  if (!(s.detector.v_on < s.detector.v_off)) table.fail("detector.v_off", "must be above detector.v_on");

  s.chain.teeth_per_pulse = small_int(table, "chain.teeth_per_pulse", 1);
  s.chain.wheel_teeth = small_int(table, "chain.wheel_teeth", 2);
  s.chain.worm_ratio = small_int(table, "chain.worm_ratio", 1);
  s.chain.screw_pitch_um = table.number("chain.screw_pitch");
  if (!(s.chain.screw_pitch_um > 0.0)) table.fail("chain.screw_pitch", "must be > 0");

  s.pulse_frequency_hz = table.number("pulse.frequency");
  if (!(s.pulse_frequency_hz > 0.0)) table.fail("pulse.frequency", "must be > 0");
  if (!(1.0 / s.tick_seconds > s.pulse_frequency_hz)) {
    table.fail("pulse.frequency",
               fmt::format("tick rate {} Hz must exceed the pulse frequency", 1.0 / s.tick_seconds));
  }

  s.brake_engage_delay_ticks = table.count_or("brake.engage_delay_ticks", 0);
  s.brake_release_delay_ticks = table.count_or("brake.release_delay_ticks", 0);

  table.reject_unused();
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path,
                            std::span<const ScenarioOverride> overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string(), 0, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str(), overrides);
}

std::string print_config(const Scenario& s) {
  std::string out;
  auto put = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{} = {}\n", key, value);
  };

  put("name", s.name);
  put("tick_seconds", s.tick_seconds);
  put("duration_ticks", s.duration_ticks);
  if (s.wear.mode == WearMode::ConstantRate) {
    put("wear.mode", "constant");
    put("wear.rate", s.wear.rate_um_per_s);
  } else {
    put("wear.mode", "piecewise");
    std::string bps;
    for (const auto& bp : s.wear.breakpoints) {
      bps += fmt::format("{}{}:{}", bps.empty() ? "" : ", ", bp.time_s, bp.rate_um_per_s);
    }
    put("wear.breakpoints", bps);
  }
  put("wear.noise_amplitude", s.wear.noise_amplitude_um);
  put("wear.seed", s.wear.rng_seed);
  put("transducer.v_contact", s.transducer.v_contact);
  put("transducer.sensitivity", s.transducer.sensitivity_v_per_um);
  put("transducer.v_floor", s.transducer.v_floor);
  put("adc.sample_period_ticks", s.adc.sample_period_ticks);
  put("adc.conversion_ticks", s.adc.conversion_ticks);
  if (s.adc_source == AdcSource::Transducer) {
    put("adc.source", "transducer");
  } else {
    put("adc.source", "sine");
    put("sine.offset", s.sine.offset_v);
    put("sine.amplitude", s.sine.amplitude_v);
    put("sine.frequency", s.sine.frequency_hz);
  }
  put("link.timeout_ticks", s.link_timeout_ticks);
  put("detector.source", s.detector_source == DetectorSource::Analog ? "analog" : "adc");
  put("detector.gain", s.detector.gain);
  put("detector.v_on", s.detector.v_on);
  put("detector.v_off", s.detector.v_off);
  put("chain.teeth_per_pulse", s.chain.teeth_per_pulse);
  put("chain.wheel_teeth", s.chain.wheel_teeth);
  put("chain.worm_ratio", s.chain.worm_ratio);
  put("chain.screw_pitch", s.chain.screw_pitch_um);
  put("pulse.frequency", s.pulse_frequency_hz);
  put("brake.engage_delay_ticks", s.brake_engage_delay_ticks);
  put("brake.release_delay_ticks", s.brake_release_delay_ticks);
  return out;
}

}  // namespace toolsim
