#include "toolsim/trace.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>


namespace toolsim {

bool is_trace_column(std::string_view name) {
  return std::find(kTraceColumns.begin(), kTraceColumns.end(), name) != kTraceColumns.end();
}

namespace {

std::string leds_bits(std::uint8_t leds) {
  std::string out(8, '0');
  for (int bit = 0; bit < 8; ++bit) {
    if ((leds >> bit) & 1) out[7 - bit] = '1';
  }
  return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  std::string buf;
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
    buf += kTraceColumns[i];
    buf += i + 1 < kTraceColumns.size() ? ',' : '\n';
  }
  out << buf;

  auto b = [](bool v) { return v ? '1' : '0'; };
  for (const auto& r : trace) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},", r.tick,
                   r.t_s, r.wear_depth_um, r.holder_pos_um, r.gap_um, r.transducer_v, r.held_v);
    if (r.adc_code) fmt::format_to(std::back_inserter(buf), "{}", *r.adc_code);
    fmt::format_to(std::back_inserter(buf), ",{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                   b(r.saturation), b(r.lines.sel), b(r.lines.busy), b(r.lines.ack),
                   b(r.lines.p_end), r.lines.data, leds_bits(r.leds), to_string(r.mode),
                   b(r.pulse), b(r.brake_engaged), r.pulses_emitted, r.dropped_samples,
                   r.violations);
    out << buf;
  }
}

std::string trace_csv(std::span<const TraceRecord> trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

std::optional<double> column_value(const TraceRecord& r, std::string_view column) {
  auto d = [](auto v) { return std::optional<double>(static_cast<double>(v)); };
  if (column == "tick") return d(r.tick);
  if (column == "t") return r.t_s;
  if (column == "wear_depth") return r.wear_depth_um;
  if (column == "holder_pos") return r.holder_pos_um;
  if (column == "gap") return r.gap_um;
  if (column == "transducer_v") return r.transducer_v;
  if (column == "held_v") return r.held_v;
  if (column == "adc_code") return r.adc_code ? d(*r.adc_code) : std::nullopt;
  if (column == "saturation") return d(r.saturation);
  if (column == "sel") return d(r.lines.sel);
  if (column == "busy") return d(r.lines.busy);
  if (column == "ack") return d(r.lines.ack);
  if (column == "p_end") return d(r.lines.p_end);
  if (column == "data") return d(r.lines.data);
  if (column == "leds") return d(r.leds);
  if (column == "mode") return d(static_cast<int>(r.mode));
  if (column == "pulse") return d(r.pulse);
  if (column == "brake_engaged") return d(r.brake_engaged);
  if (column == "pulses_emitted") return d(r.pulses_emitted);
  if (column == "dropped_samples") return d(r.dropped_samples);
  if (column == "violations") return d(r.violations);
  throw std::invalid_argument(fmt::format("unknown trace column '{}'", column));
}

}  // namespace toolsim
