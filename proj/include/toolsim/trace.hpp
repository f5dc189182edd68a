#pragma once

// CSV persistence of a run: header row of column names in declared order,
// LF line endings, floating-point fields with 9 significant digits.

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "toolsim/simulator.hpp"

namespace toolsim {

inline constexpr std::array<std::string_view, 21> kTraceColumns = {
    "tick",          "t",           "wear_depth",     "holder_pos",      "gap",
    "transducer_v",  "held_v",      "adc_code",       "saturation",      "sel",
    "busy",          "ack",         "p_end",          "data",            "leds",
    "mode",          "pulse",       "brake_engaged",  "pulses_emitted",  "dropped_samples",
    "violations"};

bool is_trace_column(std::string_view name);

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);
std::string trace_csv(std::span<const TraceRecord> trace);

/// Numeric view of one column; nullopt for a blank cell. Modes map to their
/// declaration index, LEDs to their byte value. Throws std::invalid_argument
/// for an unknown column.
std::optional<double> column_value(const TraceRecord& record, std::string_view column);

}  // namespace toolsim
