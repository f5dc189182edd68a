#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/simulator.hpp"

namespace toolsim {

std::string format_summary(const RunSummary& summary);

/// Line plot of one trace column against tick, as a standalone SVG.
/// Throws std::invalid_argument for an unknown column.
void write_plot_svg(std::ostream& out, std::span<const TraceRecord> trace, std::string_view column);

/// Writes `<column>.svg` into `dir` for each column. All names are checked
/// before any file is written. Returns the paths written.
std::vector<std::filesystem::path> emit_plots(std::span<const TraceRecord> trace,
                                              std::span<const std::string> columns,
                                              const std::filesystem::path& dir);

}  // namespace toolsim
