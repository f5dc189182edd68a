#include "toolsim/report.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "toolsim/trace.hpp"

namespace toolsim {

std::string format_summary(const RunSummary& s) {
  std::string out;
  auto line = [&out](std::string_view label, const auto& value) {
    out += fmt::format("{:<30} {}\n", label, value);
  };
  line("conversions_started", s.conversions_started);
  line("delivered_samples", s.delivered_samples);
  line("dropped_samples", s.dropped_samples);
  line("in_flight_samples", s.in_flight_samples);
  line("violations", s.violations);
  line("max_gap_um", fmt::format("{:.9g}", s.max_gap_um));
  line("final_gap_um", fmt::format("{:.9g}", s.final_gap_um));
  line("mean_abs_acquisition_error_v", fmt::format("{:.9g}", s.mean_abs_acquisition_error_v));
  line("max_abs_acquisition_error_v", fmt::format("{:.9g}", s.max_abs_acquisition_error_v));
  line("pulses_emitted", s.pulses_emitted);
  return out;
}

void write_plot_svg(std::ostream& out, std::span<const TraceRecord> trace, std::string_view column) {
  if (!is_trace_column(column)) {
    throw std::invalid_argument(fmt::format("unknown trace column '{}'", column));
  }
  constexpr double kWidth = 800, kHeight = 300, kMargin = 40;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : trace) {
    if (auto v = column_value(r, column)) {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  }
  if (!(lo <= hi)) lo = hi = 0.0;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double last_tick = trace.empty() ? 1.0 : std::max<double>(1.0, trace.back().tick);

  // Decimate to at most ~2 points per horizontal pixel.
  const std::size_t stride = std::max<std::size_t>(1, trace.size() / (2 * static_cast<std::size_t>(kWidth)));
  std::string points;
  for (std::size_t i = 0; i < trace.size(); i += stride) {
    auto v = column_value(trace[i], column);
    if (!v) continue;
    double x = kMargin + (kWidth - 2 * kMargin) * static_cast<double>(trace[i].tick) / last_tick;
    double y = kHeight - kMargin - (kHeight - 2 * kMargin) * (*v - lo) / (hi - lo);
    points += fmt::format("{:.2f},{:.2f} ", x, y);
  }

  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">{3}</text>\n"
      "<text x=\"4\" y=\"{2}\" font-family=\"sans-serif\" font-size=\"10\">{4:.4g}</text>\n"
      "<text x=\"4\" y=\"{5}\" font-family=\"sans-serif\" font-size=\"10\">{6:.4g}</text>\n"
      "<text x=\"{7}\" y=\"{8}\" font-family=\"sans-serif\" font-size=\"10\">tick {9}</text>\n"
      "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"{10}\"/>\n"
      "</svg>\n",
      kWidth, kHeight, kMargin, column, hi, kHeight - kMargin, lo, kWidth - 2 * kMargin,
      kHeight - 10, static_cast<Tick>(last_tick), points);
}

std::vector<std::filesystem::path> emit_plots(std::span<const TraceRecord> trace,
                                              std::span<const std::string> columns,
                                              const std::filesystem::path& dir) {
  for (const auto& c : columns) {
    if (!is_trace_column(c)) throw std::invalid_argument(fmt::format("unknown trace column '{}'", c));
  }
  std::vector<std::filesystem::path> written;
  for (const auto& c : columns) {
    auto path = dir / (c + ".svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    write_plot_svg(out, trace, c);
    written.push_back(path);
  }
  return written;
}

}  // namespace toolsim
