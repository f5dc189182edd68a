// toolsim: command-line front end for the acquisition and wear-compensation
// simulator.
//
//   toolsim run <scenario> [--trace out.csv] [--plot <column>...] [--plot-dir dir]
//   toolsim sweep <scenario> --vary key=a,b,c [--vary ...] [--trace-dir dir]
//   toolsim print-config <scenario>
//   toolsim conformance [--random-codes N] [--seed S]
//
// Exit codes: 0 success, 1 validation error, 2 invariant violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "toolsim/link_bench.hpp"
#include "toolsim/report.hpp"
#include "toolsim/scenario.hpp"
#include "toolsim/simulator.hpp"
#include "toolsim/sweep.hpp"
#include "toolsim/trace.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitInvariant = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw toolsim::ScenarioError(path, 0, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_trace(const std::string& path, const toolsim::RunResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path));
  toolsim::write_trace_csv(out, result.trace);
}

std::string file_safe(std::string name) {
  for (auto& ch : name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '.' || ch == '_')) ch = '_';
  }
  return name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-acquisition and tool-wear compensation simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string trace_path;
  std::vector<std::string> plot_columns;
  std::string plot_dir = ".";
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and print its summary");
  run_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--trace", trace_path, "Write the per-tick CSV trace here");
  run_cmd->add_option("--plot", plot_columns, "Trace column to plot as <column>.svg");
  run_cmd->add_option("--plot-dir", plot_dir, "Directory for plot files");

  std::vector<std::string> vary_specs;
  std::string trace_dir;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run scenario variants in parallel");
  sweep_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  sweep_cmd->add_option("--vary", vary_specs, "key=a,b,c (repeatable; cartesian product)")->required();
  sweep_cmd->add_option("--trace-dir", trace_dir, "Write one CSV trace per variant here");

  auto* print_cmd = app.add_subcommand("print-config", "Print the canonical form of a scenario");
  print_cmd->add_option("scenario", scenario_path, "Scenario file")->required();

  std::size_t random_codes = 10'000;
  std::uint64_t seed = 20240601;
  auto* conf_cmd = app.add_subcommand("conformance", "Run the exhaustive link conformance suite");
  conf_cmd->add_option("--random-codes", random_codes, "Number of seeded random codes");
  conf_cmd->add_option("--seed", seed, "Seed for the random codes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*print_cmd) {
      std::cout << toolsim::print_config(toolsim::load_scenario(read_file(scenario_path)));
      return 0;
    }

    if (*run_cmd) {
      for (const auto& c : plot_columns) {
        if (!toolsim::is_trace_column(c)) {
          std::cerr << fmt::format("error: unknown trace column '{}'\n", c);
          return kExitValidation;
        }
      }
      auto scenario = toolsim::load_scenario(read_file(scenario_path));
      auto result = toolsim::run(scenario);
      std::cout << "scenario " << scenario.name << "\n" << toolsim::format_summary(result.summary);
      if (!trace_path.empty()) write_trace(trace_path, result);
      if (!plot_columns.empty()) {
        std::filesystem::create_directories(plot_dir);
        for (const auto& p : toolsim::emit_plots(result.trace, plot_columns, plot_dir)) {
          std::cout << "wrote " << p.string() << "\n";
        }
      }
      return 0;
    }

    if (*sweep_cmd) {
      std::vector<toolsim::SweepAxis> axes;
      for (const auto& spec : vary_specs) axes.push_back(toolsim::parse_sweep_axis(spec));
      auto runs = toolsim::sweep(read_file(scenario_path), axes);
      if (!trace_dir.empty()) std::filesystem::create_directories(trace_dir);
      std::cout << "name,delivered_samples,dropped_samples,violations,max_gap,final_gap,"
                   "mean_abs_acquisition_error,pulses_emitted\n";
      for (const auto& r : runs) {
        const auto& s = r.result.summary;
        std::cout << fmt::format("{},{},{},{},{:.9g},{:.9g},{:.9g},{}\n", r.name, s.delivered_samples,
                                 s.dropped_samples, s.violations, s.max_gap_um, s.final_gap_um,
                                 s.mean_abs_acquisition_error_v, s.pulses_emitted);
        if (!trace_dir.empty()) {
          write_trace((std::filesystem::path(trace_dir) / (file_safe(r.name) + ".csv")).string(),
                      r.result);
        }
      }
      return 0;
    }

    if (*conf_cmd) {
      bool all = true;
      for (const auto& check : toolsim::run_link_conformance(random_codes, seed)) {
        std::cout << fmt::format("[{}] {}: {}\n", check.passed ? "PASS" : "FAIL", check.name,
                                 check.detail);
        all = all && check.passed;
      }
      return all ? 0 : kExitInvariant;
    }
  } catch (const toolsim::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const toolsim::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
