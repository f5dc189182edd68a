#include "toolsim/sweep.hpp"

#include <future>
#include <stdexcept>

#include <fmt/format.h>

namespace toolsim {

SweepAxis parse_sweep_axis(std::string_view spec) {
  auto eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == spec.size()) {
    throw std::invalid_argument(fmt::format("expected key=a,b,c, got '{}'", spec));
  }
  SweepAxis axis{std::string(spec.substr(0, eq)), {}};
  std::string_view rest = spec.substr(eq + 1);
  while (true) {
    auto comma = rest.find(',');
    auto value = rest.substr(0, comma);
    if (value.empty()) throw std::invalid_argument(fmt::format("empty value in '{}'", spec));
    axis.values.emplace_back(value);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return axis;
}

std::vector<SweepRun> sweep(std::string_view scenario_text, const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<ScenarioOverride>> variants{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<ScenarioOverride>> next;
    for (const auto& v : variants) {
      for (const auto& value : axis.values) {
        auto extended = v;
        extended.emplace_back(axis.key, value);
        next.push_back(std::move(extended));
      }
    }
    variants = std::move(next);
  }

  std::vector<Scenario> scenarios;
  std::vector<SweepRun> runs;
  for (auto& overrides : variants) {
    Scenario sc = load_scenario(scenario_text, overrides);
    std::string name = sc.name;
    for (const auto& [k, v] : overrides) name += fmt::format("[{}={}]", k, v);
    sc.name = name;
    scenarios.push_back(std::move(sc));
    runs.push_back({std::move(name), std::move(overrides), {}});
  }

  std::vector<std::future<RunResult>> futures;
  futures.reserve(scenarios.size());
  for (const auto& sc : scenarios) {
    futures.push_back(std::async(std::launch::async, [&sc] { return run(sc); }));
  }
  for (std::size_t i = 0; i < futures.size(); ++i) runs[i].result = futures[i].get();
  return runs;
}

}  // namespace toolsim
