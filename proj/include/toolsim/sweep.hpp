#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "toolsim/scenario.hpp"
#include "toolsim/simulator.hpp"

namespace toolsim {

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// Parses `key=a,b,c`. Throws std::invalid_argument on malformed input.
SweepAxis parse_sweep_axis(std::string_view spec);

struct SweepRun {
  std::string name;  // scenario name with the varied settings appended
  std::vector<ScenarioOverride> overrides;
  RunResult result;
};

/// Cartesian product over the axes. Every variant is validated before any
/// runs; runs are independent and execute in parallel. Results come back
/// in enumeration order (last axis varies fastest).
std::vector<SweepRun> sweep(std::string_view scenario_text, const std::vector<SweepAxis>& axes);

}  // namespace toolsim
