#include "toolsim/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace toolsim {

namespace {

constexpr double kRailVolts = 5.0;

// Uniform draw in [-1, 1] from the top 53 bits; stable across standard
// library implementations, unlike std::uniform_real_distribution.
double symmetric_unit(std::mt19937_64& rng) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

void WearModel::validate() const {
  if (!std::isfinite(noise_amplitude_um) || noise_amplitude_um < 0.0) {
    throw std::invalid_argument("noise amplitude must be >= 0");
  }
  if (mode == WearMode::ConstantRate) {
    if (!std::isfinite(rate_um_per_s) || rate_um_per_s < 0.0) {
      throw std::invalid_argument("wear rate must be >= 0");
    }
    return;
  }
  if (breakpoints.empty()) {
    throw std::invalid_argument("piecewise wear needs at least one breakpoint");
  }
  if (breakpoints.front().time_s != 0.0) {
    throw std::invalid_argument("first wear breakpoint must be at t = 0");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const auto& bp = breakpoints[i];
    if (!std::isfinite(bp.rate_um_per_s) || bp.rate_um_per_s < 0.0) {
      throw std::invalid_argument("wear rate must be >= 0 at breakpoint " + std::to_string(i));
    }
    if (i > 0 && !(bp.time_s > breakpoints[i - 1].time_s)) {
      throw std::invalid_argument("wear breakpoints must be strictly increasing in time");
    }
  }
}

double WearModel::rate_at(double t_s) const {
  if (mode == WearMode::ConstantRate) return rate_um_per_s;
  double rate = breakpoints.front().rate_um_per_s;
  for (const auto& bp : breakpoints) {
    if (bp.time_s > t_s) break;
    rate = bp.rate_um_per_s;
  }
  return rate;
}

double WearModel::integrate(double t0_s, double t1_s) const {
  if (mode == WearMode::ConstantRate) return rate_um_per_s * (t1_s - t0_s);
  double total = 0.0;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    double seg_begin = breakpoints[i].time_s;
    double seg_end = i + 1 < breakpoints.size() ? breakpoints[i + 1].time_s
                                                : std::max(t1_s, seg_begin);
    double lo = std::max(t0_s, seg_begin);
    double hi = std::min(t1_s, seg_end);
    if (hi > lo) total += breakpoints[i].rate_um_per_s * (hi - lo);
  }
  return total;
}

void TransducerModel::validate() const {
  if (!(v_contact > 0.0 && v_contact <= kRailVolts)) {
    throw std::invalid_argument("transducer contact voltage must be in (0, 5]");
  }
  if (!(sensitivity_v_per_um > 0.0) || !std::isfinite(sensitivity_v_per_um)) {
    throw std::invalid_argument("transducer sensitivity must be > 0");
  }
  if (!(v_floor >= 0.0)) throw std::invalid_argument("transducer floor must be >= 0");
  if (!(v_floor < v_contact)) {
    throw std::invalid_argument("transducer floor must be below contact voltage");
  }
}

double TransducerModel::gap_for_voltage(double v) const {
  return (v_contact - v) / sensitivity_v_per_um;
}

double transducer_voltage(double gap_um, const TransducerModel& model) {
  double v = model.v_contact - model.sensitivity_v_per_um * gap_um;
  return std::clamp(v, model.v_floor, kRailVolts);
}

PlantState advance_wear(PlantState state, const WearModel& model, double dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  state.wear_depth_um += model.integrate(state.t_s, state.t_s + dt_s);
  state.t_s += dt_s;
  state.gap_um = contact_gap(state.wear_depth_um, state.holder_pos_um);
  return state;
}

PlantState apply_holder_motion(PlantState state, double delta_um) {
  if (!(delta_um >= 0.0)) throw std::invalid_argument("holder never retracts (delta < 0)");
  state.holder_pos_um += delta_um;
  state.gap_um = contact_gap(state.wear_depth_um, state.holder_pos_um);
  return state;
}

Plant::Plant(WearModel wear, TransducerModel transducer)
    : wear_(std::move(wear)), transducer_(transducer), rng_(wear_.rng_seed) {
  wear_.validate();
  transducer_.validate();
  sense();
}

void Plant::step(double dt_s, double holder_delta_um) {
  state_ = advance_wear(state_, wear_, dt_s);
  if (holder_delta_um != 0.0) state_ = apply_holder_motion(state_, holder_delta_um);
  sense();
}

void Plant::sense() {
  double measured = state_.gap_um;
  if (wear_.noise_amplitude_um > 0.0) {
    measured = std::max(0.0, measured + wear_.noise_amplitude_um * symmetric_unit(rng_));
  }
  state_.transducer_v = transducer_voltage(measured, transducer_);
}

}  // namespace toolsim
