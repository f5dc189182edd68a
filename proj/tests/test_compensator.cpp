#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "toolsim/compensator.hpp"

using namespace toolsim;

namespace {

const ActuatorChain kReferenceChain{1, 60, 40, 1000.0};

CompensatorFsm make_fsm(double frequency, double tick_s, Tick release = 0, Tick engage = 0) {
  return CompensatorFsm{.brake = {.engaged = true,
                                  .engage_delay_ticks = engage,
                                  .release_delay_ticks = release},
                        .generator = PulseGenerator(frequency, tick_s)};
}

}  // namespace

TEST_CASE("displacement_per_pulse") {
  // 1000 / (60 * 40)
  CHECK(displacement_per_pulse(kReferenceChain) == doctest::Approx(0.4166666666666667).epsilon(1e-15));
  CHECK(displacement_per_pulse(ActuatorChain{60, 60, 1, 1000.0}) == 1000.0);

  ActuatorChain doubled = kReferenceChain;
  doubled.worm_ratio *= 2;
  CHECK(displacement_per_pulse(doubled) == doctest::Approx(displacement_per_pulse(kReferenceChain) / 2));

  CHECK(holder_travel(kReferenceChain, 0) == 0.0);
  CHECK(holder_travel(kReferenceChain, 3) == 3.0 * displacement_per_pulse(kReferenceChain));

  CHECK_THROWS_AS((ActuatorChain{0, 60, 40, 1000.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ActuatorChain{1, 1, 40, 1000.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ActuatorChain{1, 60, 0, 1000.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ActuatorChain{1, 60, 40, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("required_frequency") {
  const double delta = displacement_per_pulse(kReferenceChain);
  CHECK(required_frequency(delta, kReferenceChain) == doctest::Approx(1.0));
  // 0.05 / (1000 / 2400) = 0.12
  CHECK(required_frequency(0.05, kReferenceChain) == doctest::Approx(0.12).epsilon(1e-12));
  for (double w : {0.001, 0.05, 0.3, 7.0}) {
    CHECK(required_frequency(w, kReferenceChain) * delta == doctest::Approx(w).epsilon(1e-14));
  }
  CHECK_THROWS_AS(required_frequency(0.0, kReferenceChain), std::invalid_argument);
  CHECK_THROWS_AS(required_frequency(-1.0, kReferenceChain), std::invalid_argument);
}

TEST_CASE("detector_step hysteresis") {
  DetectorConfig cfg{1.0, 2.0, 3.0};
  CHECK(detector_step(1.5, cfg, false));
  CHECK(detector_step(2.5, cfg, true));
  CHECK_FALSE(detector_step(2.5, cfg, false));
  CHECK_FALSE(detector_step(3.5, cfg, true));
  CHECK(detector_step(2.0, cfg, false));
  CHECK_FALSE(detector_step(3.0, cfg, true));

  DetectorConfig amplified{2.0, 2.0, 3.0};
  CHECK(detector_step(1.0, amplified, false));   // 2.0 after gain
  CHECK_FALSE(detector_step(1.6, amplified, true));  // 3.2 after gain

  CHECK_THROWS_AS((DetectorConfig{1.0, 3.0, 3.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DetectorConfig{0.0, 2.0, 3.0}.validate()), std::invalid_argument);

  TransducerModel t{4.0, 1.0, 0.0};
  DetectorConfig band{1.0, 3.8, 3.95};
  CHECK(band.gap_on(t) == doctest::Approx(0.2));
  CHECK(band.gap_off(t) == doctest::Approx(0.05));
}

TEST_CASE("PulseGenerator spacing") {
  CHECK_THROWS_AS(PulseGenerator(0.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(PulseGenerator(2000.0, 0.001), std::invalid_argument);
  CHECK_THROWS_AS(PulseGenerator(1000.0, 0.001), std::invalid_argument);

  PulseGenerator gen(0.2, 0.01);
  CHECK(gen.period_ticks() == doctest::Approx(500.0));
  std::vector<int> fired;
  for (int t = 0; t < 5000; ++t) {
    if (gen.tick()) fired.push_back(t);
  }
  REQUIRE(fired.size() == 10);
  for (std::size_t i = 0; i < fired.size(); ++i) CHECK(fired[i] == static_cast<int>(500 * i));

  // Non-integer period: mean rate still matches and at most one pulse per tick.
  PulseGenerator odd(3.0, 0.01);
  int count = 0;
  for (int t = 0; t < 100'000; ++t) count += odd.tick() ? 1 : 0;
  CHECK(count == doctest::Approx(100'000 * 0.03).epsilon(1e-3));
}

TEST_CASE("compensator_step sequencing") {
  SUBCASE("never active stays locked") {
    auto fsm = make_fsm(0.2, 0.01);
    for (int t = 0; t < 10'000; ++t) {
      auto r = compensator_step(fsm, false);
      fsm = r.fsm;
      REQUIRE_FALSE(r.pulse);
      REQUIRE(fsm.mode == CompensatorMode::LockedIdle);
      REQUIRE(fsm.brake.engaged);
    }
    CHECK(fsm.pulses_emitted == 0);
  }

  SUBCASE("zero delays make RELEASING and ENGAGING single-tick states") {
    auto fsm = make_fsm(0.2, 0.01);
    std::vector<CompensatorMode> modes;
    std::vector<bool> pulses;
    const bool active[] = {false, true, true, true, false, false, false};
    for (bool a : active) {
      auto r = compensator_step(fsm, a);
      fsm = r.fsm;
      modes.push_back(fsm.mode);
      pulses.push_back(r.pulse);
    }
    using M = CompensatorMode;
    CHECK(modes == std::vector<M>{M::LockedIdle, M::Releasing, M::Compensating, M::Compensating,
                                  M::Engaging, M::LockedIdle, M::LockedIdle});
    CHECK(pulses == std::vector<bool>{false, false, true, false, false, false, false});
    CHECK(fsm.pulses_emitted == 1);
  }

  SUBCASE("delays hold the brake transitions and no pulse escapes COMPENSATING") {
    auto fsm = make_fsm(10.0, 0.01, 3, 2);
    int releasing = 0, engaging = 0;
    for (int t = 0; t < 200; ++t) {
      bool a = t >= 5 && t < 100;
      auto r = compensator_step(fsm, a);
      fsm = r.fsm;
      if (fsm.mode == CompensatorMode::Releasing) ++releasing;
      if (fsm.mode == CompensatorMode::Engaging) ++engaging;
      if (r.pulse) REQUIRE(fsm.mode == CompensatorMode::Compensating);
      if (fsm.mode == CompensatorMode::LockedIdle) REQUIRE(fsm.brake.engaged);
      if (fsm.mode == CompensatorMode::Compensating) REQUIRE_FALSE(fsm.brake.engaged);
    }
    CHECK(releasing == 4);  // order tick plus three delay ticks
    CHECK(engaging == 3);
    CHECK(fsm.mode == CompensatorMode::LockedIdle);
    CHECK(fsm.pulses_emitted == 10);  // COMPENSATING over ticks 9..99 at 10 ticks per pulse
  }
}
