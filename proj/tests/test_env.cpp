#include <doctest.h>

#include <cmath>

#include "daif/env.hpp"

using namespace daif;

namespace {

EnvConfig quiet_cfg() {
    EnvConfig cfg;
    cfg.variant = Variant::ZeroVelocity;
    cfg.obs_noise_std = 0.0;
    cfg.start_position = -0.5;
    return cfg;
}

} // namespace

TEST_CASE("reset: fixed start with zero velocity and no noise observes exactly -0.5") {
    MountainCar env(quiet_cfg());
    Rng rng(1);
    CHECK(env.reset(rng) == -0.5);
    CHECK(env.true_state().position == -0.5);
    CHECK(env.true_state().velocity == 0.0);
}

TEST_CASE("reset: seeded random-velocity resets are reproducible") {
    EnvConfig cfg;
    cfg.variant = Variant::RandomVelocity;
    cfg.start_position.reset();
    MountainCar a(cfg), b(cfg);
    Rng r1(7), r2(7);
    CHECK(a.reset(r1) == b.reset(r2));
    CHECK(a.true_state().position == b.true_state().position);
    CHECK(a.true_state().velocity == b.true_state().velocity);
}

TEST_CASE("reset: random-velocity spawn statistics") {
    EnvConfig cfg;
    cfg.variant = Variant::RandomVelocity;
    cfg.start_position.reset();
    MountainCar env(cfg);
    Rng rng(11);
    double vsum = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        env.reset(rng);
        CarState s = env.true_state();
        CHECK(s.velocity >= -MountainCar::kMaxSpeed);
        CHECK(s.velocity <= MountainCar::kMaxSpeed);
        CHECK(s.position >= -1.1);
        CHECK(s.position <= 0.4);
        vsum += s.velocity;
    }
    CHECK(std::abs(vsum / n) < 0.002);
}

TEST_CASE("step: dynamics match the hand-evaluated update") {
    MountainCar env(quiet_cfg());
    Rng rng(2);
    env.reset(rng);
    env.step(Action::Right, rng);
    // v' = 0.001 - 0.0025 cos(-1.5); p' = -0.5 + v'
    double v_expect = 0.001 + std::cos(3.0 * -0.5) * -0.0025;
    CHECK(env.true_state().velocity == doctest::Approx(v_expect).epsilon(1e-15));
    CHECK(env.true_state().velocity == doctest::Approx(0.000823157).epsilon(1e-5));
    CHECK(env.true_state().position == doctest::Approx(-0.5 + v_expect).epsilon(1e-15));
    CHECK(env.true_state().position == doctest::Approx(-0.499176843).epsilon(1e-6));

    MountainCar env2(quiet_cfg());
    env2.reset(rng);
    env2.step(Action::Left, rng);
    CHECK(env2.true_state().velocity == doctest::Approx(-0.001176843).epsilon(1e-5));
}

TEST_CASE("step: the left wall zeroes incoming negative velocity") {
    // seed 3 draws initial velocity ~ -0.058 at start -1.15, which carries
    // the car into the wall on the first step
    EnvConfig cfg;
    cfg.variant = Variant::RandomVelocity;
    cfg.obs_noise_std = 0.0;
    cfg.start_position = -1.15;
    MountainCar env(cfg);
    Rng rng(3);
    env.reset(rng);
    REQUIRE(env.true_state().velocity < -0.04);
    env.step(Action::Left, rng);
    CHECK(env.true_state().position == -1.2);
    CHECK(env.true_state().velocity == 0.0);
}

TEST_CASE("step after the episode is done is a contract error") {
    EnvConfig cfg = quiet_cfg();
    cfg.max_steps = 2;
    MountainCar env(cfg);
    Rng rng(4);
    CHECK_THROWS_AS(env.step(Action::Left, rng), ContractError); // before reset
    env.reset(rng);
    env.step(Action::Left, rng);
    auto res = env.step(Action::Left, rng);
    CHECK(res.done);
    CHECK_THROWS_AS(env.step(Action::Left, rng), ContractError);
}

TEST_CASE("constant right throttle from (-0.5, 0) never reaches the goal in 200 steps") {
    MountainCar env(quiet_cfg());
    Rng rng(5);
    env.reset(rng);
    double peak = -2.0;
    while (!env.done()) {
        env.step(Action::Right, rng);
        peak = std::max(peak, env.true_state().position);
    }
    CHECK(env.steps() == 200);
    CHECK(peak < 0.5);
}

TEST_CASE("observation noise is zero-mean Gaussian with the configured std") {
    EnvConfig cfg = quiet_cfg();
    cfg.obs_noise_std = 0.05;
    cfg.max_steps = 10000;
    MountainCar env(cfg);
    Rng rng(6);
    env.reset(rng);
    double sum = 0.0, sq = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        Action a = i % 2 == 0 ? Action::Left : Action::Right;
        double obs = env.step(a, rng).obs;
        double err = obs - env.true_state().position;
        sum += err;
        sq += err * err;
    }
    double mean = sum / n;
    double std = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean) < 0.002); // ~4 standard errors
    CHECK(std == doctest::Approx(0.05).epsilon(0.05));
}

TEST_CASE("noise-free observation equals the true position along a trajectory") {
    MountainCar env(quiet_cfg());
    Rng rng(7);
    env.reset(rng);
    for (int i = 0; i < 50; ++i) {
        double obs = env.step(Action::Right, rng).obs;
        CHECK(obs == env.true_state().position);
    }
}
