#include "daif/env.hpp"

#include <algorithm>
#include <cmath>

namespace daif {

double MountainCar::observe(Rng& rng) const {
    return state_.position + cfg_.obs_noise_std * rng.normal();
}

double MountainCar::reset(Rng& rng) {
    require(cfg_.obs_noise_std >= 0.0, "env: obs_noise_std must be >= 0");
    state_.position = cfg_.start_position.has_value() ? *cfg_.start_position
                                                      : rng.uniform(-1.1, 0.4);
    state_.velocity =
        cfg_.variant == Variant::RandomVelocity ? rng.uniform(-kMaxSpeed, kMaxSpeed) : 0.0;
    started_ = true;
    done_ = false;
    steps_ = 0;
    return observe(rng);
}

MountainCar::StepResult MountainCar::step(Action a, Rng& rng) {
    require(started_, "env: step before reset");
    require(!done_, "env: step after episode finished");

    double force = a == Action::Right ? kForce : -kForce;
    double v = state_.velocity + force + std::cos(3.0 * state_.position) * (-kGravity);
    v = std::clamp(v, -kMaxSpeed, kMaxSpeed);
    double p = state_.position + v;
    if (p <= kMinPosition) {
        p = kMinPosition;
        if (v < 0.0) v = 0.0;
    }
    p = std::min(p, kMaxPosition);
    state_.position = p;
    state_.velocity = v;

    ++steps_;
    done_ = p >= cfg_.goal_position || steps_ >= cfg_.max_steps;
    return StepResult{observe(rng), done_};
}

CarState MountainCar::true_state() const {
    require(started_, "env: state before reset");
    return state_;
}

} // namespace daif
