#pragma once

#include <optional>

#include "daif/genmodel.hpp"
#include "daif/rng.hpp"

namespace daif {

enum class Variant { ZeroVelocity, RandomVelocity };

struct CarState {
    double position = 0.0;
    double velocity = 0.0;
};

struct EnvConfig {
    Variant variant = Variant::ZeroVelocity;
    double obs_noise_std = 0.05;
    // Fixed start position, or nullopt to spawn uniformly in [-1.1, 0.4].
    std::optional<double> start_position;
    double goal_position = 0.5;
    int max_steps = 200;
};

// 1-D mountain car with two throttle actions and a noisy position sensor.
// Classic discrete dynamics: the velocity update adds the throttle force and
// a cos(3p) gravity term, then position integrates the new velocity; both
// are clamped to the track limits. The agent never observes the velocity.
class MountainCar {
public:
    static constexpr double kMinPosition = -1.2;
    static constexpr double kMaxPosition = 0.6;
    static constexpr double kMaxSpeed = 0.07;
    static constexpr double kForce = 0.001;
    static constexpr double kGravity = 0.0025;

    explicit MountainCar(const EnvConfig& cfg) : cfg_(cfg) {}

    // Initializes state per config and returns the first noisy observation.
    double reset(Rng& rng);

    struct StepResult {
        double obs = 0.0;
        bool done = false;
    };

    StepResult step(Action a, Rng& rng);

    // Exact hidden state. For tests and the scripted demonstrator only; the
    // learning agent never reads it.
    CarState true_state() const;

    bool done() const { return done_; }
    int steps() const { return steps_; }
    const EnvConfig& config() const { return cfg_; }

private:
    double observe(Rng& rng) const;

    EnvConfig cfg_;
    CarState state_;
    bool started_ = false;
    bool done_ = false;
    int steps_ = 0;
};

} // namespace daif
