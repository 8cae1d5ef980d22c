#pragma once

#include <cstdint>
#include <vector>

#include "daif/env.hpp"
#include "daif/planner.hpp"

namespace daif {

struct ReplanEvent {
    int t = 0;
    Action chosen = Action::Left;
    std::vector<double> root_g;
    std::vector<double> root_probs;
    std::vector<BranchEvaluation> tree;
};

struct StepRecord {
    int t = 0;
    double true_position = 0.0;
    double true_velocity = 0.0;
    double obs = 0.0;
    int action = -1; // index into Action, -1 on the terminal row
    bool replan = false;
};

struct RunRecord {
    std::vector<StepRecord> steps; // steps_taken + 1 rows
    std::vector<ReplanEvent> replans;
    bool goal_reached = false;
    int steps_taken = 0;
    std::uint64_t seed = 0;
};

// Uniform-random policy episodes for bootstrapping the model. Episode length
// is bounded by env_cfg.max_steps (episodes end early at the goal).
std::vector<Episode> collect_random(const EnvConfig& env_cfg, int episodes, Rng& rng);

// Scripted stand-in for manually driving the car up: throttle left until the
// leftward swing has turned (velocity back to >= 0), then throttle right
// until the goal. Reads the true velocity, which is the same privilege a
// human driver watching the car has. Throws if the goal is not reached.
Episode expert_demonstration(const EnvConfig& env_cfg, Rng& rng);

// N posterior samples conditioned on the first observation (zero previous
// state, null action): the initial belief particles of a fresh run.
std::vector<Vec> init_particles(const GenerativeModel& m, double obs0, int n, Rng& rng);

// Advances every belief particle through the posterior after an environment
// step with action a produced observation obs.
std::vector<Vec> track_posterior(const GenerativeModel& m, const std::vector<Vec>& particles,
                                 std::optional<Action> a, double obs, Rng& rng);

// Closed active-inference loop: replan every K steps, commit the chosen
// action in between, track the posterior belief throughout.
RunRecord run_active_inference(const GenerativeModel& m, const EnvConfig& env_cfg,
                               const PlanConfig& plan_cfg, std::uint64_t seed);

} // namespace daif
