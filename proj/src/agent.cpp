#include "daif/agent.hpp"

namespace daif {

std::vector<Episode> collect_random(const EnvConfig& env_cfg, int episodes, Rng& rng) {
    require(episodes >= 1, "collect_random: episodes must be >= 1");
    std::vector<Episode> out;
    out.reserve(episodes);
    for (int e = 0; e < episodes; ++e) {
        MountainCar env(env_cfg);
        Episode ep;
        ep.id = static_cast<std::uint64_t>(e);
        ep.observations.push_back(env.reset(rng));
        while (!env.done()) {
            Action a = rng.uniform_int(2) == 0 ? Action::Left : Action::Right;
            auto [obs, done] = env.step(a, rng);
            ep.actions.push_back(a);
            ep.observations.push_back(obs);
        }
        out.push_back(std::move(ep));
    }
    return out;
}

Episode expert_demonstration(const EnvConfig& env_cfg, Rng& rng) {
    MountainCar env(env_cfg);
    Episode ep;
    ep.observations.push_back(env.reset(rng));

    // Energy pumping: throttle along the velocity sign (Left from rest), so
    // each swing feeds the next until the car clears the hill. A single
    // left swing peaks near position 0.27 with these dynamics, short of the
    // 0.5 goal, so the swings must repeat.
    while (!env.done()) {
        Action a = env.true_state().velocity <= 0.0 ? Action::Left : Action::Right;
        auto [obs, done] = env.step(a, rng);
        ep.actions.push_back(a);
        ep.observations.push_back(obs);
    }
    if (env.true_state().position < env_cfg.goal_position) {
        throw ContractError("expert_demonstration: scripted driver did not reach the goal");
    }
    return ep;
}

std::vector<Vec> init_particles(const GenerativeModel& m, double obs0, int n, Rng& rng) {
    Vec zero(m.meta().state_dim, 0.0);
    DiagGaussian q = m.posterior_infer(zero, std::nullopt, obs0);
    std::vector<Vec> particles;
    particles.reserve(n);
    for (int i = 0; i < n; ++i) particles.push_back(sample(q, rng));
    return particles;
}

std::vector<Vec> track_posterior(const GenerativeModel& m, const std::vector<Vec>& particles,
                                 std::optional<Action> a, double obs, Rng& rng) {
    std::vector<Vec> out;
    out.reserve(particles.size());
    for (const Vec& p : particles) {
        out.push_back(sample(m.posterior_infer(p, a, obs), rng));
    }
    return out;
}

RunRecord run_active_inference(const GenerativeModel& m, const EnvConfig& env_cfg,
                               const PlanConfig& plan_cfg, std::uint64_t seed) {
    plan_cfg.validate(m.meta().state_dim);

    Rng root(seed);
    Rng env_rng = root.split(1);
    Rng plan_rng = root.split(2);
    Rng belief_rng = root.split(3);

    RunRecord rec;
    rec.seed = seed;

    MountainCar env(env_cfg);
    double obs = env.reset(env_rng);
    std::vector<Vec> particles = init_particles(m, obs, plan_cfg.rollouts, belief_rng);

    Action committed = Action::Left;
    int since_replan = plan_cfg.segment_steps; // forces a plan at t = 0
    int t = 0;
    while (!env.done()) {
        bool replanned = false;
        if (since_replan >= plan_cfg.segment_steps) {
            PlanResult plan =
                select_policy(m, particles, plan_cfg, plan_rng.split(rec.replans.size()));
            committed = plan.selected;
            ReplanEvent event;
            event.t = t;
            event.chosen = plan.selected;
            for (const BranchEvaluation& ev : plan.roots) event.root_g.push_back(ev.g_value);
            event.root_probs = plan.root_probs;
            event.tree = std::move(plan.roots);
            rec.replans.push_back(std::move(event));
            since_replan = 0;
            replanned = true;
        }

        CarState s = env.true_state();
        rec.steps.push_back(
            {t, s.position, s.velocity, obs, static_cast<int>(committed), replanned});

        obs = env.step(committed, env_rng).obs;
        particles = track_posterior(m, particles, committed, obs, belief_rng);
        ++since_replan;
        ++t;
    }

    CarState s = env.true_state();
    rec.steps.push_back({t, s.position, s.velocity, obs, -1, false});
    rec.steps_taken = env.steps();
    rec.goal_reached = s.position >= env_cfg.goal_position;
    return rec;
}

} // namespace daif
