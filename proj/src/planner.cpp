#include "daif/planner.hpp"

#include <algorithm>
#include <cmath>

namespace daif {

void PlanConfig::validate(int state_dim) const {
    require(segment_steps >= 1 && depth >= 1, "plan: K and D must be >= 1");
    require(rollouts >= 2, "plan: need at least 2 rollouts to fit Gaussians");
    require(gamma >= 0.0, "plan: gamma must be >= 0");
    require(rho > 0.0, "plan: rho must be > 0");
    require(preferred.dim() == state_dim, "plan: preferred state dimension mismatch");
}

SegmentResult segment_rollout(const GenerativeModel& m, const std::vector<Vec>& states, Action a,
                              int k_steps, Rng& rng) {
    require(states.size() >= 2, "segment_rollout: need at least 2 particles");
    const int n = static_cast<int>(states.size());

    SegmentResult res;
    res.state_samples.reserve(k_steps);
    res.state_dists.reserve(k_steps);
    res.obs_dists.reserve(k_steps);
    res.obs_means.assign(n, Vec());
    for (Vec& row : res.obs_means) row.reserve(k_steps);

    std::vector<Vec> cur = states;
    std::vector<Vec> obs_samples(n);
    for (int k = 0; k < k_steps; ++k) {
        for (int i = 0; i < n; ++i) {
            cur[i] = sample(m.transition_predict(cur[i], a), rng);
            DiagGaussian like = m.likelihood(cur[i]);
            obs_samples[i] = sample(like, rng);
            res.obs_means[i].push_back(like.mean[0]);
        }
        res.state_dists.push_back(fit_from_samples(cur));
        res.obs_dists.push_back(fit_from_samples(obs_samples));
        res.state_samples.push_back(cur);
    }
    res.final_states = std::move(cur);
    return res;
}

std::vector<double> policy_prior(std::span<const double> g_values, double gamma) {
    require(!g_values.empty(), "policy_prior: empty G values");
    for (double v : g_values) require(std::isfinite(v), "policy_prior: non-finite G value");
    std::vector<double> logits(g_values.size());
    for (std::size_t i = 0; i < g_values.size(); ++i) logits[i] = -gamma * g_values[i];
    double peak = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double& v : logits) {
        v = std::exp(v - peak);
        z += v;
    }
    for (double& v : logits) v /= z;
    return logits;
}

std::vector<BranchEvaluation> expected_free_energy(const GenerativeModel& m,
                                                   const std::vector<Vec>& root_states,
                                                   const PlanConfig& cfg, int depth_remaining,
                                                   const Rng& rng) {
    require(depth_remaining >= 1 && depth_remaining <= cfg.depth,
            "expected_free_energy: bad depth");

    std::vector<BranchEvaluation> evals;
    evals.reserve(m.meta().action_count);
    for (int ai = 0; ai < m.meta().action_count; ++ai) {
        const Action a = static_cast<Action>(ai);
        Rng branch_rng = rng.split(ai + 1);
        SegmentResult seg = segment_rollout(m, root_states, a, cfg.segment_steps, branch_rng);

        BranchEvaluation ev;
        ev.action = a;
        for (int k = 0; k < cfg.segment_steps; ++k) {
            ev.step_kl.push_back(kl_divergence(seg.state_dists[k], cfg.preferred));
            ev.step_entropy.push_back(entropy(seg.obs_dists[k]));
            ev.kl_total += ev.step_kl.back();
            ev.entropy_total += ev.step_entropy.back();
        }
        ev.g_value = ev.kl_total + ev.entropy_total / cfg.rho;
        ev.obs_means = std::move(seg.obs_means);

        if (depth_remaining > 1) {
            ev.children = expected_free_energy(m, seg.final_states, cfg, depth_remaining - 1,
                                               branch_rng);
            std::vector<double> child_g;
            child_g.reserve(ev.children.size());
            for (const BranchEvaluation& c : ev.children) child_g.push_back(c.g_value);
            std::vector<double> w = policy_prior(child_g, cfg.gamma);
            for (std::size_t j = 0; j < child_g.size(); ++j) ev.g_value += w[j] * child_g[j];
        }
        evals.push_back(std::move(ev));
    }
    return evals;
}

Action pick_root_action(std::span<const double> g_values, const PlanConfig& cfg, Rng& rng) {
    std::vector<double> probs = policy_prior(g_values, cfg.gamma);
    if (cfg.stochastic) {
        double u = rng.uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return static_cast<Action>(i);
        }
        return static_cast<Action>(probs.size() - 1);
    }
    // argmax; ties resolve to the lowest action index (Left)
    std::size_t best = 0;
    for (std::size_t i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[best]) best = i;
    }
    return static_cast<Action>(best);
}

PlanResult select_policy(const GenerativeModel& m, const std::vector<Vec>& particles,
                         const PlanConfig& cfg, const Rng& rng) {
    cfg.validate(m.meta().state_dim);
    require(static_cast<int>(particles.size()) == cfg.rollouts,
            "select_policy: particle count must match configured rollouts");

    PlanResult res;
    res.roots = expected_free_energy(m, particles, cfg, cfg.depth, rng);
    std::vector<double> g;
    g.reserve(res.roots.size());
    for (const BranchEvaluation& ev : res.roots) g.push_back(ev.g_value);
    res.root_probs = policy_prior(g, cfg.gamma);
    Rng pick_rng = rng.split(0xACED);
    res.selected = pick_root_action(g, cfg, pick_rng);
    return res;
}

} // namespace daif
