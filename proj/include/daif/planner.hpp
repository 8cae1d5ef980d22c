#pragma once

#include <span>
#include <vector>

#include "daif/gaussian.hpp"
#include "daif/genmodel.hpp"

namespace daif {

struct PlanConfig {
    int segment_steps = 30; // env steps per tree segment (K)
    int depth = 3;          // tree depth (D)
    int rollouts = 100;     // particles per branch (N)
    double gamma = 1.0;     // policy-softmax precision
    double rho = 0.1;       // KL vs entropy trade-off; entropy weighted by 1/rho
    DiagGaussian preferred; // preferred state distribution
    bool stochastic = false; // sample the root action instead of argmax

    void validate(int state_dim) const;
};

// One tree node: the evaluation of committing to `action` for a K-step
// segment, with children covering the follow-up segments. g_value satisfies
//   g = kl_total + (1/rho) * entropy_total
//     + sum_child softmax(-gamma * g_child) * g_child
struct BranchEvaluation {
    Action action = Action::Left;
    std::vector<double> step_kl;      // K per-step KL(fitted state || preferred)
    std::vector<double> step_entropy; // K per-step entropies of fitted observations
    double kl_total = 0.0;
    double entropy_total = 0.0;
    double g_value = 0.0;
    std::vector<Vec> obs_means; // N rows of K predicted-observation means (logging)
    std::vector<BranchEvaluation> children; // empty at the deepest level
};

struct SegmentResult {
    std::vector<std::vector<Vec>> state_samples; // K steps of N state samples
    std::vector<DiagGaussian> state_dists;       // K fitted state Gaussians
    std::vector<DiagGaussian> obs_dists;         // K fitted observation Gaussians
    std::vector<Vec> obs_means;                  // N rows of K likelihood means
    std::vector<Vec> final_states;               // the N particles after step K
};

// Propagates N particles K steps under a fixed action: each step samples the
// transition per particle, samples an observation from the likelihood, and
// moment-matches Gaussians across the particle set. Draw order per step is
// particle-major: state sample then observation sample.
SegmentResult segment_rollout(const GenerativeModel& m, const std::vector<Vec>& states, Action a,
                              int k_steps, Rng& rng);

// softmax(-gamma * g); uniform at gamma = 0.
std::vector<double> policy_prior(std::span<const double> g_values, double gamma);

// Recursive Monte-Carlo expected free energy. Returns one evaluation per
// action. Child branches continue from the parent segment's final particles
// and use random streams derived from (parent stream, action index), so the
// whole tree is reproducible and branches could evaluate in parallel.
std::vector<BranchEvaluation> expected_free_energy(const GenerativeModel& m,
                                                   const std::vector<Vec>& root_states,
                                                   const PlanConfig& cfg, int depth_remaining,
                                                   const Rng& rng);

struct PlanResult {
    std::vector<BranchEvaluation> roots;
    std::vector<double> root_probs;
    Action selected = Action::Left;
};

// Full-depth evaluation from the current belief particles plus root action
// choice (argmax by default, ties to Left; categorical sample in stochastic
// mode).
PlanResult select_policy(const GenerativeModel& m, const std::vector<Vec>& particles,
                         const PlanConfig& cfg, const Rng& rng);

// Root-action choice given per-action G values; exposed for tests.
Action pick_root_action(std::span<const double> g_values, const PlanConfig& cfg, Rng& rng);

} // namespace daif
