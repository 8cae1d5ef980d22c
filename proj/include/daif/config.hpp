#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "daif/env.hpp"
#include "daif/genmodel.hpp"
#include "daif/planner.hpp"

namespace daif {

// Flat experiment configuration backing every CLI command. Loaded from a
// JSON file with exactly these keys; command-line overrides (key=value) are
// applied on top.
struct PipelineConfig {
    // environment
    std::string variant = "zero"; // "zero" | "random"
    double obs_noise_std = 0.05;
    std::optional<double> start_position = -0.5; // nullopt = spawn random
    double goal_position = 0.5;
    int max_steps = 200;

    // bootstrap dataset
    int episodes = 200;
    int episode_steps = 100;

    // model
    int state_dim = 4;
    int obs_dim = 1;
    int hidden = 20;

    // training
    double learning_rate = 1e-3;
    int epochs = 500;
    int minibatch_episodes = 1;

    // planning
    int plan_k = 30;
    int plan_depth = 3;
    int plan_rollouts = 100;
    double gamma = 1.0;
    double rho = 0.1;
    double preferred_std = 1.0;
    bool stochastic_policy = false;

    std::uint64_t seed = 1;

    Variant variant_enum() const;

    // Evaluation environment: fixed start per start_position.
    EnvConfig eval_env() const;
    // Bootstrap environment: random spawns, episode_steps-long episodes.
    EnvConfig bootstrap_env() const;
    // Demonstration environment: like eval, but the offline expert gets an
    // ample step budget regardless of the evaluation cap.
    EnvConfig demo_env() const;

    ModelMeta model_meta() const;
    TrainConfig train_config() const;
    PlanConfig plan_config(DiagGaussian preferred) const;
};

// Loads the JSON config (all keys optional), then applies overrides of the
// form "key=value". Unknown keys and unparsable values raise ConfigError.
PipelineConfig load_config(const std::optional<std::filesystem::path>& path,
                           const std::vector<std::string>& overrides);

// Canonical serialization (sorted keys, round-trip exact numbers); the
// config hash is FNV-1a over this string.
std::string canonical_config(const PipelineConfig& cfg);
std::uint64_t config_hash(const PipelineConfig& cfg);

} // namespace daif
