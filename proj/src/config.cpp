#include "daif/config.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace daif {

namespace {

using nlohmann::json;

json to_json(const PipelineConfig& c) {
    json j;
    j["variant"] = c.variant;
    j["obs_noise_std"] = c.obs_noise_std;
    if (c.start_position.has_value()) {
        j["start_position"] = *c.start_position;
    } else {
        j["start_position"] = "random";
    }
    j["goal_position"] = c.goal_position;
    j["max_steps"] = c.max_steps;
    j["episodes"] = c.episodes;
    j["episode_steps"] = c.episode_steps;
    j["state_dim"] = c.state_dim;
    j["obs_dim"] = c.obs_dim;
    j["hidden"] = c.hidden;
    j["learning_rate"] = c.learning_rate;
    j["epochs"] = c.epochs;
    j["minibatch_episodes"] = c.minibatch_episodes;
    j["plan_k"] = c.plan_k;
    j["plan_depth"] = c.plan_depth;
    j["plan_rollouts"] = c.plan_rollouts;
    j["gamma"] = c.gamma;
    j["rho"] = c.rho;
    j["preferred_std"] = c.preferred_std;
    j["stochastic_policy"] = c.stochastic_policy;
    j["seed"] = c.seed;
    return j;
}

void apply_key(PipelineConfig& c, const std::string& key, const json& v) {
    try {
        if (key == "variant") {
            c.variant = v.get<std::string>();
        } else if (key == "obs_noise_std") {
            c.obs_noise_std = v.get<double>();
        } else if (key == "start_position") {
            if (v.is_string()) {
                if (v.get<std::string>() != "random") {
                    throw ConfigError("start_position: expected a number or \"random\"");
                }
                c.start_position.reset();
            } else {
                c.start_position = v.get<double>();
            }
        } else if (key == "goal_position") {
            c.goal_position = v.get<double>();
        } else if (key == "max_steps") {
            c.max_steps = v.get<int>();
        } else if (key == "episodes") {
            c.episodes = v.get<int>();
        } else if (key == "episode_steps") {
            c.episode_steps = v.get<int>();
        } else if (key == "state_dim") {
            c.state_dim = v.get<int>();
        } else if (key == "obs_dim") {
            c.obs_dim = v.get<int>();
        } else if (key == "hidden") {
            c.hidden = v.get<int>();
        } else if (key == "learning_rate") {
            c.learning_rate = v.get<double>();
        } else if (key == "epochs") {
            c.epochs = v.get<int>();
        } else if (key == "minibatch_episodes") {
            c.minibatch_episodes = v.get<int>();
        } else if (key == "plan_k") {
            c.plan_k = v.get<int>();
        } else if (key == "plan_depth") {
            c.plan_depth = v.get<int>();
        } else if (key == "plan_rollouts") {
            c.plan_rollouts = v.get<int>();
        } else if (key == "gamma") {
            c.gamma = v.get<double>();
        } else if (key == "rho") {
            c.rho = v.get<double>();
        } else if (key == "preferred_std") {
            c.preferred_std = v.get<double>();
        } else if (key == "stochastic_policy") {
            c.stochastic_policy = v.get<bool>();
        } else if (key == "seed") {
            c.seed = v.get<std::uint64_t>();
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    } catch (const json::exception& e) {
        throw ConfigError("bad value for config key '" + key + "': " + e.what());
    }
}

} // namespace

Variant PipelineConfig::variant_enum() const {
    if (variant == "zero") return Variant::ZeroVelocity;
    if (variant == "random") return Variant::RandomVelocity;
    throw ConfigError("variant must be \"zero\" or \"random\", got \"" + variant + "\"");
}

EnvConfig PipelineConfig::eval_env() const {
    return EnvConfig{variant_enum(), obs_noise_std, start_position, goal_position, max_steps};
}

EnvConfig PipelineConfig::bootstrap_env() const {
    return EnvConfig{variant_enum(), obs_noise_std, std::nullopt, goal_position, episode_steps};
}

EnvConfig PipelineConfig::demo_env() const {
    EnvConfig cfg = eval_env();
    cfg.max_steps = std::max(cfg.max_steps, 1000);
    return cfg;
}

ModelMeta PipelineConfig::model_meta() const {
    return ModelMeta{state_dim, obs_dim, 2, hidden, seed, variant};
}

TrainConfig PipelineConfig::train_config() const {
    return TrainConfig{learning_rate, epochs, seed, minibatch_episodes};
}

PlanConfig PipelineConfig::plan_config(DiagGaussian preferred) const {
    PlanConfig pc;
    pc.segment_steps = plan_k;
    pc.depth = plan_depth;
    pc.rollouts = plan_rollouts;
    pc.gamma = gamma;
    pc.rho = rho;
    pc.preferred = std::move(preferred);
    pc.stochastic = stochastic_policy;
    return pc;
}

PipelineConfig load_config(const std::optional<std::filesystem::path>& path,
                           const std::vector<std::string>& overrides) {
    PipelineConfig cfg;
    if (path.has_value()) {
        std::ifstream in(*path);
        if (!in) throw IoError("cannot read config: " + path->string());
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError("malformed config " + path->string() + ": " + e.what());
        }
        if (!j.is_object()) throw ConfigError("config root must be a JSON object");
        for (const auto& [key, value] : j.items()) apply_key(cfg, key, value);
    }
    for (const std::string& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override must look like key=value: " + ov);
        }
        std::string key = ov.substr(0, eq);
        std::string raw = ov.substr(eq + 1);
        json v = json::parse(raw, nullptr, false);
        if (v.is_discarded()) v = raw; // unquoted strings ("random", "zero")
        apply_key(cfg, key, v);
    }
    return cfg;
}

std::string canonical_config(const PipelineConfig& cfg) {
    return to_json(cfg).dump(); // nlohmann objects serialize with sorted keys
}

std::uint64_t config_hash(const PipelineConfig& cfg) {
    std::string s = canonical_config(cfg);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace daif
