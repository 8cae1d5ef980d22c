#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "daif/net.hpp"

namespace daif {

enum class Action : int { Left = 0, Right = 1 };

inline char action_char(Action a) { return a == Action::Left ? 'L' : 'R'; }

// Time-ordered (observation, action) record. observations[t+1] follows
// actions[t], so there is always exactly one more observation than actions.
// id is a stable identity used to derive per-episode random streams.
struct Episode {
    std::vector<double> observations;
    std::vector<Action> actions;
    std::uint64_t id = 0;

    int length() const { return static_cast<int>(observations.size()); }
    void validate() const;
};

struct ModelMeta {
    int state_dim = 4;
    int obs_dim = 1;
    int action_count = 2;
    int hidden = 20;
    std::uint64_t seed = 0;
    std::string variant; // "zero" | "random"
};

// The three-network generative model:
//   transition  (s_prev ++ action one-hot)        -> Gaussian over s
//   posterior   (s_prev ++ action one-hot ++ obs) -> Gaussian over s
//   likelihood  (s)                               -> Gaussian over o
//
// The "null" action (std::nullopt) encodes as an all-zeros one-hot and is
// used only for the very first step of a sequence, where s_prev is the zero
// vector.
class GenerativeModel {
public:
    GenerativeModel() = default;
    explicit GenerativeModel(const ModelMeta& meta);

    DiagGaussian transition_predict(std::span<const double> s_prev,
                                    std::optional<Action> a) const;
    DiagGaussian posterior_infer(std::span<const double> s_prev, std::optional<Action> a,
                                 double obs) const;
    DiagGaussian likelihood(std::span<const double> s) const;

    GaussianNodes transition_on(ad::Graph& g, ad::NodeId s_prev, std::optional<Action> a,
                                NetParams* grads) const;
    GaussianNodes posterior_on(ad::Graph& g, ad::NodeId s_prev, std::optional<Action> a,
                               double obs, NetParams* grads) const;
    GaussianNodes likelihood_on(ad::Graph& g, ad::NodeId s, NetParams* grads) const;

    const ModelMeta& meta() const { return meta_; }

    GaussianHeadNet transition_net;
    GaussianHeadNet posterior_net;
    GaussianHeadNet likelihood_net;

private:
    Vec action_one_hot(std::optional<Action> a) const;

    ModelMeta meta_;
};

// Gradient accumulators for the three networks.
struct ModelGrads {
    NetParams transition;
    NetParams posterior;
    NetParams likelihood;

    static ModelGrads zeros_like(const GenerativeModel& m);
    void zero();
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 1;
    std::uint64_t seed = 0;
    int minibatch_episodes = 1;
};

// Builds the per-episode free-energy loss on the tape:
//   1/T * sum_t [ -log p(o_t | s_t) + KL(q_t || p_t) ]
// where q_t is the posterior, p_t the transition prediction, and s_t a
// reparameterized sample of q_t that feeds the next step, so gradients flow
// through the whole chain. The first step conditions on a zero state and the
// null action.
ad::NodeId free_energy_loss_node(ad::Graph& g, const GenerativeModel& m, ModelGrads* grads,
                                 const Episode& ep, Rng& rng);

// Evaluation-only convenience (no gradient accumulation).
double free_energy_loss(const GenerativeModel& m, const Episode& ep, Rng& rng);

// SGD over the dataset; parameters updated in place. Returns the per-epoch
// mean loss. Throws DivergenceError if the loss or a gradient goes
// non-finite.
std::vector<double> train(GenerativeModel& m, const std::vector<Episode>& dataset,
                          const TrainConfig& cfg);

// Runs the posterior chain over an episode and returns the final state
// estimate: the last posterior mean by default, or a sample of it when
// sample_final is set.
Vec encode_sequence(const GenerativeModel& m, const Episode& ep, Rng& rng,
                    bool sample_final = false);

void save_checkpoint(const GenerativeModel& m, const std::filesystem::path& path);
GenerativeModel load_checkpoint(const std::filesystem::path& path);

} // namespace daif
