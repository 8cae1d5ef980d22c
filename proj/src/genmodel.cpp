#include "daif/genmodel.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace daif {

void Episode::validate() const {
    require(!observations.empty(), "episode: needs at least one observation");
    require(observations.size() == actions.size() + 1,
            "episode: expected exactly one more observation than actions");
}

GenerativeModel::GenerativeModel(const ModelMeta& meta) : meta_(meta) {
    Rng rng(meta.seed);
    Rng tr = rng.split(1), po = rng.split(2), li = rng.split(3);
    const int sd = meta.state_dim, ac = meta.action_count, od = meta.obs_dim;
    transition_net = GaussianHeadNet(sd + ac, meta.hidden, sd, tr);
    posterior_net = GaussianHeadNet(sd + ac + od, meta.hidden, sd, po);
    likelihood_net = GaussianHeadNet(sd, meta.hidden, od, li);
}

Vec GenerativeModel::action_one_hot(std::optional<Action> a) const {
    Vec v(meta_.action_count, 0.0);
    if (a.has_value()) v[static_cast<int>(*a)] = 1.0;
    return v;
}

DiagGaussian GenerativeModel::transition_predict(std::span<const double> s_prev,
                                                 std::optional<Action> a) const {
    require(static_cast<int>(s_prev.size()) == meta_.state_dim,
            "transition_predict: state dimension mismatch");
    Vec in(s_prev.begin(), s_prev.end());
    Vec oh = action_one_hot(a);
    in.insert(in.end(), oh.begin(), oh.end());
    return transition_net.forward(in);
}

DiagGaussian GenerativeModel::posterior_infer(std::span<const double> s_prev,
                                              std::optional<Action> a, double obs) const {
    require(static_cast<int>(s_prev.size()) == meta_.state_dim,
            "posterior_infer: state dimension mismatch");
    Vec in(s_prev.begin(), s_prev.end());
    Vec oh = action_one_hot(a);
    in.insert(in.end(), oh.begin(), oh.end());
    in.push_back(obs);
    return posterior_net.forward(in);
}

DiagGaussian GenerativeModel::likelihood(std::span<const double> s) const {
    require(static_cast<int>(s.size()) == meta_.state_dim, "likelihood: state dimension mismatch");
    return likelihood_net.forward(s);
}

GaussianNodes GenerativeModel::transition_on(ad::Graph& g, ad::NodeId s_prev,
                                             std::optional<Action> a, NetParams* grads) const {
    ad::NodeId oh = g.input(action_one_hot(a));
    return transition_net.forward_on(g, g.concat(s_prev, oh), grads);
}

GaussianNodes GenerativeModel::posterior_on(ad::Graph& g, ad::NodeId s_prev,
                                            std::optional<Action> a, double obs,
                                            NetParams* grads) const {
    ad::NodeId oh = g.input(action_one_hot(a));
    ad::NodeId ob = g.input_scalar(obs);
    return posterior_net.forward_on(g, g.concat(s_prev, oh, ob), grads);
}

GaussianNodes GenerativeModel::likelihood_on(ad::Graph& g, ad::NodeId s, NetParams* grads) const {
    return likelihood_net.forward_on(g, s, grads);
}

ModelGrads ModelGrads::zeros_like(const GenerativeModel& m) {
    return ModelGrads{NetParams::zeros_like(m.transition_net.params),
                      NetParams::zeros_like(m.posterior_net.params),
                      NetParams::zeros_like(m.likelihood_net.params)};
}

void ModelGrads::zero() {
    transition.zero();
    posterior.zero();
    likelihood.zero();
}

ad::NodeId free_energy_loss_node(ad::Graph& g, const GenerativeModel& m, ModelGrads* grads,
                                 const Episode& ep, Rng& rng) {
    ep.validate();
    NetParams* gt = grads != nullptr ? &grads->transition : nullptr;
    NetParams* gp = grads != nullptr ? &grads->posterior : nullptr;
    NetParams* gl = grads != nullptr ? &grads->likelihood : nullptr;

    const int steps = ep.length();
    ad::NodeId s_prev = g.input(Vec(m.meta().state_dim, 0.0));
    std::optional<Action> a_prev;
    ad::NodeId total = -1;
    for (int t = 0; t < steps; ++t) {
        const double obs = ep.observations[t];
        GaussianNodes q = m.posterior_on(g, s_prev, a_prev, obs, gp);
        GaussianNodes p = m.transition_on(g, s_prev, a_prev, gt);
        ad::NodeId s = reparam_sample_node(g, q, rng);
        GaussianNodes like = m.likelihood_on(g, s, gl);
        ad::NodeId recon = g.scale(log_prob_node(g, like, std::span(&obs, 1)), -1.0);
        ad::NodeId step = g.add(recon, kl_node(g, q, p));
        total = t == 0 ? step : g.add(total, step);
        s_prev = s;
        if (t < static_cast<int>(ep.actions.size())) a_prev = ep.actions[t];
    }
    return g.scale(total, 1.0 / steps);
}

double free_energy_loss(const GenerativeModel& m, const Episode& ep, Rng& rng) {
    ad::Graph g;
    return g.scalar(free_energy_loss_node(g, m, nullptr, ep, rng));
}

std::vector<double> train(GenerativeModel& m, const std::vector<Episode>& dataset,
                          const TrainConfig& cfg) {
    require(!dataset.empty(), "train: empty dataset");
    require(cfg.learning_rate >= 0.0, "train: learning rate must not be negative");
    require(cfg.epochs >= 0, "train: epochs must not be negative");
    require(cfg.minibatch_episodes >= 1, "train: minibatch_episodes must be >= 1");

    const int mb = cfg.minibatch_episodes;
    ModelGrads grads = ModelGrads::zeros_like(m);
    ad::Graph g;
    std::vector<double> curve;
    curve.reserve(cfg.epochs);

    auto apply = [&](int batch_size) {
        if (cfg.learning_rate == 0.0) { // evaluation-only pass
            grads.zero();
            return;
        }
        const double inv = 1.0 / batch_size;
        for (NetParams* np : {&grads.transition, &grads.posterior, &grads.likelihood}) {
            for (LayerParams& l : np->layers) {
                for (double& v : l.w.data) v *= inv;
                for (double& v : l.b) v *= inv;
            }
        }
        sgd_step(m.transition_net.params, grads.transition, cfg.learning_rate);
        sgd_step(m.posterior_net.params, grads.posterior, cfg.learning_rate);
        sgd_step(m.likelihood_net.params, grads.likelihood, cfg.learning_rate);
        grads.zero();
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        int in_batch = 0;
        for (const Episode& ep : dataset) {
            // Noise stream depends on (seed, epoch, episode id) only, so the
            // per-episode loss is independent of dataset iteration order.
            Rng ep_rng(Rng::derive(Rng::derive(cfg.seed, epoch), ep.id));
            g.reset();
            ad::NodeId loss = free_energy_loss_node(g, m, &grads, ep, ep_rng);
            double value = g.scalar(loss);
            if (!std::isfinite(value)) {
                throw DivergenceError("train: non-finite loss at epoch " + std::to_string(epoch));
            }
            epoch_loss += value;
            g.backward(loss);
            if (++in_batch == mb) {
                apply(in_batch);
                in_batch = 0;
            }
        }
        if (in_batch > 0) apply(in_batch);
        curve.push_back(epoch_loss / static_cast<double>(dataset.size()));
    }
    return curve;
}

Vec encode_sequence(const GenerativeModel& m, const Episode& ep, Rng& rng, bool sample_final) {
    ep.validate();
    Vec s_prev(m.meta().state_dim, 0.0);
    std::optional<Action> a_prev;
    DiagGaussian q;
    for (int t = 0; t < ep.length(); ++t) {
        q = m.posterior_infer(s_prev, a_prev, ep.observations[t]);
        s_prev = sample(q, rng);
        if (t < static_cast<int>(ep.actions.size())) a_prev = ep.actions[t];
    }
    return sample_final ? s_prev : q.mean;
}

// --------------------------- checkpoint I/O --------------------------------

namespace {

nlohmann::json net_to_json(const NetParams& p) {
    nlohmann::json layers = nlohmann::json::array();
    for (const LayerParams& l : p.layers) {
        layers.push_back(l.w.data); // row-major weights
        layers.push_back(l.b);
    }
    return layers;
}

NetParams net_from_json(const nlohmann::json& j, std::span<const int> widths) {
    NetParams p;
    require(j.is_array() && j.size() == 2 * (widths.size() - 1),
            "checkpoint: unexpected layer count");
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        LayerParams l{Mat(widths[i + 1], widths[i]), Vec()};
        const auto& jw = j[2 * i];
        const auto& jb = j[2 * i + 1];
        require(jw.size() == l.w.data.size(), "checkpoint: weight size mismatch");
        l.w.data = jw.get<std::vector<double>>();
        l.b = jb.get<std::vector<double>>();
        require(static_cast<int>(l.b.size()) == widths[i + 1], "checkpoint: bias size mismatch");
        p.layers.push_back(std::move(l));
    }
    p.validate();
    return p;
}

} // namespace

void save_checkpoint(const GenerativeModel& m, const std::filesystem::path& path) {
    const ModelMeta& meta = m.meta();
    nlohmann::json j = {
        {"meta",
         {{"state_dim", meta.state_dim},
          {"obs_dim", meta.obs_dim},
          {"action_count", meta.action_count},
          {"hidden", meta.hidden},
          {"seed", meta.seed},
          {"variant", meta.variant}}},
        {"params",
         {{"transition", net_to_json(m.transition_net.params)},
          {"posterior", net_to_json(m.posterior_net.params)},
          {"likelihood", net_to_json(m.likelihood_net.params)}}},
    };
    std::ofstream out(path);
    if (!out) throw IoError("cannot write checkpoint: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

GenerativeModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read checkpoint: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed checkpoint " + path.string() + ": " + e.what());
    }

    ModelMeta meta;
    const auto& jm = j.at("meta");
    meta.state_dim = jm.at("state_dim").get<int>();
    meta.obs_dim = jm.at("obs_dim").get<int>();
    meta.action_count = jm.at("action_count").get<int>();
    meta.hidden = jm.at("hidden").get<int>();
    meta.seed = jm.at("seed").get<std::uint64_t>();
    meta.variant = jm.at("variant").get<std::string>();

    GenerativeModel m(meta);
    const auto& jp = j.at("params");
    const int sd = meta.state_dim, ac = meta.action_count, od = meta.obs_dim, h = meta.hidden;
    const int tr_w[] = {sd + ac, h, 2 * sd};
    const int po_w[] = {sd + ac + od, h, 2 * sd};
    const int li_w[] = {sd, h, 2 * od};
    m.transition_net.params = net_from_json(jp.at("transition"), tr_w);
    m.posterior_net.params = net_from_json(jp.at("posterior"), po_w);
    m.likelihood_net.params = net_from_json(jp.at("likelihood"), li_w);
    return m;
}

} // namespace daif
