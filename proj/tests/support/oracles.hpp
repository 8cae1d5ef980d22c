#pragma once

// Independent reference implementations used to cross-check the production
// code paths. Everything here recomputes results from first principles with
// plain loops and closed-form expressions; none of it reuses the tape, the
// fitting helper, or the planner recursion it checks.

#include <algorithm>
#include <cmath>
#include <vector>

#include "daif/genmodel.hpp"
#include "daif/planner.hpp"

namespace daif::oracle {

// ------------------------------ gaussians ---------------------------------

inline double kl_closed_form(const DiagGaussian& q, const DiagGaussian& p) {
    // Alternative algebraic arrangement: 1/2 [ (sq/sp)^2 + (dm/sp)^2 - 1 ] + ln(sp/sq)
    double acc = 0.0;
    for (int i = 0; i < q.dim(); ++i) {
        double r = q.std[i] / p.std[i];
        double z = (q.mean[i] - p.mean[i]) / p.std[i];
        acc += 0.5 * (r * r + z * z - 1.0) + std::log(1.0 / r);
    }
    return acc;
}

inline double entropy_closed_form(const DiagGaussian& g) {
    double acc = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        acc += 0.5 * std::log(2.0 * M_PI * M_E * g.std[i] * g.std[i]);
    }
    return acc;
}

inline double log_prob_closed_form(const DiagGaussian& g, const Vec& x) {
    double acc = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        double var = g.std[i] * g.std[i];
        acc += -0.5 * std::log(2.0 * M_PI * var) -
               (x[i] - g.mean[i]) * (x[i] - g.mean[i]) / (2.0 * var);
    }
    return acc;
}

// Mean / population-variance fit, recomputed with plain accumulators.
inline DiagGaussian fit_oracle(const std::vector<Vec>& samples) {
    const std::size_t n = samples.size(), d = samples[0].size();
    Vec mean(d, 0.0), std(d, 0.0);
    for (const Vec& s : samples)
        for (std::size_t i = 0; i < d; ++i) mean[i] += s[i] / static_cast<double>(n);
    for (const Vec& s : samples)
        for (std::size_t i = 0; i < d; ++i)
            std[i] += (s[i] - mean[i]) * (s[i] - mean[i]) / static_cast<double>(n);
    for (std::size_t i = 0; i < d; ++i) std[i] = std::max(std::sqrt(std[i]), 1e-4);
    return DiagGaussian{mean, std};
}

// ----------------------- free-energy loss recompute ------------------------

// Step-by-step recomputation of the episode loss with plain forward passes
// and closed-form terms, consuming the same random stream the tape path
// consumes (state_dim normal draws per step, in coordinate order).
inline double free_energy_recompute(const GenerativeModel& m, const Episode& ep, Rng& rng) {
    Vec s_prev(m.meta().state_dim, 0.0);
    std::optional<Action> a_prev;
    double total = 0.0;
    for (int t = 0; t < ep.length(); ++t) {
        double obs = ep.observations[t];
        DiagGaussian q = m.posterior_infer(s_prev, a_prev, obs);
        DiagGaussian p = m.transition_predict(s_prev, a_prev);
        Vec s(q.dim());
        for (int i = 0; i < q.dim(); ++i) s[i] = q.mean[i] + rng.normal() * q.std[i];
        DiagGaussian like = m.likelihood(s);
        total += -log_prob_closed_form(like, Vec{obs}) + kl_closed_form(q, p);
        s_prev = std::move(s);
        if (t < static_cast<int>(ep.actions.size())) a_prev = ep.actions[t];
    }
    return total / ep.length();
}

// ------------------------ finite-difference gradients ----------------------

inline std::vector<double*> model_param_ptrs(GenerativeModel& m) {
    std::vector<double*> out;
    for (GaussianHeadNet* net : {&m.transition_net, &m.posterior_net, &m.likelihood_net}) {
        for (LayerParams& l : net->params.layers) {
            for (double& v : l.w.data) out.push_back(&v);
            for (double& v : l.b) out.push_back(&v);
        }
    }
    return out;
}

inline std::vector<double> flatten_grads(const ModelGrads& g) {
    std::vector<double> out;
    for (const NetParams* np : {&g.transition, &g.posterior, &g.likelihood}) {
        for (const LayerParams& l : np->layers) {
            out.insert(out.end(), l.w.data.begin(), l.w.data.end());
            out.insert(out.end(), l.b.begin(), l.b.end());
        }
    }
    return out;
}

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::size_t params = 0;
};

// Central finite differences (f(p+h) - f(p-h)) / 2h against the tape
// gradient of the full episode loss. The relative error denominator is
// floored so near-zero gradients are judged on an absolute scale.
inline GradCheckResult grad_check(GenerativeModel& m, const Episode& ep, std::uint64_t seed,
                                  double h = 1e-5) {
    ad::Graph g;
    ModelGrads grads = ModelGrads::zeros_like(m);
    Rng rng(seed);
    ad::NodeId loss = free_energy_loss_node(g, m, &grads, ep, rng);
    (void)loss;
    g.backward(loss);
    std::vector<double> analytic = flatten_grads(grads);

    std::vector<double*> ptrs = model_param_ptrs(m);
    GradCheckResult res;
    res.params = ptrs.size();
    for (std::size_t i = 0; i < ptrs.size(); ++i) {
        double saved = *ptrs[i];
        *ptrs[i] = saved + h;
        Rng rp(seed);
        double fp = free_energy_loss(m, ep, rp);
        *ptrs[i] = saved - h;
        Rng rm(seed);
        double fm = free_energy_loss(m, ep, rm);
        *ptrs[i] = saved;
        double fd = (fp - fm) / (2.0 * h);
        double rel = std::abs(analytic[i] - fd) / std::max(std::abs(fd), 1e-4);
        res.max_rel_err = std::max(res.max_rel_err, rel);
    }
    return res;
}

// --------------------------- planner recompute -----------------------------

struct EfeOracleNode {
    double kl_total = 0.0;
    double entropy_total = 0.0;
    double g_value = 0.0;
    std::vector<EfeOracleNode> children;
};

// Brute-force recomputation of the expected-free-energy recursion: same
// stream-splitting discipline as the planner (branch ai uses
// rng.split(ai + 1); children split off the branch stream), but every fit,
// KL, entropy, softmax and weighted sum is re-derived here with plain loops.
inline std::vector<EfeOracleNode> efe_recompute(const GenerativeModel& m,
                                                const std::vector<Vec>& states,
                                                const PlanConfig& cfg, int depth,
                                                const Rng& rng) {
    std::vector<EfeOracleNode> out;
    for (int ai = 0; ai < m.meta().action_count; ++ai) {
        Rng branch_rng = rng.split(ai + 1);
        EfeOracleNode node;
        std::vector<Vec> cur = states;
        std::vector<Vec> obs_samples(cur.size());
        for (int k = 0; k < cfg.segment_steps; ++k) {
            for (std::size_t i = 0; i < cur.size(); ++i) {
                DiagGaussian tr = m.transition_predict(cur[i], static_cast<Action>(ai));
                Vec s(tr.dim());
                for (int c = 0; c < tr.dim(); ++c)
                    s[c] = tr.mean[c] + branch_rng.normal() * tr.std[c];
                cur[i] = s;
                DiagGaussian like = m.likelihood(s);
                Vec o(like.dim());
                for (int c = 0; c < like.dim(); ++c)
                    o[c] = like.mean[c] + branch_rng.normal() * like.std[c];
                obs_samples[i] = o;
            }
            node.kl_total += kl_closed_form(fit_oracle(cur), cfg.preferred);
            node.entropy_total += entropy_closed_form(fit_oracle(obs_samples));
        }
        node.g_value = node.kl_total + node.entropy_total / cfg.rho;
        if (depth > 1) {
            node.children = efe_recompute(m, cur, cfg, depth - 1, branch_rng);
            // softmax(-gamma g) weights, recomputed longhand
            double z = 0.0, peak = -std::numeric_limits<double>::infinity();
            for (const auto& c : node.children) peak = std::max(peak, -cfg.gamma * c.g_value);
            for (const auto& c : node.children) z += std::exp(-cfg.gamma * c.g_value - peak);
            for (const auto& c : node.children) {
                node.g_value +=
                    std::exp(-cfg.gamma * c.g_value - peak) / z * c.g_value;
            }
        }
        out.push_back(std::move(node));
    }
    return out;
}

} // namespace daif::oracle
