#include "daif/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace daif {

namespace {
constexpr double kLn2PiE = 2.8378770664093454836; // ln(2*pi*e)
}

DiagGaussian make_gaussian(Vec mean, Vec std) {
    require(mean.size() == std.size(), "gaussian: mean/std dimension mismatch");
    for (double s : std) require(s > 0.0, "gaussian: std must be strictly positive");
    return DiagGaussian{std::move(mean), std::move(std)};
}

Vec sample(const DiagGaussian& g, Rng& rng) {
    Vec out(g.mean.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = g.mean[i] + rng.normal() * g.std[i];
    }
    return out;
}

double kl_divergence(const DiagGaussian& q, const DiagGaussian& p) {
    require(q.dim() == p.dim(), "kl_divergence: dimension mismatch");
    double acc = 0.0;
    for (int i = 0; i < q.dim(); ++i) {
        double sq = q.std[i], sp = p.std[i];
        double dm = q.mean[i] - p.mean[i];
        acc += std::log(sp / sq) + (sq * sq + dm * dm) / (2.0 * sp * sp) - 0.5;
    }
    return acc;
}

double entropy(const DiagGaussian& g) {
    double acc = 0.0;
    for (int i = 0; i < g.dim(); ++i) acc += 0.5 * kLn2PiE + std::log(g.std[i]);
    return acc;
}

double log_prob(const DiagGaussian& g, std::span<const double> x) {
    require(static_cast<int>(x.size()) == g.dim(), "log_prob: dimension mismatch");
    double acc = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        double z = (x[i] - g.mean[i]) / g.std[i];
        acc += -0.5 * kLn2Pi - std::log(g.std[i]) - 0.5 * z * z;
    }
    return acc;
}

DiagGaussian fit_from_samples(std::span<const Vec> samples) {
    require(samples.size() >= 2, "fit_from_samples: need at least 2 samples");
    const std::size_t d = samples[0].size();
    for (const Vec& s : samples) require(s.size() == d, "fit_from_samples: ragged samples");

    const double inv_n = 1.0 / static_cast<double>(samples.size());
    Vec mean(d, 0.0), std(d, 0.0);
    for (const Vec& s : samples) {
        for (std::size_t i = 0; i < d; ++i) mean[i] += s[i];
    }
    for (std::size_t i = 0; i < d; ++i) mean[i] *= inv_n;
    for (const Vec& s : samples) {
        for (std::size_t i = 0; i < d; ++i) {
            double dm = s[i] - mean[i];
            std[i] += dm * dm;
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        std[i] = std::max(std::sqrt(std[i] * inv_n), kStdFloor);
    }
    return DiagGaussian{std::move(mean), std::move(std)};
}

// ---------------------------------------------------------------------------

ad::NodeId reparam_sample_node(ad::Graph& g, const GaussianNodes& q, Rng& rng) {
    Vec eps = rng.normal_vec(q.dim);
    ad::NodeId e = g.input(eps);
    return g.add(q.mean, g.mul(q.std, e));
}

ad::NodeId kl_node(ad::Graph& g, const GaussianNodes& q, const GaussianNodes& p) {
    require(q.dim == p.dim, "kl_node: dimension mismatch");
    // per coord: ln sp - ln sq + (sq^2 + (mq - mp)^2) / (2 sp^2) - 1/2
    ad::NodeId logs = g.sub(g.log(p.std), g.log(q.std));
    ad::NodeId num = g.add(g.square(q.std), g.square(g.sub(q.mean, p.mean)));
    ad::NodeId frac = g.div(num, g.scale(g.square(p.std), 2.0));
    return g.add_const(g.sum(g.add(logs, frac)), -0.5 * q.dim);
}

ad::NodeId entropy_node(ad::Graph& g, const GaussianNodes& q) {
    return g.add_const(g.sum(g.log(q.std)), 0.5 * kLn2PiE * q.dim);
}

ad::NodeId log_prob_node(ad::Graph& g, const GaussianNodes& q, std::span<const double> x) {
    require(static_cast<int>(x.size()) == q.dim, "log_prob_node: dimension mismatch");
    ad::NodeId xc = g.input(x);
    ad::NodeId z = g.div(g.sub(xc, q.mean), q.std);
    ad::NodeId quad = g.scale(g.sum(g.square(z)), 0.5);
    ad::NodeId logs = g.sum(g.log(q.std));
    return g.scale(g.add_const(g.add(logs, quad), 0.5 * kLn2Pi * q.dim), -1.0);
}

} // namespace daif
