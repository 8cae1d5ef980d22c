#pragma once

#include <span>
#include <vector>

#include "daif/gaussian.hpp"
#include "daif/graph.hpp"
#include "daif/rng.hpp"
#include "daif/tensor.hpp"

namespace daif {

struct LayerParams {
    Mat w;
    Vec b;
};

// Fully connected network parameters. Layer i maps w.cols inputs to w.rows
// outputs; widths must chain. Also reused as the gradient accumulator for a
// network of the same shape.
struct NetParams {
    std::vector<LayerParams> layers;

    int in_dim() const { return layers.empty() ? 0 : layers.front().w.cols; }
    int out_dim() const { return layers.empty() ? 0 : layers.back().w.rows; }

    void validate() const;
    void zero();

    static NetParams zeros_like(const NetParams& p);
};

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
NetParams init_mlp(std::span<const int> widths, Rng& rng);

// tanh between layers, last layer linear (returns output pre-activations).
Vec mlp_forward(const NetParams& p, std::span<const double> x);

// Same computation on the tape; grads may be null for a constant-parameter
// pass.
ad::NodeId mlp_forward_on(ad::Graph& g, const NetParams& p, ad::NodeId x, NetParams* grads);

// p <- p - lr * g. Throws DivergenceError if any gradient is non-finite.
void sgd_step(NetParams& p, const NetParams& grads, double lr);

// MLP whose output layer parameterizes a DiagGaussian: the first out_dim
// outputs are the mean, the rest pass through softplus (+ floor) to give the
// standard deviation.
class GaussianHeadNet {
public:
    GaussianHeadNet() = default;
    GaussianHeadNet(int in_dim, int hidden, int out_dim, Rng& rng);

    DiagGaussian forward(std::span<const double> x) const;
    GaussianNodes forward_on(ad::Graph& g, ad::NodeId x, NetParams* grads) const;

    int in_dim() const { return in_dim_; }
    int out_dim() const { return out_dim_; }

    NetParams params;

private:
    int in_dim_ = 0;
    int out_dim_ = 0;
};

} // namespace daif
