#include "daif/net.hpp"

#include <algorithm>
#include <cmath>

namespace daif {

void NetParams::validate() const {
    require(!layers.empty(), "net: no layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerParams& l = layers[i];
        require(l.w.rows == static_cast<int>(l.b.size()), "net: bias width mismatch");
        if (i + 1 < layers.size()) {
            require(layers[i + 1].w.cols == l.w.rows, "net: layer widths do not chain");
        }
    }
}

void NetParams::zero() {
    for (LayerParams& l : layers) {
        std::fill(l.w.data.begin(), l.w.data.end(), 0.0);
        std::fill(l.b.begin(), l.b.end(), 0.0);
    }
}

NetParams NetParams::zeros_like(const NetParams& p) {
    NetParams g;
    g.layers.reserve(p.layers.size());
    for (const LayerParams& l : p.layers) {
        g.layers.push_back({Mat(l.w.rows, l.w.cols), Vec(l.b.size(), 0.0)});
    }
    return g;
}

NetParams init_mlp(std::span<const int> widths, Rng& rng) {
    require(widths.size() >= 2, "init_mlp: need at least input and output widths");
    NetParams p;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        int fan_in = widths[i];
        int fan_out = widths[i + 1];
        double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        LayerParams l{Mat(fan_out, fan_in), Vec(fan_out, 0.0)};
        for (double& w : l.w.data) w = rng.uniform(-bound, bound);
        p.layers.push_back(std::move(l));
    }
    p.validate();
    return p;
}

Vec mlp_forward(const NetParams& p, std::span<const double> x) {
    require(static_cast<int>(x.size()) == p.in_dim(), "mlp_forward: input width mismatch");
    Vec cur(x.begin(), x.end());
    for (std::size_t li = 0; li < p.layers.size(); ++li) {
        const LayerParams& l = p.layers[li];
        Vec next(l.w.rows);
        for (int r = 0; r < l.w.rows; ++r) {
            double acc = l.b[r];
            const double* row = l.w.data.data() + static_cast<std::size_t>(r) * l.w.cols;
            for (int c = 0; c < l.w.cols; ++c) acc += row[c] * cur[c];
            next[r] = acc;
        }
        if (li + 1 < p.layers.size()) {
            for (double& v : next) v = std::tanh(v);
        }
        cur = std::move(next);
    }
    return cur;
}

ad::NodeId mlp_forward_on(ad::Graph& g, const NetParams& p, ad::NodeId x, NetParams* grads) {
    ad::NodeId cur = x;
    for (std::size_t li = 0; li < p.layers.size(); ++li) {
        const LayerParams& l = p.layers[li];
        Mat* gw = grads != nullptr ? &grads->layers[li].w : nullptr;
        Vec* gb = grads != nullptr ? &grads->layers[li].b : nullptr;
        cur = g.affine(l.w, l.b, cur, gw, gb);
        if (li + 1 < p.layers.size()) cur = g.tanh(cur);
    }
    return cur;
}

void sgd_step(NetParams& p, const NetParams& grads, double lr) {
    require(lr > 0.0, "sgd_step: learning rate must be positive");
    require(p.layers.size() == grads.layers.size(), "sgd_step: shape mismatch");
    for (std::size_t li = 0; li < p.layers.size(); ++li) {
        LayerParams& l = p.layers[li];
        const LayerParams& gl = grads.layers[li];
        require(l.w.rows == gl.w.rows && l.w.cols == gl.w.cols && l.b.size() == gl.b.size(),
                "sgd_step: shape mismatch");
        if (!all_finite(gl.w.data) || !all_finite(gl.b)) {
            throw DivergenceError("sgd_step: non-finite gradient");
        }
        for (std::size_t i = 0; i < l.w.data.size(); ++i) l.w.data[i] -= lr * gl.w.data[i];
        for (std::size_t i = 0; i < l.b.size(); ++i) l.b[i] -= lr * gl.b[i];
    }
}

GaussianHeadNet::GaussianHeadNet(int in_dim, int hidden, int out_dim, Rng& rng)
    : in_dim_(in_dim), out_dim_(out_dim) {
    const int widths[] = {in_dim, hidden, 2 * out_dim};
    params = init_mlp(widths, rng);
}

DiagGaussian GaussianHeadNet::forward(std::span<const double> x) const {
    Vec raw = mlp_forward(params, x);
    Vec mean(raw.begin(), raw.begin() + out_dim_);
    Vec std(out_dim_);
    for (int i = 0; i < out_dim_; ++i) std[i] = ad::softplus(raw[out_dim_ + i]) + kStdFloor;
    return DiagGaussian{std::move(mean), std::move(std)};
}

GaussianNodes GaussianHeadNet::forward_on(ad::Graph& g, ad::NodeId x, NetParams* grads) const {
    ad::NodeId raw = mlp_forward_on(g, params, x, grads);
    GaussianNodes out;
    out.dim = out_dim_;
    out.mean = g.slice(raw, 0, out_dim_);
    out.std = g.add_const(g.softplus(g.slice(raw, out_dim_, out_dim_)), kStdFloor);
    return out;
}

} // namespace daif
