#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "daif/tensor.hpp"

namespace daif::ad {

using NodeId = std::int32_t;

enum class Op : std::uint8_t {
    Input,    // leaf constant, no gradient
    Affine,   // y = W x + b, accumulates into external parameter gradients
    Tanh,
    Softplus,
    Add,
    Sub,
    Mul,      // elementwise
    Div,      // elementwise
    Log,
    Square,
    Scale,    // y = c * x
    AddConst, // y = x + c (c broadcast over all entries)
    Sum,      // y = [sum(x)], length-1 output
    Concat,   // y = [a; b] or [a; b; c]
    Slice,    // y = x[ofs : ofs+len]
};

// Reverse-mode autodiff tape over vector-valued nodes.
//
// Values are computed eagerly as nodes are appended, so creation order is a
// valid topological order and backward() is a single reverse sweep. Affine
// nodes reference parameter tensors owned elsewhere and accumulate their
// adjoints into caller-provided gradient buffers, which is what lets one set
// of network parameters appear many times in a graph (shared weights across
// timesteps) with gradients summed across uses.
//
// A graph is single-use: build, backward() once, then reset(). reset() keeps
// the allocated storage so training loops do not churn the allocator.
class Graph {
public:
    NodeId input(std::span<const double> v);
    NodeId input_scalar(double v);

    // y = W x + b. gw/gb may be null (parameters treated as constants).
    NodeId affine(const Mat& w, const Vec& b, NodeId x, Mat* gw = nullptr, Vec* gb = nullptr);

    NodeId tanh(NodeId x);
    NodeId softplus(NodeId x);
    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    NodeId div(NodeId a, NodeId b);
    NodeId log(NodeId x);
    NodeId square(NodeId x);
    NodeId scale(NodeId x, double c);
    NodeId add_const(NodeId x, double c);
    NodeId sum(NodeId x);
    NodeId concat(NodeId a, NodeId b, NodeId c = -1);
    NodeId slice(NodeId x, int ofs, int len);

    std::span<const double> value(NodeId id) const;
    double scalar(NodeId id) const; // value of a length-1 node

    // Seeds the loss adjoint with 1 and sweeps the tape in reverse.
    void backward(NodeId loss);

    std::span<const double> adjoint(NodeId id) const;

    void reset();
    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Op op;
        NodeId in0 = -1, in1 = -1, in2 = -1;
        int val = 0; // offset of value in buf_; adjoint lives at val + len
        int len = 0;
        double c = 0.0; // payload for Scale / AddConst
        int ofs = 0;    // payload for Slice
        const Mat* w = nullptr;
        Mat* gw = nullptr;
        const Vec* b = nullptr;
        Vec* gb = nullptr;
    };

    NodeId push(Node n, int len);
    double* val_ptr(NodeId id) { return buf_.data() + nodes_[id].val; }
    const double* val_ptr(NodeId id) const { return buf_.data() + nodes_[id].val; }
    double* adj_ptr(NodeId id) { return buf_.data() + nodes_[id].val + nodes_[id].len; }
    int len(NodeId id) const { return nodes_[id].len; }
    void check_id(NodeId id) const;

    std::vector<Node> nodes_;
    std::vector<double> buf_;
    bool swept_ = false;
};

// Numerically stable helpers shared by forward paths outside the graph.
double softplus(double x);
double logistic(double x);

} // namespace daif::ad
