#include "daif/graph.hpp"

#include <cmath>

namespace daif::ad {

double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

double logistic(double x) {
    if (x >= 0.0) {
        double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

void Graph::check_id(NodeId id) const {
    require(id >= 0 && static_cast<std::size_t>(id) < nodes_.size(), "graph: bad node id");
}

NodeId Graph::push(Node n, int out_len) {
    n.val = static_cast<int>(buf_.size());
    n.len = out_len;
    buf_.resize(buf_.size() + 2 * static_cast<std::size_t>(out_len), 0.0);
    nodes_.push_back(n);
    return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Graph::input(std::span<const double> v) {
    NodeId id = push({.op = Op::Input}, static_cast<int>(v.size()));
    std::copy(v.begin(), v.end(), val_ptr(id));
    return id;
}

NodeId Graph::input_scalar(double v) {
    return input(std::span<const double>(&v, 1));
}

NodeId Graph::affine(const Mat& w, const Vec& b, NodeId x, Mat* gw, Vec* gb) {
    check_id(x);
    require(w.cols == len(x), "affine: input width mismatch");
    require(w.rows == static_cast<int>(b.size()), "affine: bias width mismatch");
    Node n{.op = Op::Affine, .in0 = x, .w = &w, .gw = gw, .b = &b, .gb = gb};
    NodeId id = push(n, w.rows);
    const double* xv = val_ptr(x);
    double* yv = val_ptr(id);
    for (int r = 0; r < w.rows; ++r) {
        double acc = b[r];
        const double* row = w.data.data() + static_cast<std::size_t>(r) * w.cols;
        for (int c = 0; c < w.cols; ++c) acc += row[c] * xv[c];
        yv[r] = acc;
    }
    return id;
}

NodeId Graph::tanh(NodeId x) {
    check_id(x);
    NodeId id = push({.op = Op::Tanh, .in0 = x}, len(x));
    const double* xv = val_ptr(x);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = std::tanh(xv[i]);
    return id;
}

NodeId Graph::softplus(NodeId x) {
    check_id(x);
    NodeId id = push({.op = Op::Softplus, .in0 = x}, len(x));
    const double* xv = val_ptr(x);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = ad::softplus(xv[i]);
    return id;
}

NodeId Graph::add(NodeId a, NodeId b) {
    check_id(a);
    check_id(b);
    require(len(a) == len(b), "add: length mismatch");
    NodeId id = push({.op = Op::Add, .in0 = a, .in1 = b}, len(a));
    const double *av = val_ptr(a), *bv = val_ptr(b);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = av[i] + bv[i];
    return id;
}

NodeId Graph::sub(NodeId a, NodeId b) {
    check_id(a);
    check_id(b);
    require(len(a) == len(b), "sub: length mismatch");
    NodeId id = push({.op = Op::Sub, .in0 = a, .in1 = b}, len(a));
    const double *av = val_ptr(a), *bv = val_ptr(b);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = av[i] - bv[i];
    return id;
}

NodeId Graph::mul(NodeId a, NodeId b) {
    check_id(a);
    check_id(b);
    require(len(a) == len(b), "mul: length mismatch");
    NodeId id = push({.op = Op::Mul, .in0 = a, .in1 = b}, len(a));
    const double *av = val_ptr(a), *bv = val_ptr(b);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = av[i] * bv[i];
    return id;
}

NodeId Graph::div(NodeId a, NodeId b) {
    check_id(a);
    check_id(b);
    require(len(a) == len(b), "div: length mismatch");
    NodeId id = push({.op = Op::Div, .in0 = a, .in1 = b}, len(a));
    const double *av = val_ptr(a), *bv = val_ptr(b);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = av[i] / bv[i];
    return id;
}

NodeId Graph::log(NodeId x) {
    check_id(x);
    NodeId id = push({.op = Op::Log, .in0 = x}, len(x));
    const double* xv = val_ptr(x);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = std::log(xv[i]);
    return id;
}

NodeId Graph::square(NodeId x) {
    check_id(x);
    NodeId id = push({.op = Op::Square, .in0 = x}, len(x));
    const double* xv = val_ptr(x);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = xv[i] * xv[i];
    return id;
}

NodeId Graph::scale(NodeId x, double c) {
    check_id(x);
    NodeId id = push({.op = Op::Scale, .in0 = x, .c = c}, len(x));
    const double* xv = val_ptr(x);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = c * xv[i];
    return id;
}

NodeId Graph::add_const(NodeId x, double c) {
    check_id(x);
    NodeId id = push({.op = Op::AddConst, .in0 = x, .c = c}, len(x));
    const double* xv = val_ptr(x);
    double* yv = val_ptr(id);
    for (int i = 0; i < len(id); ++i) yv[i] = xv[i] + c;
    return id;
}

NodeId Graph::sum(NodeId x) {
    check_id(x);
    NodeId id = push({.op = Op::Sum, .in0 = x}, 1);
    const double* xv = val_ptr(x);
    double acc = 0.0;
    for (int i = 0; i < len(x); ++i) acc += xv[i];
    *val_ptr(id) = acc;
    return id;
}

NodeId Graph::concat(NodeId a, NodeId b, NodeId c) {
    check_id(a);
    check_id(b);
    if (c >= 0) check_id(c);
    int total = len(a) + len(b) + (c >= 0 ? len(c) : 0);
    NodeId id = push({.op = Op::Concat, .in0 = a, .in1 = b, .in2 = c}, total);
    double* yv = val_ptr(id);
    std::copy_n(val_ptr(a), len(a), yv);
    std::copy_n(val_ptr(b), len(b), yv + len(a));
    if (c >= 0) std::copy_n(val_ptr(c), len(c), yv + len(a) + len(b));
    return id;
}

NodeId Graph::slice(NodeId x, int ofs, int out_len) {
    check_id(x);
    require(ofs >= 0 && out_len >= 1 && ofs + out_len <= len(x), "slice: range out of bounds");
    NodeId id = push({.op = Op::Slice, .in0 = x, .ofs = ofs}, out_len);
    std::copy_n(val_ptr(x) + ofs, out_len, val_ptr(id));
    return id;
}

std::span<const double> Graph::value(NodeId id) const {
    check_id(id);
    return {val_ptr(id), static_cast<std::size_t>(len(id))};
}

double Graph::scalar(NodeId id) const {
    check_id(id);
    require(len(id) == 1, "scalar: node is not length 1");
    return *val_ptr(id);
}

std::span<const double> Graph::adjoint(NodeId id) const {
    check_id(id);
    return {buf_.data() + nodes_[id].val + nodes_[id].len, static_cast<std::size_t>(len(id))};
}

void Graph::backward(NodeId loss) {
    check_id(loss);
    require(len(loss) == 1, "backward: loss node must be scalar");
    require(!swept_, "backward: graph already swept; reset() first");
    swept_ = true;

    *adj_ptr(loss) = 1.0;

    for (NodeId id = static_cast<NodeId>(nodes_.size()) - 1; id >= 0; --id) {
        const Node& n = nodes_[id];
        const double* ya = adj_ptr(id);
        const double* yv = val_ptr(id);
        switch (n.op) {
        case Op::Input:
            break;
        case Op::Affine: {
            const Mat& w = *n.w;
            const double* xv = val_ptr(n.in0);
            double* xa = adj_ptr(n.in0);
            for (int r = 0; r < w.rows; ++r) {
                double g = ya[r];
                if (g == 0.0) continue;
                const double* row = w.data.data() + static_cast<std::size_t>(r) * w.cols;
                for (int c = 0; c < w.cols; ++c) xa[c] += row[c] * g;
            }
            if (n.gw != nullptr) {
                Mat& gw = *n.gw;
                for (int r = 0; r < w.rows; ++r) {
                    double g = ya[r];
                    if (g == 0.0) continue;
                    double* grow = gw.data.data() + static_cast<std::size_t>(r) * w.cols;
                    for (int c = 0; c < w.cols; ++c) grow[c] += g * xv[c];
                }
            }
            if (n.gb != nullptr) {
                Vec& gb = *n.gb;
                for (int r = 0; r < w.rows; ++r) gb[r] += ya[r];
            }
            break;
        }
        case Op::Tanh: {
            double* xa = adj_ptr(n.in0);
            for (int i = 0; i < n.len; ++i) xa[i] += (1.0 - yv[i] * yv[i]) * ya[i];
            break;
        }
        case Op::Softplus: {
            const double* xv = val_ptr(n.in0);
            double* xa = adj_ptr(n.in0);
            for (int i = 0; i < n.len; ++i) xa[i] += logistic(xv[i]) * ya[i];
            break;
        }
        case Op::Add: {
            double* aa = adj_ptr(n.in0);
            double* ba = adj_ptr(n.in1);
            for (int i = 0; i < n.len; ++i) {
                aa[i] += ya[i];
                ba[i] += ya[i];
            }
            break;
        }
        case Op::Sub: {
            double* aa = adj_ptr(n.in0);
            double* ba = adj_ptr(n.in1);
            for (int i = 0; i < n.len; ++i) {
                aa[i] += ya[i];
                ba[i] -= ya[i];
            }
            break;
        }
        case Op::Mul: {
            const double* av = val_ptr(n.in0);
            const double* bv = val_ptr(n.in1);
            double* aa = adj_ptr(n.in0);
            double* ba = adj_ptr(n.in1);
            for (int i = 0; i < n.len; ++i) {
                aa[i] += bv[i] * ya[i];
                ba[i] += av[i] * ya[i];
            }
            break;
        }
        case Op::Div: {
            const double* bv = val_ptr(n.in1);
            double* aa = adj_ptr(n.in0);
            double* ba = adj_ptr(n.in1);
            for (int i = 0; i < n.len; ++i) {
                aa[i] += ya[i] / bv[i];
                ba[i] -= ya[i] * yv[i] / bv[i]; // y = a/b, so a/b^2 = y/b
            }
            break;
        }
        case Op::Log: {
            const double* xv = val_ptr(n.in0);
            double* xa = adj_ptr(n.in0);
            for (int i = 0; i < n.len; ++i) xa[i] += ya[i] / xv[i];
            break;
        }
        case Op::Square: {
            const double* xv = val_ptr(n.in0);
            double* xa = adj_ptr(n.in0);
            for (int i = 0; i < n.len; ++i) xa[i] += 2.0 * xv[i] * ya[i];
            break;
        }
        case Op::Scale: {
            double* xa = adj_ptr(n.in0);
            for (int i = 0; i < n.len; ++i) xa[i] += n.c * ya[i];
            break;
        }
        case Op::AddConst: {
            double* xa = adj_ptr(n.in0);
            for (int i = 0; i < n.len; ++i) xa[i] += ya[i];
            break;
        }
        case Op::Sum: {
            double* xa = adj_ptr(n.in0);
            int m = len(n.in0);
            for (int i = 0; i < m; ++i) xa[i] += ya[0];
            break;
        }
        case Op::Concat: {
            double* aa = adj_ptr(n.in0);
            double* ba = adj_ptr(n.in1);
            int la = len(n.in0), lb = len(n.in1);
            for (int i = 0; i < la; ++i) aa[i] += ya[i];
            for (int i = 0; i < lb; ++i) ba[i] += ya[la + i];
            if (n.in2 >= 0) {
                double* ca = adj_ptr(n.in2);
                int lc = len(n.in2);
                for (int i = 0; i < lc; ++i) ca[i] += ya[la + lb + i];
            }
            break;
        }
        case Op::Slice: {
            double* xa = adj_ptr(n.in0);
            for (int i = 0; i < n.len; ++i) xa[n.ofs + i] += ya[i];
            break;
        }
        }
    }
}

void Graph::reset() {
    nodes_.clear();
    buf_.clear();
    swept_ = false;
}

} // namespace daif::ad
