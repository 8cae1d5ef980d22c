#pragma once

#include <span>
#include <vector>

#include "daif/graph.hpp"
#include "daif/rng.hpp"
#include "daif/tensor.hpp"

namespace daif {

// Lower bound applied to every standard deviation produced in the system
// (network heads and moment-matched fits). Keeps log terms and KL
// denominators finite for degenerate inputs.
inline constexpr double kStdFloor = 1e-4;

inline constexpr double kLn2Pi = 1.8378770664093454836; // ln(2*pi)

// Diagonal multivariate Gaussian; the distribution currency of the whole
// system. std is strictly positive in every coordinate.
struct DiagGaussian {
    Vec mean;
    Vec std;

    int dim() const { return static_cast<int>(mean.size()); }
};

DiagGaussian make_gaussian(Vec mean, Vec std);

// mu + eps .* sigma with eps ~ N(0, I).
Vec sample(const DiagGaussian& g, Rng& rng);

// KL(q || p) = sum_i [ ln(sp/sq) + (sq^2 + (mq - mp)^2) / (2 sp^2) - 1/2 ]
double kl_divergence(const DiagGaussian& q, const DiagGaussian& p);

// sum_i [ 1/2 ln(2 pi e) + ln s_i ]
double entropy(const DiagGaussian& g);

// sum_i [ -1/2 ln(2 pi) - ln s_i - (x_i - m_i)^2 / (2 s_i^2) ]
double log_prob(const DiagGaussian& g, std::span<const double> x);

// Per-coordinate sample mean and population (divide by N) standard
// deviation, floored at kStdFloor. Needs at least two samples.
DiagGaussian fit_from_samples(std::span<const Vec> samples);

// ---------------------------------------------------------------------------
// Graph-side counterparts. Each builds the same expression out of tape
// primitives so gradients flow into whatever produced mean/std.

struct GaussianNodes {
    ad::NodeId mean = -1;
    ad::NodeId std = -1;
    int dim = 0;
};

// mu + eps .* sigma, eps drawn from rng and entered as a constant leaf.
ad::NodeId reparam_sample_node(ad::Graph& g, const GaussianNodes& q, Rng& rng);

ad::NodeId kl_node(ad::Graph& g, const GaussianNodes& q, const GaussianNodes& p);

ad::NodeId entropy_node(ad::Graph& g, const GaussianNodes& q);

ad::NodeId log_prob_node(ad::Graph& g, const GaussianNodes& q, std::span<const double> x);

} // namespace daif
