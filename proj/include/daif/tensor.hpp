#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "daif/errors.hpp"

namespace daif {

using Vec = std::vector<double>;

// Dense row-major matrix. Small networks only, so no views or strides.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::size_t size() const { return data.size(); }
};

inline bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

inline void require(bool cond, const char* msg) {
    if (!cond) throw ContractError(msg);
}

} // namespace daif
