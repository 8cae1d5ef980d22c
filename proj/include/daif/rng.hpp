#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace daif {

// Deterministic random stream with cheap derived sub-streams.
//
// Construction: the 64-bit seed is passed through splitmix64 once and the
// result seeds a std::mt19937_64 engine. uniform() takes the top 53 bits of
// an engine draw; normal() is a Box-Muller transform using the cosine branch
// only (two uniforms per variate). All of this is fixed so tests can rerun
// the exact sequence standalone.
//
// split(tag) derives an independent stream from the *base seed* and the tag,
// not from the engine state, so derived streams do not depend on how many
// draws were taken from the parent. This is what makes per-branch planner
// streams reproducible whether branches run serially or in parallel.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // [0, n)
    int uniform_int(int n) {
        int v = static_cast<int>(uniform() * n);
        return v >= n ? n - 1 : v;
    }

    double normal() {
        double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    std::vector<double> normal_vec(int d) {
        std::vector<double> v(d);
        for (auto& x : v) x = normal();
        return v;
    }

    Rng split(std::uint64_t tag) const { return Rng(derive(seed_, tag)); }

    std::uint64_t seed() const { return seed_; }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
        return splitmix64(seed ^ ((tag + 1) * 0x9E3779B97F4A7C15ULL));
    }

private:
    static constexpr double kPi = 3.14159265358979323846;

    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace daif
