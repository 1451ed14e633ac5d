#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gsvm::rng {

using Engine = std::mt19937_64;

// 53-bit uniform in [0, 1).
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), rejection sampled so the result does not
// depend on the standard library's distribution internals.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
    const std::uint64_t bound = n == 0 ? 0 : UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= bound);
    return x % n;
}

inline double uniform(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

// Box-Muller normal sampler; keeps the spare deviate so draws are a pure
// function of the engine state.
class GaussianSampler {
public:
    explicit GaussianSampler(Engine& eng) : eng_(eng) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform01(eng_);
        } while (u1 <= 0.0);
        const double u2 = uniform01(eng_);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    Engine& eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Fisher-Yates shuffle with the explicit index sampler above.
template <typename T>
void shuffle(std::vector<T>& values, Engine& eng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_index(eng, i));
        std::swap(values[i - 1], values[j]);
    }
}

inline std::vector<int> permutation(int n, Engine& eng) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    shuffle(idx, eng);
    return idx;
}

}  // namespace gsvm::rng
