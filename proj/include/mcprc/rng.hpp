#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace mcprc {

/// Deterministic random stream used throughout the stochastic engine and the
/// optimizer. Wraps std::mt19937_64 but generates all variates with
/// hand-written transforms (53-bit uniforms, Box-Muller normals, rejection
/// sampling for bounded integers, Fisher-Yates shuffles) so that traces are
/// reproducible across standard library implementations. Replicate r of a run
/// draws from seed + r.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Standard normal via the Marsaglia polar method, with the paired
    /// variate cached for the next call.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    /// Uniform integer in [0, n), bias-free by rejection.
    std::size_t index(std::size_t n) {
        if (n <= 1) return 0;
        const std::uint64_t span = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return static_cast<std::size_t>(x % span);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

    /// Uniform point on the sphere of given radius (Marsaglia normal method).
    std::array<double, 3> on_sphere(double radius) {
        double x = normal(), y = normal(), z = normal();
        double r = std::sqrt(x * x + y * y + z * z);
        while (r < 1e-300) {
            x = normal();
            y = normal();
            z = normal();
            r = std::sqrt(x * x + y * y + z * z);
        }
        const double s = radius / r;
        return {x * s, y * s, z * s};
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mcprc
