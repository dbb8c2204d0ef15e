#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace tcpkit {

/// Deterministic sampling utilities. All randomness flows through Rng so a
/// seed pins every sampled verdict; distributions are hand-rolled because
/// std::*_distribution output is implementation-defined.

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// Standard normal via Box-Muller; deterministic across platforms.
    double normal() {
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::mt19937_64 eng_;
};

/// Radical-inverse Halton value for index i ≥ 0 in the given prime base.
inline double halton(std::uint64_t i, int base) {
    double f = 1.0;
    double r = 0.0;
    std::uint64_t k = i + 1;
    while (k > 0) {
        f /= base;
        r += f * static_cast<double>(k % static_cast<std::uint64_t>(base));
        k /= static_cast<std::uint64_t>(base);
    }
    return r;
}

inline constexpr int kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

/// i-th Halton point in [0,1)^n.
inline std::vector<double> halton_point(std::uint64_t i, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = halton(i, kHaltonPrimes[j]);
    return x;
}

/// All points k/resolution on the unit simplex {x >= 0, sum x = 1},
/// k a composition of `resolution` into n nonnegative parts. Excludes
/// nothing; includes the vertices.
inline std::vector<std::vector<double>> simplex_grid(int n, int resolution) {
    std::vector<std::vector<double>> points;
    std::vector<int> k(static_cast<std::size_t>(n), 0);
    const auto emit = [&]() {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            x[static_cast<std::size_t>(j)] =
                static_cast<double>(k[static_cast<std::size_t>(j)]) / resolution;
        points.push_back(std::move(x));
    };
    // Recursion over remaining mass, iteratively via an explicit odometer.
    const std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == n - 1) {
            k[static_cast<std::size_t>(pos)] = remaining;
            emit();
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            k[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, remaining - v);
        }
    };
    rec(0, resolution);
    return points;
}

/// Uniform direction on the unit sphere in R^n (two-norm).
inline std::vector<double> sphere_sample(Rng& rng, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& v : x) {
            v = rng.normal();
            norm2 += v * v;
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : x) v *= inv;
    return x;
}

/// Uniform point on the unit simplex via exponential spacing.
inline std::vector<double> simplex_sample(Rng& rng, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& v : x) {
        double u = rng.uniform01();
        while (u == 0.0) u = rng.uniform01();
        v = -std::log(u);
        total += v;
    }
    for (auto& v : x) v /= total;
    return x;
}

}  // namespace tcpkit
