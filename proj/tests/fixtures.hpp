// Shared test fixtures: the small tensors used throughout the suites.
#pragma once

#include <vector>

#include "tcpkit/tensor.hpp"

namespace fixtures {

// Order 4, dimension 2: a_{1111} = a_{2222} = 1, a_{1112} = -2,
// a_{1122} = -alpha, other entries 0. alpha in {0, 4}.
inline tcpkit::Tensor nonsymmetric_m4(double alpha) {
    tcpkit::Tensor t = tcpkit::Tensor::zeros(4, 2);
    std::vector<double> e = t.entries();
    auto at = [&](int i1, int i2, int i3, int i4) -> double& {
        const int idx[] = {i1 - 1, i2 - 1, i3 - 1, i4 - 1};
        return e[t.flat_index(std::span<const int>(idx, 4))];
    };
    at(1, 1, 1, 1) = 1.0;
    at(2, 2, 2, 2) = 1.0;
    at(1, 1, 1, 2) = -2.0;
    at(1, 1, 2, 2) = -alpha;
    return tcpkit::Tensor(4, 2, std::move(e));
}

// Order 4, dimension 2: a_{1111} = a_{2222} = 1, a_{1222} = -0.5. The
// nonzero off-diagonal entry has constant trailing indices.
inline tcpkit::Tensor trailing_pattern_m4() {
    tcpkit::Tensor t = tcpkit::Tensor::zeros(4, 2);
    std::vector<double> e = t.entries();
    auto set = [&](std::initializer_list<int> onebased, double v) {
        std::vector<int> idx;
        for (int i : onebased) idx.push_back(i - 1);
        e[t.flat_index(std::span<const int>(idx.data(), idx.size()))] = v;
    };
    set({1, 1, 1, 1}, 1.0);
    set({2, 2, 2, 2}, 1.0);
    set({1, 2, 2, 2}, -0.5);
    return tcpkit::Tensor(4, 2, std::move(e));
}

// One-dimensional [1] with order 3: F(x) = x^2.
inline tcpkit::Tensor one_dim_square() {
    return tcpkit::Tensor(3, 1, std::vector<double>{1.0});
}

// Generic entry setter for hand-built tensors (1-based indices).
inline tcpkit::Tensor build(int m, int n,
                            const std::vector<std::pair<std::vector<int>, double>>& entries) {
    tcpkit::Tensor t = tcpkit::Tensor::zeros(m, n);
    std::vector<double> e = t.entries();
    for (const auto& [idx1, v] : entries) {
        std::vector<int> idx;
        for (int i : idx1) idx.push_back(i - 1);
        e[t.flat_index(std::span<const int>(idx.data(), idx.size()))] = v;
    }
    return tcpkit::Tensor(m, n, std::move(e));
}

}  // namespace fixtures
