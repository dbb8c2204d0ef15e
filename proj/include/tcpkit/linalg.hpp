#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// Dense square linear algebra on row-major buffers. Sized for desk-scale
/// systems (n small); partial pivoting throughout.

struct LuResult {
    std::vector<double> lu;   ///< packed L\U factors, row-major
    std::vector<int> perm;    ///< row permutation
    double det = 0.0;         ///< determinant of the input
    bool singular = false;    ///< pivot below threshold encountered
};

/// LU factorization with partial pivoting. `a` is row-major n-by-n.
inline LuResult lu_factor(std::vector<double> a, int n) {
    LuResult res;
    res.perm.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) res.perm[static_cast<std::size_t>(i)] = i;
    double det = 1.0;
    const auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(j)];
    };
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(at(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::fabs(at(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
            std::swap(res.perm[static_cast<std::size_t>(k)],
                      res.perm[static_cast<std::size_t>(piv)]);
            det = -det;
        }
        const double pivot = at(k, k);
        if (std::fabs(pivot) < 1e-300) {
            res.singular = true;
            res.det = 0.0;
            res.lu = std::move(a);
            return res;
        }
        det *= pivot;
        for (int i = k + 1; i < n; ++i) {
            const double factor = at(i, k) / pivot;
            at(i, k) = factor;
            for (int j = k + 1; j < n; ++j) at(i, j) -= factor * at(k, j);
        }
    }
    res.det = det;
    res.lu = std::move(a);
    return res;
}

/// Solves L U x = P b given a factorization. Undefined if singular.
inline std::vector<double> lu_solve(const LuResult& f, const std::vector<double>& b, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(i)])];
    const auto at = [&](int i, int j) {
        return f.lu[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(j)];
    };
    for (int i = 1; i < n; ++i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) s -= at(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= at(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    return x;
}

struct LinearSolve {
    std::vector<double> x;
    double det = 0.0;
    bool ok = false;
};

/// Solves A x = b for row-major n-by-n A. ok = false on a singular pivot.
inline LinearSolve solve_linear(const std::vector<double>& a, const std::vector<double>& b,
                                int n) {
    LinearSolve out;
    const LuResult f = lu_factor(a, n);
    out.det = f.det;
    if (f.singular) return out;
    out.x = lu_solve(f, b, n);
    out.ok = true;
    for (double v : out.x)
        if (!std::isfinite(v)) {
            out.ok = false;
            break;
        }
    return out;
}

/// Determinant of a row-major n-by-n matrix.
inline double determinant(const std::vector<double>& a, int n) {
    return lu_factor(a, n).det;
}

/// Row-major matrix-vector product, n-by-n.
inline std::vector<double> mat_vec(const std::vector<double>& a, const std::vector<double>& x,
                                   int n) {
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            s += a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(j)] *
                 x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

}  // namespace tcpkit
