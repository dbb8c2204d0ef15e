#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// Spectral radius of nonnegative tensors by power iteration, certified by
/// Collatz-Wielandt bounds: for any d > 0,
///   min_i (B d^{m-1})_i / d_i^{m-1}  <=  rho(B)  <=  max_i of the same.
/// Bounds are always evaluated on the unshifted tensor, so the certificate
/// does not depend on the shift device used to keep iterates positive.

struct SpectralEstimate {
    double rho = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> vector;  ///< Perron candidate, inf-norm 1, entrywise >= 0
    int iterations = 0;
    bool converged = false;
};

struct CwBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool zero_tensor = false;  ///< B identically zero; bounds are exact at (0,0)
};

inline CwBounds collatz_wielandt_bounds(const Tensor& b, const std::vector<double>& d) {
    for (double v : b.entries())
        if (v < 0.0) throw TensorError("collatz_wielandt_bounds: tensor has a negative entry");
    if (static_cast<int>(d.size()) != b.dim())
        throw TensorError("collatz_wielandt_bounds: vector length mismatch");
    for (double v : d)
        if (!(v > 0.0)) throw TensorError("collatz_wielandt_bounds: d must be strictly positive");
    CwBounds out;
    bool all_zero = true;
    for (double v : b.entries())
        if (v != 0.0) {
            all_zero = false;
            break;
        }
    if (all_zero) {
        out.zero_tensor = true;
        return out;
    }
    const std::vector<double> bd = contract(b, d);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < b.dim(); ++i) {
        const double di = d[static_cast<std::size_t>(i)];
        const double ratio = bd[static_cast<std::size_t>(i)] / std::pow(di, b.order() - 1);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    out.lower = lo;
    out.upper = hi;
    return out;
}

namespace detail {

/// One power step with two optional shifts: an additive all-ones shift of
/// weight eps (keeps iterates positive while eps > 0) and a unit diagonal
/// shift (damps the oscillation of imprimitive tensors; eigenvectors are
/// unchanged). y = (B x^{m-1} + eps*(sum x)^{m-1} [+ x^{[m-1]}])^{[1/(m-1)]},
/// then inf-normalize and clamp entries below tau so the iterate stays
/// positive.
inline std::vector<double> power_step(const Tensor& b, const std::vector<double>& x, double eps,
                                      bool diag_shift, double tau) {
    const int n = b.dim();
    const int m = b.order();
    std::vector<double> y = contract(b, x);
    double shift = 0.0;
    if (eps > 0.0) {
        double s = 0.0;
        for (double v : x) s += v;
        shift = eps * std::pow(s, m - 1);
    }
    for (int i = 0; i < n; ++i) {
        double& v = y[static_cast<std::size_t>(i)];
        v += shift;
        if (diag_shift) v += std::pow(x[static_cast<std::size_t>(i)], m - 1);
    }
    const double inv = 1.0 / static_cast<double>(m - 1);
    for (double& v : y) v = (v <= 0.0) ? 0.0 : std::pow(v, inv);
    double top = 0.0;
    for (double v : y) top = std::max(top, v);
    if (top == 0.0) return std::vector<double>(static_cast<std::size_t>(n), tau);
    for (double& v : y) {
        v /= top;
        if (v < tau) v = tau;
    }
    return y;
}

struct LadderResult {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::vector<double> vector;
    int iterations = 0;
};

/// Shift-ladder power iteration on one tensor. Bounds from every iterate are
/// valid brackets of rho (Collatz-Wielandt at a positive vector), so the
/// running intersection [max lower, min upper] is a valid bracket too; the
/// ladder stops once its width reaches tol.
inline LadderResult run_ladder(const Tensor& b, double tol, int max_iter) {
    const int n = b.dim();
    const int m = b.order();
    // Positivity floor; the floor^(m-1) inside the ratio must stay normal.
    const double tau = std::pow(10.0, -std::min(40.0, 250.0 / (m - 1)));

    LadderResult out;
    std::vector<double> x(static_cast<std::size_t>(n), 1.0);
    const auto absorb = [&](const std::vector<double>& d) -> bool {
        const CwBounds cw = collatz_wielandt_bounds(b, d);
        if (cw.zero_tensor) {
            out.lower = 0.0;
            out.upper = 0.0;
            out.vector = d;
            return true;
        }
        if (cw.lower > out.lower) out.lower = cw.lower;
        if (cw.upper < out.upper) {
            out.upper = cw.upper;
            out.vector = d;
        }
        return out.upper - out.lower <= tol;
    };
    std::vector<double> prev2, prev1;
    for (const double eps : {1e-6, 1e-9, 0.0}) {
        double level_mark = std::numeric_limits<double>::infinity();
        for (int it = 0; it < max_iter; ++it) {
            if (absorb(x)) return out;
            // Aitken extrapolation through the last three iterates; any
            // strictly positive probe yields valid bounds, so a jump needs
            // no justification beyond improving the interval.
            if (!prev2.empty()) {
                std::vector<double> cand(static_cast<std::size_t>(n));
                bool usable = true;
                double top = 0.0;
                for (int i = 0; i < n; ++i) {
                    const std::size_t s = static_cast<std::size_t>(i);
                    const double d1 = prev1[s] - prev2[s];
                    const double d2 = x[s] - 2.0 * prev1[s] + prev2[s];
                    double v = (std::fabs(d2) > 1e-300) ? prev2[s] - d1 * d1 / d2 : x[s];
                    if (!std::isfinite(v)) {
                        usable = false;
                        break;
                    }
                    // A vanishing component may extrapolate past zero; land it
                    // on the clamp floor rather than discarding the jump.
                    cand[s] = std::max(v, 0.0);
                    top = std::max(top, cand[s]);
                }
                if (usable && top > 0.0) {
                    for (double& v : cand) v = std::max(v / top, tau);
                    const double before = out.upper - out.lower;
                    if (absorb(cand)) return out;
                    if (out.upper - out.lower < before) x = std::move(cand);
                }
            }
            // Level is pinned near its shift-induced floor; move down.
            if ((it & 127) == 127) {
                const double width = out.upper - out.lower;
                if (width > 0.99 * level_mark) break;
                level_mark = width;
            }
            prev2 = std::move(prev1);
            prev1 = x;
            // First half damped by the diagonal shift, second half without,
            // so nilpotent directions can collapse onto the clamp floor.
            x = power_step(b, x, eps, it < max_iter / 2, tau);
            ++out.iterations;
        }
    }
    return out;
}

/// Index digraph of B restricted to the subset S: edge i -> j when some
/// entry b_{i,i2..im} > 0 has all trailing indices inside S and j among
/// them. B[S] is weakly irreducible when that digraph is strongly connected.
inline bool weakly_irreducible(const Tensor& b, unsigned mask) {
    const int n = b.dim();
    const int m = b.order();
    std::vector<int> nodes;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) nodes.push_back(i);
    if (nodes.size() <= 1) return true;
    std::vector<unsigned> adj(static_cast<std::size_t>(n), 0u);
    const std::size_t row = b.entries().size() / static_cast<std::size_t>(n);
    for (int i : nodes) {
        for (std::size_t t = 0; t < row; ++t) {
            const std::size_t flat = static_cast<std::size_t>(i) * row + t;
            if (b.entries()[flat] <= 0.0) continue;
            std::size_t rem = t;
            unsigned touched = 0u;
            bool inside = true;
            for (int axis = 0; axis < m - 1; ++axis) {
                const int j = static_cast<int>(rem % static_cast<std::size_t>(n));
                rem /= static_cast<std::size_t>(n);
                touched |= 1u << j;
                if (!(mask & (1u << j))) {
                    inside = false;
                    break;
                }
            }
            if (inside) adj[static_cast<std::size_t>(i)] |= touched;
        }
    }
    // Strong connectivity: every node reaches every other within the mask.
    for (int s : nodes) {
        unsigned reach = 1u << s;
        bool grew = true;
        while (grew) {
            grew = false;
            for (int i : nodes)
                if (reach & (1u << i)) {
                    const unsigned add = adj[static_cast<std::size_t>(i)] & mask & ~reach;
                    if (add) {
                        reach |= add;
                        grew = true;
                    }
                }
        }
        if ((reach & mask) != mask) return false;
    }
    return true;
}

}  // namespace detail

/// Power iteration with a decreasing shift ladder, certified by
/// Collatz-Wielandt intervals evaluated on the unshifted tensor. When the
/// ladder on B alone does not close the interval (reducible tensors whose
/// Perron vector has zero entries), the weakly irreducible principal blocks
/// are certified separately: every nonnegative eigenpair restricted to its
/// support is a positive-eigenvector eigenpair of a principal subtensor, so
/// rho(B) = max over weakly irreducible blocks of rho(block), and both
/// bounds transfer as maxima over the blocks. Reported rho is the midpoint
/// of the final interval.
inline SpectralEstimate spectral_radius(const Tensor& b, double tol = 1e-10,
                                        int max_iter = 10000) {
    for (double v : b.entries())
        if (v < 0.0) throw TensorError("spectral_radius: tensor has a negative entry");
    if (!(tol > 0.0)) throw TensorError("spectral_radius: tol must be positive");
    const int n = b.dim();

    detail::LadderResult main = detail::run_ladder(b, tol, max_iter);
    SpectralEstimate est;
    est.lower = main.lower;
    est.upper = main.upper;
    est.vector = std::move(main.vector);
    est.iterations = main.iterations;

    if (est.upper - est.lower > tol && n > 1 && n <= 16) {
        const unsigned full = (1u << n) - 1u;
        double block_lower = 0.0;
        double block_upper = 0.0;
        std::vector<double> block_vector;
        for (unsigned mask = 1; mask <= full; ++mask) {
            if (!detail::weakly_irreducible(b, mask)) continue;
            detail::LadderResult res;
            if (mask == full) {
                res.lower = est.lower;
                res.upper = est.upper;
            } else {
                std::vector<int> idx;
                for (int i = 0; i < n; ++i)
                    if (mask & (1u << i)) idx.push_back(i);
                res = detail::run_ladder(principal_subtensor(b, idx), tol, max_iter);
                est.iterations += res.iterations;
                if (res.lower > est.lower) est.lower = res.lower;
            }
            block_lower = std::max(block_lower, res.lower);
            if (res.upper > block_upper) {
                block_upper = res.upper;
                if (mask != full) {
                    block_vector.assign(static_cast<std::size_t>(n), 0.0);
                    int k = 0;
                    for (int i = 0; i < n; ++i)
                        if (mask & (1u << i))
                            block_vector[static_cast<std::size_t>(i)] =
                                res.vector[static_cast<std::size_t>(k++)];
                } else {
                    block_vector.clear();
                }
            }
        }
        if (block_upper < est.upper) {
            est.upper = block_upper;
            if (!block_vector.empty()) est.vector = std::move(block_vector);
        }
        est.lower = std::max(est.lower, block_lower);
    }

    est.converged = est.upper - est.lower <= tol;
    est.rho = std::isinf(est.upper) ? est.lower : 0.5 * (est.lower + est.upper);
    return est;
}

inline double mu_from_decomposition(const ZDecomposition& dec, double tol = 1e-10) {
    const SpectralEstimate est = spectral_radius(dec.b, tol);
    if (!est.converged)
        throw TensorError("mu: spectral radius did not converge; bounds [" +
                          std::to_string(est.lower) + ", " + std::to_string(est.upper) + "]");
    return dec.r - est.rho;
}

/// mu(A) = r - rho(B) for the canonical Z-decomposition of A.
inline double mu(const Tensor& a, double tol = 1e-10) {
    return mu_from_decomposition(z_decompose(a), tol);
}

/// Residual ||B x^{m-1} - lambda x^{[m-1]}||_inf of a candidate eigenpair.
inline double eigen_residual(const Tensor& b, double lambda, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != b.dim())
        throw TensorError("eigen_residual: vector length mismatch");
    bool nonzero = false;
    for (double v : x)
        if (v != 0.0) nonzero = true;
    if (!nonzero) throw TensorError("eigen_residual: x must be nonzero");
    const std::vector<double> bx = contract(b, x);
    const std::vector<double> xp = power_vec(x, static_cast<double>(b.order() - 1));
    double r = 0.0;
    for (std::size_t i = 0; i < bx.size(); ++i)
        r = std::max(r, std::fabs(bx[i] - lambda * xp[i]));
    return r;
}

}  // namespace tcpkit
