#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcpkit/classify.hpp"
#include "tcpkit/rootfind.hpp"
#include "tcpkit/sampling.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// TCP(A, q): find x >= 0 with w = A x^{m-1} + q >= 0 and <x, w> = 0,
/// equivalently the zero set of the min-equation min{x, w} = 0. The
/// enumerator walks all supports and is the desk-scale ground truth the
/// iterative solvers are checked against.

struct TCPInstance {
    Tensor a;
    std::vector<double> q;

    TCPInstance(Tensor tensor, std::vector<double> rhs)
        : a(std::move(tensor)), q(std::move(rhs)) {
        if (static_cast<int>(q.size()) != a.dim())
            throw TensorError("TCPInstance: q length does not match tensor dimension");
    }
};

struct TCPSolution {
    std::vector<double> x;
    std::vector<double> w;
    double residual = 0.0;            ///< ||min{x, w}||_inf
    double complementarity_gap = 0.0; ///< <x, w>
};

struct SolutionSet {
    std::vector<TCPSolution> solutions;
    int supports_examined = 0;
    bool complete_within_box = false;
    double box_radius = 0.0;
};

/// Componentwise min{x, F(x) + q}.
inline std::vector<double> residual_phi(const TCPInstance& inst,
                                        const std::vector<double>& x) {
    std::vector<double> w = contract(inst.a, x);
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::min(x[i], w[i] + inst.q[i]);
    return w;
}

struct VerifyOutcome {
    bool accepted = false;
    TCPSolution solution;
};

/// Builds the full solution record and accepts iff x >= -tol, w >= -tol,
/// and |<x, w>| <= tol (1 + ||x||)(1 + ||w||).
inline VerifyOutcome verify_solution(const TCPInstance& inst, const std::vector<double>& x,
                                     double tol = 1e-10) {
    VerifyOutcome out;
    TCPSolution& s = out.solution;
    s.x = x;
    s.w = contract(inst.a, x);
    double gap = 0.0;
    double res = 0.0;
    bool nonneg = true;
    for (std::size_t i = 0; i < s.w.size(); ++i) {
        s.w[i] += inst.q[i];
        gap += x[i] * s.w[i];
        res = std::max(res, std::fabs(std::min(x[i], s.w[i])));
        if (x[i] < -tol || s.w[i] < -tol) nonneg = false;
    }
    s.residual = res;
    s.complementarity_gap = gap;
    out.accepted = nonneg && std::fabs(gap) <= tol * (1.0 + inf_norm(s.x)) *
                                                 (1.0 + inf_norm(s.w));
    return out;
}

/// A u >= 0 with A u^{m-1} + q >= 0, when one can be exhibited: u = 0 for
/// q >= 0, a scaled S-certificate for strong-M Z-tensors, otherwise a
/// deterministic sample search. Absence of a result proves nothing.
inline std::optional<std::vector<double>> feasible_point(const TCPInstance& inst) {
    const int n = inst.a.dim();
    const int m = inst.a.order();
    const auto feasible = [&](const std::vector<double>& u) {
        const std::vector<double> f = contract(inst.a, u);
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f[i] + inst.q[i] < 0.0) return false;
        return true;
    };
    const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
    if (feasible(zero)) return zero;
    if (is_z(inst.a).status == Truth::yes) {
        const PropertyVerdict s = find_positive_d(inst.a);
        if (s.status == Truth::yes) {
            const std::vector<double>& d = *s.certificate.vector;
            const std::vector<double> y = contract(inst.a, d);
            double need = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i)
                need = std::max(need, -inst.q[i] / y[i]);
            double t = std::pow(std::max(need, 0.0), 1.0 / (m - 1)) * (1.0 + 1e-9);
            for (int attempt = 0; attempt < 8; ++attempt, t *= 2.0) {
                std::vector<double> u = d;
                for (double& c : u) c *= t;
                if (feasible(u)) return u;
            }
        }
    }
    for (const double radius : {1.0, 2.0, 4.0, 8.0}) {
        for (int i = 0; i < 256; ++i) {
            std::vector<double> u = halton_point(static_cast<std::uint64_t>(i), n);
            for (double& c : u) c *= radius;
            if (feasible(u)) return u;
        }
    }
    return std::nullopt;
}

/// Semismooth Newton on the min-equation. The active set takes x_i when
/// x_i <= w_i (ties to x); its rows of the Newton matrix are identity rows,
/// the rest are Jacobian rows of F. Damped by backtracking on the residual
/// norm; a verified solution or nothing.
inline std::optional<TCPSolution> solve_newton(const TCPInstance& inst,
                                               std::vector<double> x, double tol = 1e-10,
                                               int max_iter = 100) {
    if (!(tol > 0.0)) throw TensorError("solve_newton: tol must be positive");
    if (static_cast<int>(x.size()) != inst.a.dim())
        throw TensorError("solve_newton: x0 length does not match tensor dimension");
    const int n = inst.a.dim();
    const auto phi = [&](const std::vector<double>& v) { return residual_phi(inst, v); };
    std::vector<double> fx = phi(x);
    double norm = vec_inf_norm(fx);
    for (int it = 0; it < max_iter && norm > 1e-14; ++it) {
        if (vec_inf_norm(x) > 1e8) return std::nullopt;
        const std::vector<double> w = [&] {
            std::vector<double> v = contract(inst.a, x);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += inst.q[i];
            return v;
        }();
        std::vector<double> j = jacobian(inst.a, x);
        for (int i = 0; i < n; ++i) {
            if (x[static_cast<std::size_t>(i)] <= w[static_cast<std::size_t>(i)]) {
                for (int c = 0; c < n; ++c)
                    j[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(c)] = (c == i) ? 1.0 : 0.0;
            }
        }
        std::vector<double> rhs(fx.size());
        for (std::size_t i = 0; i < fx.size(); ++i) rhs[i] = -fx[i];
        LinearSolve step = solve_linear(j, rhs, n);
        if (!step.ok) {
            for (int i = 0; i < n; ++i)
                j[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(i)] += 1e-10;
            step = solve_linear(j, rhs, n);
            if (!step.ok) return std::nullopt;
        }
        double t = 1.0;
        bool accepted = false;
        for (int cut = 0; cut < 40; ++cut) {
            std::vector<double> trial = x;
            for (int i = 0; i < n; ++i)
                trial[static_cast<std::size_t>(i)] += t * step.x[static_cast<std::size_t>(i)];
            std::vector<double> ftrial = phi(trial);
            const double tnorm = vec_inf_norm(ftrial);
            if (tnorm < norm) {
                x = std::move(trial);
                fx = std::move(ftrial);
                norm = tnorm;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    VerifyOutcome v = verify_solution(inst, x, tol);
    if (!v.accepted || v.solution.residual > tol) return std::nullopt;
    return v.solution;
}

/// Least nonnegative solution of A x^{m-1} = q for a strong M-tensor and
/// q >= 0: the monotone fixed-point iteration from 0 under A = rI - B.
inline std::vector<double> solve_tensor_equation(const Tensor& a,
                                                 const std::vector<double>& q,
                                                 double tol = 1e-10,
                                                 int max_iter = 10000) {
    if (static_cast<int>(q.size()) != a.dim())
        throw TensorError("solve_tensor_equation: q length does not match tensor dimension");
    for (double v : q)
        if (v < 0.0) throw TensorError("solve_tensor_equation: q must be nonnegative");
    const StrongMResult sm = is_strong_m(a);
    if (sm.strong.status != Truth::yes)
        throw TensorError("solve_tensor_equation: tensor is not certified strong M");
    const ZDecomposition dec = *sm.decomposition;
    const int n = a.dim();
    const double inv = 1.0 / (a.order() - 1);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int it = 0; it < max_iter; ++it) {
        const std::vector<double> ax = contract(a, x);
        double res = 0.0;
        for (int i = 0; i < n; ++i)
            res = std::max(res, std::fabs(ax[static_cast<std::size_t>(i)] -
                                          q[static_cast<std::size_t>(i)]));
        if (res <= tol) return x;
        std::vector<double> bx = contract(dec.b, x);
        for (int i = 0; i < n; ++i) {
            double& v = bx[static_cast<std::size_t>(i)];
            v = std::pow((v + q[static_cast<std::size_t>(i)]) / dec.r, inv);
        }
        x = std::move(bx);
    }
    throw TensorError("solve_tensor_equation: no convergence within max_iter");
}

namespace detail {

/// Grid starts over [0, box]^k, `grid` points per axis including both ends.
inline std::vector<std::vector<double>> box_grid_starts(int k, double box, int grid) {
    std::vector<std::vector<double>> starts;
    std::vector<int> odo(static_cast<std::size_t>(k), 0);
    while (true) {
        std::vector<double> p(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            p[static_cast<std::size_t>(i)] =
                box * odo[static_cast<std::size_t>(i)] / (grid - 1);
        starts.push_back(std::move(p));
        int axis = 0;
        while (axis < k && ++odo[static_cast<std::size_t>(axis)] == grid) {
            odo[static_cast<std::size_t>(axis)] = 0;
            ++axis;
        }
        if (axis == k) break;
    }
    return starts;
}

}  // namespace detail

/// Walks every support S: x vanishes off S and w = A x^{m-1} + q vanishes
/// on S, a square polynomial system solved by multistart Newton over the
/// box grid. Every kept solution passes verify_solution; completeness is
/// box-relative and only claimed when every start was accounted for.
inline SolutionSet enumerate_solutions(const TCPInstance& inst, double box_radius = 10.0,
                                       int grid = 20, double tol = 1e-10) {
    const int n = inst.a.dim();
    if (n > 4) throw TensorError("enumerate_solutions: dimension capped at 4");
    if (!(box_radius > 0.0) || grid < 2)
        throw TensorError("enumerate_solutions: need box_radius > 0 and grid >= 2");
    SolutionSet set;
    set.box_radius = box_radius;
    set.complete_within_box = true;
    std::vector<TCPSolution> found;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        ++set.supports_examined;
        std::vector<int> support;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) support.push_back(i);
        const int k = static_cast<int>(support.size());
        const auto embed = [&](const std::vector<double>& y) {
            std::vector<double> x(static_cast<std::size_t>(n), 0.0);
            for (int i = 0; i < k; ++i)
                x[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])] =
                    y[static_cast<std::size_t>(i)];
            return x;
        };
        const auto consider = [&](const std::vector<double>& x) {
            const VerifyOutcome v = verify_solution(inst, x, tol);
            if (v.accepted) found.push_back(v.solution);
        };
        if (k == 0) {
            consider(std::vector<double>(static_cast<std::size_t>(n), 0.0));
            continue;
        }
        const VecFn f = [&](const std::vector<double>& y) {
            const std::vector<double> x = embed(y);
            std::vector<double> full = contract(inst.a, x);
            std::vector<double> r(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) {
                const int gi = support[static_cast<std::size_t>(i)];
                r[static_cast<std::size_t>(i)] =
                    full[static_cast<std::size_t>(gi)] + inst.q[static_cast<std::size_t>(gi)];
            }
            return r;
        };
        const JacFn jac = [&](const std::vector<double>& y) {
            const std::vector<double> full = jacobian(inst.a, embed(y));
            std::vector<double> j(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c)
                    j[static_cast<std::size_t>(r) * static_cast<std::size_t>(k) +
                      static_cast<std::size_t>(c)] =
                        full[static_cast<std::size_t>(support[static_cast<std::size_t>(r)]) *
                                 static_cast<std::size_t>(n) +
                             static_cast<std::size_t>(support[static_cast<std::size_t>(c)])];
            return j;
        };
        NewtonOptions opt;
        opt.tol = std::min(tol, 1e-12);
        opt.max_iter = 200;
        opt.box_limit = 50.0 * box_radius;
        const RootSet roots =
            find_roots(f, jac, detail::box_grid_starts(k, box_radius, grid), opt);
        if (!roots.all_accounted) set.complete_within_box = false;
        for (const auto& y : roots.roots) {
            // A multiple root at a support boundary converges with a tiny
            // residual but a smeared location (y_i ~ tol^{1/(m-1)}). Snap
            // near-zero components so the point collapses onto the exact
            // sub-support solution; keep the raw root when snapping breaks
            // verification.
            std::vector<double> snapped = y;
            bool changed = false;
            for (double& c : snapped)
                if (std::fabs(c) <= 1e-3 && c != 0.0) {
                    c = 0.0;
                    changed = true;
                }
            if (changed && verify_solution(inst, embed(snapped), tol).accepted)
                consider(embed(snapped));
            else
                consider(embed(y));
        }
    }
    // Cross-support dedupe: a degenerate solution (x_i = w_i = 0) shows up
    // once per containing support.
    for (const TCPSolution& s : found) {
        bool fresh = true;
        for (const TCPSolution& seen : set.solutions) {
            double dist = 0.0;
            for (std::size_t i = 0; i < s.x.size(); ++i)
                dist = std::max(dist, std::fabs(s.x[i] - seen.x[i]));
            if (dist <= 1e-6) {
                fresh = false;
                break;
            }
        }
        if (fresh) set.solutions.push_back(s);
    }
    std::sort(set.solutions.begin(), set.solutions.end(),
              [](const TCPSolution& a, const TCPSolution& b) { return a.x < b.x; });
    return set;
}

/// Q-property: TCP(A, q) solvable for every q. Exact for Z-tensors, where
/// Q is equivalent to strong M; for general tensors only sampled evidence.
inline PropertyVerdict q_property_probe(const Tensor& a, double tol = 1e-10,
                                        int trials = 16,
                                        std::uint64_t seed = kDefaultSeed) {
    PropertyVerdict v;
    v.property = "q";
    if (is_z(a).status == Truth::yes) {
        const StrongMResult sm = is_strong_m(a, tol);
        v.status = sm.strong.status;
        v.method = sm.strong.method;
        v.certificate = sm.strong.certificate;
        v.certificate.note = "Q equivalent to strong M for Z-tensors";
        return v;
    }
    v.method = Decided::sampled;
    v.status = Truth::unknown;
    const int n = a.dim();
    Rng rng(seed);
    int solved = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> q(static_cast<std::size_t>(n));
        for (double& c : q) c = rng.uniform(-1.0, 1.0);
        const TCPInstance inst(a, q);
        bool ok = false;
        if (n <= 4) {
            ok = !enumerate_solutions(inst, 8.0, 8, tol).solutions.empty();
        } else {
            for (const double s : {0.0, 0.5, 1.0, 2.0}) {
                if (solve_newton(inst, std::vector<double>(static_cast<std::size_t>(n), s),
                                 tol)) {
                    ok = true;
                    break;
                }
            }
        }
        if (ok) ++solved;
    }
    v.certificate.note = std::to_string(solved) + " of " + std::to_string(trials) +
                         " sampled q solved (evidence only)";
    return v;
}

}  // namespace tcpkit
