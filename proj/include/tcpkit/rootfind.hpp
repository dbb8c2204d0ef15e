#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "tcpkit/linalg.hpp"

namespace tcpkit {

/// Damped Newton for small square systems, plus a multistart driver that
/// reports whether every start was accounted for (converged or left the
/// search box). Residual and Jacobian come in as closures so the same
/// machinery serves polynomial systems, Phi kinks excluded by the caller.

using VecFn = std::function<std::vector<double>(const std::vector<double>&)>;
using JacFn = std::function<std::vector<double>(const std::vector<double>&)>;

enum class NewtonOutcome { converged, left_box, stalled, max_iter };

struct NewtonResult {
    std::vector<double> x;
    double residual_norm = 0.0;
    NewtonOutcome outcome = NewtonOutcome::max_iter;
    int iterations = 0;
};

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 200;
    double box_limit = 1e6;  ///< inf-norm bound; beyond it the run counts as exited
};

inline double vec_inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

inline NewtonResult newton_solve(const VecFn& f, const JacFn& jac, std::vector<double> x,
                                 const NewtonOptions& opt = {}) {
    NewtonResult res;
    const int k = static_cast<int>(x.size());
    std::vector<double> fx = f(x);
    double norm = vec_inf_norm(fx);
    int escapes = 0;
    double window_mark = norm;
    const auto kick_iterate = [&] {
        ++escapes;
        const double kick = 0.1 * escapes * (1.0 + vec_inf_norm(x));
        for (int i = 0; i < k; ++i)
            x[static_cast<std::size_t>(i)] += ((i + escapes) % 2 == 0) ? kick : -kick;
        fx = f(x);
        norm = vec_inf_norm(fx);
        window_mark = norm;
    };
    for (int it = 0; it < opt.max_iter; ++it) {
        res.iterations = it;
        if (norm <= opt.tol) {
            res.x = std::move(x);
            res.residual_norm = norm;
            res.outcome = NewtonOutcome::converged;
            return res;
        }
        if (vec_inf_norm(x) > opt.box_limit) {
            res.x = std::move(x);
            res.residual_norm = norm;
            res.outcome = NewtonOutcome::left_box;
            return res;
        }
        std::vector<double> j = jac(x);
        std::vector<double> rhs(fx.size());
        for (std::size_t i = 0; i < fx.size(); ++i) rhs[i] = -fx[i];
        LinearSolve step = solve_linear(j, rhs, k);
        if (!step.ok) {
            // Singular Newton matrix: perturb once and retry this iteration.
            for (int i = 0; i < k; ++i)
                j[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) +
                  static_cast<std::size_t>(i)] += 1e-10;
            step = solve_linear(j, rhs, k);
            if (!step.ok) {
                res.x = std::move(x);
                res.residual_norm = norm;
                res.outcome = NewtonOutcome::stalled;
                return res;
            }
        }
        double t = 1.0;
        bool accepted = false;
        for (int cut = 0; cut < 40; ++cut) {
            std::vector<double> trial = x;
            for (int i = 0; i < k; ++i)
                trial[static_cast<std::size_t>(i)] += t * step.x[static_cast<std::size_t>(i)];
            std::vector<double> ftrial = f(trial);
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
        if (!accepted) {
            // The Newton direction can fail to descend where the Jacobian is
            // singular (first-order flat residual). Fall back to steepest
            // descent on 1/2 ||f||_2^2, which leaves the singular set.
            std::vector<double> grad(static_cast<std::size_t>(k), 0.0);
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c)
                    grad[static_cast<std::size_t>(c)] +=
                        j[static_cast<std::size_t>(r) * static_cast<std::size_t>(k) +
                          static_cast<std::size_t>(c)] *
                        fx[static_cast<std::size_t>(r)];
            const auto sumsq = [](const std::vector<double>& v) {
                double s = 0.0;
                for (double c : v) s += c * c;
                return s;
            };
            const double gnorm = vec_inf_norm(grad);
            if (gnorm > 1e-300) {
                const double base = sumsq(fx);
                double gt = (1.0 + vec_inf_norm(x)) / (1.0 + gnorm);
                for (int cut = 0; cut < 60; ++cut) {
                    std::vector<double> trial = x;
                    for (int i = 0; i < k; ++i)
                        trial[static_cast<std::size_t>(i)] -=
                            gt * grad[static_cast<std::size_t>(i)];
                    std::vector<double> ftrial = f(trial);
                    if (sumsq(ftrial) < base) {
                        x = std::move(trial);
                        fx = std::move(ftrial);
                        norm = vec_inf_norm(fx);
                        accepted = true;
                        break;
                    }
                    gt *= 0.5;
                }
            }
        }
        if (!accepted && escapes < 3) {
            // Stationary point of ||f||^2 that is not a root (e.g. a residual
            // component flat to high order on a coordinate hyperplane). Kick
            // the iterate off it deterministically and keep going.
            kick_iterate();
            continue;
        }
        if (!accepted) {
            res.x = std::move(x);
            res.residual_norm = norm;
            res.outcome = NewtonOutcome::stalled;
            return res;
        }
        // Crawling progress (e.g. crossing a cubic inflection where the
        // Jacobian entry vanishes) burns the budget without failing any
        // single line search; kick out of such plateaus too.
        if (it % 25 == 24) {
            if (norm > 0.9 * window_mark && escapes < 3)
                kick_iterate();
            else
                window_mark = norm;
        }
    }
    if (norm <= opt.tol) {
        res.outcome = NewtonOutcome::converged;
    } else {
        res.outcome = NewtonOutcome::max_iter;
    }
    res.x = std::move(x);
    res.residual_norm = norm;
    res.iterations = opt.max_iter;
    return res;
}

struct RootSet {
    std::vector<std::vector<double>> roots;  ///< deduplicated, lexicographically sorted
    bool all_accounted = true;  ///< every start converged or left the box
};

/// Runs Newton from every start, keeps converged roots, dedupes at
/// dedupe_tol in the inf-norm. Roots are sorted lexicographically so the
/// output is order-independent of the start list.
inline RootSet find_roots(const VecFn& f, const JacFn& jac,
                          const std::vector<std::vector<double>>& starts,
                          const NewtonOptions& opt = {}, double dedupe_tol = 1e-6) {
    RootSet set;
    for (const auto& x0 : starts) {
        const NewtonResult r = newton_solve(f, jac, x0, opt);
        if (r.outcome == NewtonOutcome::converged) {
            bool fresh = true;
            for (const auto& seen : set.roots) {
                double dist = 0.0;
                for (std::size_t i = 0; i < seen.size(); ++i)
                    dist = std::max(dist, std::fabs(seen[i] - r.x[i]));
                if (dist <= dedupe_tol) {
                    fresh = false;
                    break;
                }
            }
            if (fresh) set.roots.push_back(r.x);
        } else if (r.outcome != NewtonOutcome::left_box) {
            set.all_accounted = false;
        }
    }
    std::sort(set.roots.begin(), set.roots.end());
    return set;
}

}  // namespace tcpkit
