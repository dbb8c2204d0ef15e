#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcpkit/sampling.hpp"
#include "tcpkit/spectral.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// Tensor-class verdicts with certificates. A true or false decided by the
/// exact or spectral route always carries a certificate an independent check
/// can replay; sampled verdicts never claim true, only false-with-witness or
/// unknown.

enum class Truth { yes, no, unknown };
enum class Decided { exact, spectral, sampled };

inline const char* to_string(Truth t) {
    switch (t) {
        case Truth::yes: return "true";
        case Truth::no: return "false";
        default: return "unknown";
    }
}

inline const char* to_string(Decided d) {
    switch (d) {
        case Decided::exact: return "exact";
        case Decided::spectral: return "spectral";
        default: return "sampled";
    }
}

struct Certificate {
    std::optional<std::vector<double>> vector;           ///< a d > 0 or a witness x
    std::optional<std::vector<int>> multi_index;         ///< offending entry, 0-based
    std::optional<std::pair<double, double>> interval;   ///< certified spectral bracket
    std::string note;
};

struct PropertyVerdict {
    std::string property;
    Truth status = Truth::unknown;
    Decided method = Decided::exact;
    Certificate certificate;
};

struct StrongMResult {
    PropertyVerdict strong;
    PropertyVerdict weak;
    std::optional<ZDecomposition> decomposition;
    std::optional<SpectralEstimate> rho;
};

/// Exact off-diagonal scan; the first positive off-diagonal entry refutes.
inline PropertyVerdict is_z(const Tensor& a) {
    PropertyVerdict v;
    v.property = "z";
    v.method = Decided::exact;
    std::size_t offender = 0;
    if (z_pattern_holds(a, &offender)) {
        v.status = Truth::yes;
        v.certificate.note = "all off-diagonal entries nonpositive";
    } else {
        v.status = Truth::no;
        v.certificate.multi_index = a.multi_index(offender);
        v.certificate.note = "positive off-diagonal entry";
    }
    return v;
}

/// Strong M: r > rho(B) for the canonical decomposition, decided against the
/// certified Collatz-Wielandt interval. Weak M (r >= rho) rides along.
inline StrongMResult is_strong_m(const Tensor& a, double tol = 1e-10) {
    StrongMResult out;
    out.strong.property = "strong-m";
    out.weak.property = "weak-m";
    PropertyVerdict z = is_z(a);
    if (z.status != Truth::yes) {
        out.strong.status = Truth::no;
        out.strong.method = Decided::exact;
        out.strong.certificate = z.certificate;
        out.strong.certificate.note = "not a Z-tensor";
        out.weak = out.strong;
        out.weak.property = "weak-m";
        return out;
    }
    const ZDecomposition dec = z_decompose(a);
    const SpectralEstimate est = spectral_radius(dec.b, tol);
    out.decomposition = dec;
    out.rho = est;
    const auto interval = std::make_pair(est.lower, est.upper);
    out.strong.method = Decided::spectral;
    out.strong.certificate.interval = interval;
    out.weak.method = Decided::spectral;
    out.weak.certificate.interval = interval;
    if (dec.r > est.upper)
        out.strong.status = Truth::yes;
    else if (dec.r <= est.lower)
        out.strong.status = Truth::no;
    else
        out.strong.status = Truth::unknown;
    if (dec.r >= est.upper)
        out.weak.status = Truth::yes;
    else if (dec.r < est.lower)
        out.weak.status = Truth::no;
    else
        out.weak.status = Truth::unknown;
    return out;
}

/// S-tensor search: fixed-point iteration toward A d^{m-1} = e. Any iterate
/// with d > 0 and A d^{m-1} > 0 certifies; when the iteration cannot certify,
/// the certified spectral interval decides false (no positive d exists for a
/// Z-tensor that is not strong M).
inline PropertyVerdict find_positive_d(const Tensor& a, double tol = 1e-10,
                                       int max_iter = 10000) {
    PropertyVerdict v;
    v.property = "s";
    PropertyVerdict z = is_z(a);
    if (z.status != Truth::yes) throw TensorError("find_positive_d: input is not a Z-tensor");
    const int n = a.dim();
    const int m = a.order();
    const ZDecomposition dec = z_decompose(a);
    if (dec.r <= 0.0) {
        // Every diagonal is <= 0 and off-diagonals are <= 0, so every
        // component of A d^{m-1} is <= 0 for d > 0.
        v.status = Truth::no;
        v.method = Decided::exact;
        v.certificate.note = "all rows nonpositive (max diagonal <= 0)";
        return v;
    }
    const auto certified = [&](const std::vector<double>& d) {
        for (double x : d)
            if (!(x > 0.0) || !std::isfinite(x)) return false;
        const std::vector<double> ad = contract(a, d);
        for (double x : ad)
            if (!(x > 0.0)) return false;
        return true;
    };
    std::vector<double> d(static_cast<std::size_t>(n), 1.0);
    const double inv = 1.0 / static_cast<double>(m - 1);
    for (int it = 0; it < max_iter; ++it) {
        if (certified(d)) {
            v.status = Truth::yes;
            v.method = Decided::exact;
            v.certificate.vector = d;
            v.certificate.note = "A d^{m-1} > 0 verified by direct contraction";
            return v;
        }
        if (inf_norm(d) > 1e6) break;  // diverging; no finite fixed point
        std::vector<double> bd = contract(dec.b, d);
        for (int i = 0; i < n; ++i) {
            double& x = bd[static_cast<std::size_t>(i)];
            x = std::pow((x + 1.0) / dec.r, inv);
        }
        d = std::move(bd);
    }
    const StrongMResult sm = is_strong_m(a, tol);
    if (sm.strong.status == Truth::no) {
        v.status = Truth::no;
        v.method = Decided::spectral;
        v.certificate = sm.strong.certificate;
        v.certificate.note = "r <= certified lower bound of rho(B); no positive d exists";
    } else {
        v.status = Truth::unknown;
        v.method = Decided::spectral;
        v.certificate = sm.strong.certificate;
        v.certificate.note = "iteration did not certify within max_iter";
    }
    return v;
}

enum class SemimonotoneMode { exact_z, sampled };

namespace detail {

/// Deterministic simplex resolution by dimension: dense at n = 2, coarser as
/// the grid grows combinatorially.
inline int simplex_resolution(int n) {
    switch (n) {
        case 1: return 200;
        case 2: return 200;
        case 3: return 60;
        case 4: return 25;
        default: return 10;
    }
}

/// Halton point mapped onto the unit simplex by exponential spacing.
inline std::vector<double> halton_simplex(std::uint64_t i, int n) {
    std::vector<double> u = halton_point(i, n);
    double total = 0.0;
    for (double& v : u) {
        v = -std::log(1.0 - v);
        total += v;
    }
    if (total <= 0.0) return std::vector<double>(static_cast<std::size_t>(n), 1.0 / n);
    for (double& v : u) v /= total;
    return u;
}

}  // namespace detail

/// Strictly semi-monotone: max_i x_i (A x^{m-1})_i > 0 for every nonzero
/// x >= 0. Exact mode uses the strong-M equivalence for Z-tensors; sampled
/// mode can only refute (witness) or abstain.
inline PropertyVerdict check_semimonotone_conditions(const Tensor& a,
                                                     SemimonotoneMode mode,
                                                     int samples = 4096,
                                                     double tol = 1e-10) {
    PropertyVerdict v;
    v.property = "strictly-semimonotone";
    if (mode == SemimonotoneMode::exact_z) {
        if (is_z(a).status != Truth::yes)
            throw TensorError("check_semimonotone_conditions: exact mode needs a Z-tensor");
        const StrongMResult sm = is_strong_m(a, tol);
        v.status = sm.strong.status;
        v.method = Decided::spectral;
        v.certificate = sm.strong.certificate;
        return v;
    }
    v.method = Decided::sampled;
    const int n = a.dim();
    const auto probe = [&](const std::vector<double>& x) -> bool {
        const std::vector<double> f = contract(a, x);
        double top = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            top = std::max(top, x[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)]);
        if (top <= 0.0) {
            v.status = Truth::no;
            v.certificate.vector = x;
            v.certificate.note = "max_i x_i (A x^{m-1})_i <= 0 at witness";
            return true;
        }
        return false;
    };
    for (const auto& x : simplex_grid(n, detail::simplex_resolution(n)))
        if (probe(x)) return v;
    for (int i = 0; i < samples; ++i)
        if (probe(detail::halton_simplex(static_cast<std::uint64_t>(i), n))) return v;
    v.status = Truth::unknown;
    v.certificate.note = "no witness among grid and low-discrepancy samples";
    return v;
}

enum class FormKind { strictly_copositive, positive_definite };

/// Sampled refutation of strict copositivity (simplex) or positive
/// definiteness (sphere). Exact shortcuts: odd order makes positive
/// definiteness impossible; a positive diagonal tensor is exactly positive.
inline PropertyVerdict check_copositive_definite(const Tensor& a, FormKind kind,
                                                 int samples = 4096,
                                                 std::uint64_t seed = kDefaultSeed) {
    PropertyVerdict v;
    v.property =
        kind == FormKind::strictly_copositive ? "strictly-copositive" : "positive-definite";
    const int n = a.dim();
    const int m = a.order();

    bool diagonal = true;
    bool diag_positive = true;
    for (std::size_t f = 0; f < a.entries().size(); ++f) {
        const double e = a.entries()[f];
        if (is_diagonal_index(a.multi_index(f))) {
            if (!(e > 0.0)) diag_positive = false;
        } else if (e != 0.0) {
            diagonal = false;
        }
    }
    // The positive-diagonal shortcut needs x_i^m >= 0, which fails for odd
    // order off the nonnegative orthant, so it only covers the definite case
    // when the order is even.
    if (diagonal && diag_positive &&
        (kind == FormKind::strictly_copositive || m % 2 == 0)) {
        v.status = Truth::yes;
        v.method = Decided::exact;
        v.certificate.note = "diagonal tensor with positive diagonal: sum a_i x_i^m";
        return v;
    }

    if (kind == FormKind::positive_definite && m % 2 == 1) {
        // Odd order: quad_form(A, -x) = -quad_form(A, x), so some nonzero x
        // has a nonpositive value.
        v.status = Truth::no;
        v.method = Decided::exact;
        std::vector<double> x(static_cast<std::size_t>(n), 1.0);
        double q = quad_form(a, x);
        Rng rng(seed);
        for (int t = 0; t < 64 && q == 0.0; ++t) {
            x = sphere_sample(rng, n);
            q = quad_form(a, x);
        }
        if (q > 0.0)
            for (double& c : x) c = -c;
        v.certificate.vector = x;
        v.certificate.note = "odd order sign flip";
        return v;
    }

    v.method = Decided::sampled;
    const auto refuted = [&](const std::vector<double>& x) -> bool {
        if (quad_form(a, x) <= 0.0) {
            v.status = Truth::no;
            v.certificate.vector = x;
            v.certificate.note = "quad_form(A, x) <= 0 at witness";
            return true;
        }
        return false;
    };
    if (kind == FormKind::strictly_copositive) {
        for (const auto& x : simplex_grid(n, detail::simplex_resolution(n)))
            if (refuted(x)) return v;
        for (int i = 0; i < samples; ++i)
            if (refuted(detail::halton_simplex(static_cast<std::uint64_t>(i), n))) return v;
    } else {
        Rng rng(seed);
        for (int i = 0; i < n; ++i) {
            std::vector<double> unit(static_cast<std::size_t>(n), 0.0);
            unit[static_cast<std::size_t>(i)] = 1.0;
            if (refuted(unit)) return v;
            unit[static_cast<std::size_t>(i)] = -1.0;
            if (refuted(unit)) return v;
        }
        for (int i = 0; i < samples; ++i)
            if (refuted(sphere_sample(rng, n))) return v;
    }
    v.status = Truth::unknown;
    v.certificate.note = "no witness found by sampling";
    return v;
}

struct ExtendedPResult {
    PropertyVerdict extended_p;   ///< max_i x_i^{m-1} (A x^{m-1})_i > 0 for nonzero x
    PropertyVerdict p_condition;  ///< max_i x_i (A x^{m-1})_i > 0 for nonzero x
};

/// Extended P: for Z-tensors exactly the strong-M condition; the plain
/// P-condition coincides for even order and is probed for odd order (the
/// one-dimensional [1] tensor is the canonical split).
inline ExtendedPResult is_extended_p(const Tensor& a, double tol = 1e-10,
                                     int samples = 4096,
                                     std::uint64_t seed = kDefaultSeed) {
    ExtendedPResult out;
    out.extended_p.property = "extended-p";
    out.p_condition.property = "p-condition";
    const int n = a.dim();
    const int m = a.order();

    const bool z_path = is_z(a).status == Truth::yes;
    if (z_path) {
        const StrongMResult sm = is_strong_m(a, tol);
        out.extended_p.status = sm.strong.status;
        out.extended_p.method = Decided::spectral;
        out.extended_p.certificate = sm.strong.certificate;
    } else {
        out.extended_p.method = Decided::sampled;
        out.extended_p.status = Truth::unknown;
        Rng rng(seed);
        for (int i = 0; i < samples; ++i) {
            const std::vector<double> x = sphere_sample(rng, n);
            const std::vector<double> f = contract(a, x);
            double top = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                const std::size_t s = static_cast<std::size_t>(j);
                top = std::max(top, std::pow(x[s], m - 1) * f[s]);
            }
            if (top <= 0.0) {
                out.extended_p.status = Truth::no;
                out.extended_p.certificate.vector = x;
                break;
            }
        }
    }

    if (m % 2 == 0) {
        // Even order: x^{m-1} carries the sign of x, so the two conditions
        // agree term by term in sign.
        out.p_condition = out.extended_p;
        out.p_condition.property = "p-condition";
        out.p_condition.certificate.note = "even order: equivalent to extended-p";
        return out;
    }
    out.p_condition.method = Decided::sampled;
    out.p_condition.status = Truth::unknown;
    Rng rng(seed + 1);
    const auto refuted = [&](const std::vector<double>& x) -> bool {
        const std::vector<double> f = contract(a, x);
        double top = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            top = std::max(top, x[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(j)]);
        if (top <= 0.0) {
            out.p_condition.status = Truth::no;
            out.p_condition.certificate.vector = x;
            out.p_condition.certificate.note = "max_i x_i (A x^{m-1})_i <= 0 at witness";
            return true;
        }
        return false;
    };
    for (int i = 0; i < n && out.p_condition.status == Truth::unknown; ++i) {
        std::vector<double> unit(static_cast<std::size_t>(n), 0.0);
        unit[static_cast<std::size_t>(i)] = -1.0;
        if (refuted(unit)) break;
        unit[static_cast<std::size_t>(i)] = 1.0;
        if (refuted(unit)) break;
    }
    for (int i = 0; i < samples && out.p_condition.status == Truth::unknown; ++i)
        if (refuted(sphere_sample(rng, n))) break;
    if (out.p_condition.status == Truth::unknown)
        out.p_condition.certificate.note = "no witness found by sampling";
    return out;
}

/// Zero pattern under which uniqueness is certified: only entries
/// a_{i k k ... k} (all trailing indices equal) may be nonzero. GUS requires
/// the pattern, order >= 3, and strong M.
inline PropertyVerdict gus_pattern_check(const Tensor& a, double tol = 1e-10) {
    PropertyVerdict v;
    v.property = "gus-pattern";
    const int m = a.order();
    for (std::size_t f = 0; f < a.entries().size(); ++f) {
        if (a.entries()[f] == 0.0) continue;
        const std::vector<int> idx = a.multi_index(f);
        bool trailing_equal = true;
        for (int axis = 2; axis < m; ++axis)
            if (idx[static_cast<std::size_t>(axis)] != idx[1]) {
                trailing_equal = false;
                break;
            }
        if (!trailing_equal) {
            v.status = Truth::no;
            v.method = Decided::exact;
            v.certificate.multi_index = idx;
            v.certificate.note = "nonzero entry with unequal trailing indices";
            return v;
        }
    }
    if (m < 3) {
        v.status = Truth::no;
        v.method = Decided::exact;
        v.certificate.note = "order < 3";
        return v;
    }
    const StrongMResult sm = is_strong_m(a, tol);
    v.status = sm.strong.status;
    v.method = Decided::spectral;
    v.certificate = sm.strong.certificate;
    if (v.status == Truth::yes)
        v.certificate.note = "pattern a_{i k...k} holds and tensor is strong M";
    else if (v.status == Truth::no)
        v.certificate.note = "pattern holds but tensor is not strong M";
    return v;
}

/// Entrywise diagonal scaling: a_{i1..im} d_{i1} ... d_{im}.
inline Tensor scale_by_diagonal(const Tensor& a, const std::vector<double>& d) {
    if (static_cast<int>(d.size()) != a.dim())
        throw TensorError("scale_by_diagonal: vector length mismatch");
    for (double v : d)
        if (!(v > 0.0)) throw TensorError("scale_by_diagonal: d must be strictly positive");
    std::vector<double> e = a.entries();
    for (std::size_t f = 0; f < e.size(); ++f) {
        double factor = 1.0;
        for (int idx : a.multi_index(f)) factor *= d[static_cast<std::size_t>(idx)];
        e[f] *= factor;
    }
    return Tensor(a.order(), a.dim(), std::move(e));
}

/// Strict diagonal dominance per row: a_{i..i} must exceed the sum of the
/// absolute values of all its other row entries. Margins are reported.
inline PropertyVerdict strict_diag_dominance(const Tensor& a, double tol = 0.0) {
    PropertyVerdict v;
    v.property = "diag-dominance";
    v.method = Decided::exact;
    const int n = a.dim();
    const std::size_t row = a.entries().size() / static_cast<std::size_t>(n);
    std::vector<double> margins(static_cast<std::size_t>(n));
    int worst = 0;
    for (int i = 0; i < n; ++i) {
        double abs_sum = 0.0;
        for (std::size_t t = 0; t < row; ++t)
            abs_sum += std::fabs(a.entries()[static_cast<std::size_t>(i) * row + t]);
        const double diag = a.diag_entry(i);
        margins[static_cast<std::size_t>(i)] = diag - (abs_sum - diag);
        if (margins[static_cast<std::size_t>(i)] < margins[static_cast<std::size_t>(worst)])
            worst = i;
    }
    v.certificate.vector = margins;
    if (margins[static_cast<std::size_t>(worst)] > tol) {
        v.status = Truth::yes;
        v.certificate.note = "all row margins positive";
    } else {
        v.status = Truth::no;
        v.certificate.multi_index = std::vector<int>{worst};
        v.certificate.note = "nonpositive margin at row";
    }
    return v;
}

/// Searches for d > 0 making scale_by_diagonal(A, d) strictly diagonally
/// dominant: seeded by the S-certificate, refined by coordinatewise line
/// search on the minimum margin. Heuristic; unknown is an honest outcome.
inline PropertyVerdict find_dominance_scaling(const Tensor& a, double tol = 1e-10,
                                              int max_iter = 200) {
    PropertyVerdict v;
    v.property = "dominance-scaling";
    const int n = a.dim();
    const auto min_margin = [&](const std::vector<double>& d) -> double {
        const Tensor scaled = scale_by_diagonal(a, d);
        const PropertyVerdict dom = strict_diag_dominance(scaled);
        double worst = std::numeric_limits<double>::infinity();
        for (double m : *dom.certificate.vector) worst = std::min(worst, m);
        return worst;
    };
    std::vector<double> d(static_cast<std::size_t>(n), 1.0);
    if (is_z(a).status == Truth::yes) {
        const PropertyVerdict s = find_positive_d(a, tol);
        if (s.status == Truth::yes) d = *s.certificate.vector;
    }
    double best = min_margin(d);
    for (int round = 0; round < max_iter && best <= 0.0; ++round) {
        bool improved = false;
        for (int i = 0; i < n; ++i) {
            for (const double f : {0.5, 0.8, 1.25, 2.0}) {
                std::vector<double> trial = d;
                trial[static_cast<std::size_t>(i)] *= f;
                const double m = min_margin(trial);
                if (m > best) {
                    best = m;
                    d = std::move(trial);
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
    if (best > 0.0) {
        v.status = Truth::yes;
        v.method = Decided::exact;
        v.certificate.vector = d;
        v.certificate.note = "scaled tensor strictly diagonally dominant";
    } else {
        v.status = Truth::unknown;
        v.method = Decided::exact;
        v.certificate.note = "line search found no dominant scaling";
    }
    return v;
}

struct ClassificationReport {
    std::vector<PropertyVerdict> verdicts;
    std::optional<ZDecomposition> decomposition;
    std::optional<double> mu;
};

/// Full report across the class checks; Z-only checks are skipped (not
/// failed) when the input is not a Z-tensor.
inline ClassificationReport classify_tensor(const Tensor& a, double tol = 1e-10) {
    ClassificationReport rep;
    const PropertyVerdict z = is_z(a);
    rep.verdicts.push_back(z);
    const StrongMResult sm = is_strong_m(a, tol);
    rep.verdicts.push_back(sm.strong);
    rep.verdicts.push_back(sm.weak);
    rep.decomposition = sm.decomposition;
    if (sm.rho && sm.rho->converged && sm.decomposition)
        rep.mu = sm.decomposition->r - sm.rho->rho;
    if (z.status == Truth::yes) {
        rep.verdicts.push_back(find_positive_d(a, tol));
        rep.verdicts.push_back(check_semimonotone_conditions(a, SemimonotoneMode::exact_z,
                                                             4096, tol));
    } else {
        rep.verdicts.push_back(
            check_semimonotone_conditions(a, SemimonotoneMode::sampled, 4096, tol));
    }
    const ExtendedPResult ep = is_extended_p(a, tol);
    rep.verdicts.push_back(ep.extended_p);
    rep.verdicts.push_back(ep.p_condition);
    rep.verdicts.push_back(gus_pattern_check(a, tol));
    rep.verdicts.push_back(check_copositive_definite(a, FormKind::strictly_copositive));
    rep.verdicts.push_back(check_copositive_definite(a, FormKind::positive_definite));
    return rep;
}

}  // namespace tcpkit
