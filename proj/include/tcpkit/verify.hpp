#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "tcpkit/classify.hpp"
#include "tcpkit/degree.hpp"
#include "tcpkit/io.hpp"
#include "tcpkit/sampling.hpp"
#include "tcpkit/spectral.hpp"
#include "tcpkit/tcp.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// Cross-module verification suites keyed by a fixed set of tags. Each tag
/// replays one cluster of claims on seeded random instances plus the
/// canonical example tensors; every failure carries the offending tensor
/// serialized for replay.

struct TagOutcome {
    std::string tag;
    int passed = 0;
    int failed = 0;
    int skipped = 0;
    std::vector<std::string> failures;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int generated_instances = 0;
    std::vector<TagOutcome> tags;
    bool all_passed = true;
};

namespace detail {

struct VerifyInstance {
    Tensor b;       ///< nonnegative part
    Tensor a;       ///< r I - b
    double r = 0.0;
    bool strong = false;    ///< certified r > rho(B)
    bool decided = true;    ///< strong-M verdict was not unknown
};

inline Tensor random_nonnegative(Rng& rng, int m, int n, double density) {
    std::vector<double> e(Tensor::size_for(m, n), 0.0);
    for (double& c : e)
        if (rng.uniform01() < density) c = rng.uniform01();
    return Tensor(m, n, std::move(e));
}

/// Z-tensors straddling the strong-M boundary: r = rho-estimate times a
/// factor on either side of 1.
inline std::vector<VerifyInstance> make_pool(Rng& rng, int n_max, const std::vector<int>& m_set,
                                             int instances) {
    const double factors[] = {0.5, 0.9, 1.1, 2.0};
    std::vector<VerifyInstance> pool;
    for (int k = 0; k < instances; ++k) {
        const int m = m_set[static_cast<std::size_t>(k) % m_set.size()];
        const int n =
            2 + (n_max > 2 ? (k / static_cast<int>(m_set.size())) % (n_max - 1) : 0);
        const Tensor b = random_nonnegative(rng, m, n, 0.5);
        const SpectralEstimate est = spectral_radius(b);
        const double rho = est.converged ? est.rho : est.upper;
        const double factor = factors[static_cast<int>(rng.uniform01() * 4.0) % 4];
        const double r = rho > 0.0 ? rho * factor : factor - 0.5;
        std::vector<double> neg = b.entries();
        for (double& c : neg) c = -c;
        VerifyInstance inst{b, add_diagonal(Tensor(m, n, std::move(neg)), r), r, false, true};
        const StrongMResult sm = is_strong_m(inst.a);
        inst.strong = sm.strong.status == Truth::yes;
        inst.decided = sm.strong.status != Truth::unknown;
        pool.push_back(std::move(inst));
    }
    return pool;
}

inline Tensor nonsymmetric_m4(double alpha) {
    std::vector<double> e(Tensor::size_for(4, 2), 0.0);
    const auto set = [&](int i, int j, int k, int l, double v) {
        const std::vector<int> idx{i - 1, j - 1, k - 1, l - 1};
        std::size_t f = 0;
        for (int c : idx) f = f * 2 + static_cast<std::size_t>(c);
        e[f] = v;
    };
    set(1, 1, 1, 1, 1.0);
    set(2, 2, 2, 2, 1.0);
    set(1, 1, 1, 2, -2.0);
    set(1, 1, 2, 2, -alpha);
    return Tensor(4, 2, std::move(e));
}

inline void record(TagOutcome& t, bool ok, const std::string& msg, const Tensor* offender) {
    if (ok) {
        ++t.passed;
    } else {
        ++t.failed;
        t.failures.push_back(offender ? msg + " | tensor: " + serialize_tensor(*offender)
                                      : msg);
    }
}

inline bool same_solution_sets(const std::vector<TCPSolution>& lhs,
                               const std::vector<TCPSolution>& rhs, double tol) {
    if (lhs.size() != rhs.size()) return false;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        double dist = 0.0;
        for (std::size_t c = 0; c < lhs[i].x.size(); ++c)
            dist = std::max(dist, std::fabs(lhs[i].x[c] - rhs[i].x[c]));
        if (dist > tol) return false;
    }
    return true;
}

}  // namespace detail

/// Runs every tag suite on a seeded pool; deterministic given the seed.
inline VerifyReport run_verify(std::uint64_t seed, int n_max = 3,
                               std::vector<int> m_set = {3, 4}, int instances = 12) {
    if (n_max < 2 || n_max > 4) throw TensorError("run_verify: n_max must be in 2..4");
    if (m_set.empty()) throw TensorError("run_verify: m_set must be nonempty");
    if (instances < 1) throw TensorError("run_verify: instances must be positive");

    VerifyReport report;
    report.seed = seed;
    report.generated_instances = instances;

    Rng pool_rng(seed);
    const std::vector<detail::VerifyInstance> pool =
        detail::make_pool(pool_rng, n_max, m_set, instances);
    const Tensor ex0 = detail::nonsymmetric_m4(0.0);
    const Tensor ex4 = detail::nonsymmetric_m4(4.0);
    const Tensor identity3 = Tensor::identity(3, 2);
    const Tensor identity4 = Tensor::identity(4, 2);

    using Suite = std::function<TagOutcome(Rng&)>;
    std::vector<std::pair<std::string, Suite>> suites;

    suites.emplace_back("T3.1", [&](Rng& rng) {
        // Nonzero degree of Phi comes with solvability and a bounded,
        // box-stable solution set.
        TagOutcome t{"T3.1"};
        std::vector<const Tensor*> subjects{&identity3};
        for (const auto& inst : pool)
            if (inst.strong && inst.a.dim() == 2 && subjects.size() < 4)
                subjects.push_back(&inst.a);
        for (const Tensor* a : subjects) {
            const PropertyVerdict r0 = check_r0(*a, 9);
            detail::record(t, r0.status == Truth::yes, "check_r0 not confirmed on strong M",
                           a);
            if (r0.status != Truth::yes) continue;
            const int n = a->dim();
            std::vector<double> q(static_cast<std::size_t>(n));
            for (double& c : q) c = rng.uniform(-1.5, 1.5);
            const SolutionSet base = enumerate_solutions(TCPInstance(*a, q), 6.0, 8);
            detail::record(t, !base.solutions.empty(),
                           "nonzero degree but no solution found", a);
            const SolutionSet doubled = enumerate_solutions(TCPInstance(*a, q), 12.0, 8);
            detail::record(t,
                           detail::same_solution_sets(base.solutions, doubled.solutions, 1e-6),
                           "box doubling changed the solution set under R0", a);
        }
        return t;
    });

    suites.emplace_back("C3.2", [&](Rng& rng) {
        // Each of the four sufficient conditions holds on its canonical
        // witness and TCP stays solvable for sampled q.
        TagOutcome t{"C3.2"};
        detail::record(t, karamardian_check(identity3, {1.0, 1.0}).status == Truth::yes,
                       "Karamardian failed on the identity", &identity3);
        detail::record(
            t,
            check_semimonotone_conditions(identity3, SemimonotoneMode::exact_z).status ==
                Truth::yes,
            "strict semimonotonicity failed on the identity", &identity3);
        detail::record(t,
                       check_copositive_definite(identity3, FormKind::strictly_copositive)
                               .status == Truth::yes,
                       "strict copositivity failed on the identity", &identity3);
        detail::record(t,
                       check_copositive_definite(identity4, FormKind::positive_definite)
                               .status == Truth::yes,
                       "positive definiteness failed on the even-order identity", &identity4);
        detail::record(t, karamardian_check(ex0, {1.0, 1.0}).status == Truth::yes,
                       "Karamardian failed on the alpha = 0 example", &ex0);
        for (const Tensor* a : {&identity3, &ex0}) {
            for (int trial = 0; trial < 2; ++trial) {
                std::vector<double> q{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
                detail::record(t,
                               !enumerate_solutions(TCPInstance(*a, q), 6.0, 8).solutions.empty(),
                               "condition held but TCP unsolved at a sampled q", a);
            }
        }
        return t;
    });

    suites.emplace_back("T4.1", [&](Rng&) {
        // Q equals strong M for Z-tensors; the probe must agree with the
        // spectral verdict whenever both are decided.
        TagOutcome t{"T4.1"};
        for (const auto& inst : pool) {
            const PropertyVerdict q = q_property_probe(inst.a);
            if (!inst.decided || q.status == Truth::unknown) {
                ++t.skipped;
                continue;
            }
            detail::record(t, (q.status == Truth::yes) == inst.strong,
                           "Q-probe disagrees with the strong-M verdict", &inst.a);
        }
        return t;
    });

    suites.emplace_back("T4.2", [&](Rng& rng) {
        // Equivalence of (c) positive d, (d) spectral verdict, (e) exact
        // semimonotonicity, plus closure under nonnegative diagonal increase
        // and the refutation path for a non-Z tensor.
        TagOutcome t{"T4.2"};
        for (const auto& inst : pool) {
            if (!inst.decided) {
                ++t.skipped;
                continue;
            }
            const PropertyVerdict d = find_positive_d(inst.a);
            const PropertyVerdict e = check_semimonotone_conditions(inst.a,
                                                                    SemimonotoneMode::exact_z);
            if (d.status == Truth::unknown || e.status == Truth::unknown) {
                ++t.skipped;
                continue;
            }
            detail::record(t,
                           (d.status == Truth::yes) == inst.strong &&
                               (e.status == Truth::yes) == inst.strong,
                           "positive-d and semimonotone exact paths disagree with strong M",
                           &inst.a);
            if (inst.strong) {
                std::vector<double> diag(static_cast<std::size_t>(inst.a.dim()));
                for (double& c : diag) c = rng.uniform(0.0, 1.0);
                const Tensor lifted = add_diagonal(inst.a, diag);
                detail::record(t, is_strong_m(lifted).strong.status == Truth::yes,
                               "diagonal increase broke strong M", &lifted);
            }
        }
        // Corrupt tensor: one positive off-diagonal entry. The Z refutation
        // must fire and the Z-only equivalences are skipped.
        std::vector<double> bad(Tensor::size_for(3, 2), 0.0);
        bad[0] = 1.0;
        bad[7] = 1.0;
        bad[3] = 0.5;  // entry (1,2,2): positive off-diagonal
        const Tensor corrupt(3, 2, std::move(bad));
        const PropertyVerdict z = is_z(corrupt);
        detail::record(t, z.status == Truth::no && z.certificate.multi_index.has_value(),
                       "corrupt tensor was not refuted by is_z", &corrupt);
        ++t.skipped;
        return t;
    });

    suites.emplace_back("T5.1", [&](Rng& rng) {
        // Even order strong M: degree of F is one and sampled targets all
        // have preimages.
        TagOutcome t{"T5.1"};
        int used = 0;
        for (const auto& inst : pool) {
            if (!inst.strong || inst.a.order() % 2 != 0 || inst.a.dim() != 2) continue;
            if (++used > 3) break;
            const DegreeResult deg = local_degree(inst.a, MapKind::f);
            detail::record(t, deg.consistent && deg.value == 1,
                           "deg(F, 0) != 1 on an even-order strong M tensor", &inst.a);
            for (int trial = 0; trial < 2; ++trial) {
                std::vector<double> q{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
                detail::record(t, !find_preimages(inst.a, q, 6.0, 9).roots.empty(),
                               "sampled q had no preimage under F", &inst.a);
            }
        }
        if (used == 0) ++t.skipped;
        return t;
    });

    suites.emplace_back("T5.3", [&](Rng&) {
        // Principal subtensors of even-order strong M stay strong M with
        // degree one and zero set {0}.
        TagOutcome t{"T5.3"};
        int used = 0;
        for (const auto& inst : pool) {
            if (!inst.strong || inst.a.order() % 2 != 0 || inst.a.dim() > 3) continue;
            if (++used > 3) break;
            const int n = inst.a.dim();
            for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
                std::vector<int> idx;
                for (int i = 0; i < n; ++i)
                    if (mask & (1u << i)) idx.push_back(i);
                const Tensor sub = principal_subtensor(inst.a, idx);
                detail::record(t, is_strong_m(sub).strong.status == Truth::yes,
                               "principal subtensor lost strong M", &sub);
                const DegreeResult deg = local_degree(sub, MapKind::f);
                detail::record(t, deg.consistent && deg.value == 1,
                               "principal subtensor degree != 1", &sub);
                detail::record(t, check_r0(sub, 9).status == Truth::yes,
                               "principal subtensor zero set is not {0}", &sub);
            }
        }
        if (used == 0) ++t.skipped;
        return t;
    });

    suites.emplace_back("T5.4", [&](Rng&) {
        // Extended P agrees with strong M on Z-tensors; even order makes the
        // P-condition coincide; the odd-order scalar splits them.
        TagOutcome t{"T5.4"};
        for (const auto& inst : pool) {
            const ExtendedPResult ep = is_extended_p(inst.a);
            if (!inst.decided || ep.extended_p.status == Truth::unknown) {
                ++t.skipped;
                continue;
            }
            detail::record(t, (ep.extended_p.status == Truth::yes) == inst.strong,
                           "extended-P disagrees with strong M on a Z-tensor", &inst.a);
            if (inst.a.order() % 2 == 0)
                detail::record(t, ep.p_condition.status == ep.extended_p.status,
                               "even order but P-condition differs from extended-P", &inst.a);
        }
        const Tensor scalar(3, 1, {1.0});
        const ExtendedPResult ep = is_extended_p(scalar);
        detail::record(t,
                       ep.extended_p.status == Truth::yes && ep.p_condition.status == Truth::no,
                       "odd-order scalar should be extended-P but not P", &scalar);
        return t;
    });

    suites.emplace_back("T5.5", [&](Rng& rng) {
        // Trailing-index pattern plus strong M gives global uniqueness; the
        // example tensors violate the pattern at entry (1,1,1,2).
        TagOutcome t{"T5.5"};
        for (int build = 0; build < 2; ++build) {
            std::vector<double> entries(Tensor::size_for(4, 2), 0.0);
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k) {
                    const std::vector<int> idx{i, k, k, k};
                    std::size_t f = 0;
                    for (int c : idx) f = f * 2 + static_cast<std::size_t>(c);
                    entries[f] = i == k ? 1.0 + rng.uniform01() : -0.4 * rng.uniform01();
                }
            const Tensor a(4, 2, std::move(entries));
            if (is_strong_m(a).strong.status != Truth::yes) {
                ++t.skipped;
                continue;
            }
            detail::record(t, gus_pattern_check(a).status == Truth::yes,
                           "trailing-pattern strong M not recognized as GUS", &a);
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<double> q{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
                const SolutionSet set = enumerate_solutions(TCPInstance(a, q), 8.0, 10);
                detail::record(t, set.solutions.size() == 1,
                               "GUS tensor gave a non-singleton solution set", &a);
            }
        }
        for (const Tensor* ex : {&ex0, &ex4}) {
            const PropertyVerdict pat = gus_pattern_check(*ex);
            const bool witness_ok = pat.certificate.multi_index.has_value() &&
                                    *pat.certificate.multi_index == std::vector<int>{0, 0, 0, 1};
            detail::record(t, pat.status == Truth::no && witness_ok,
                           "example tensor pattern violation not reported at (1,1,1,2)", ex);
        }
        return t;
    });

    suites.emplace_back("Ex5.2", [&](Rng&) {
        // The canonical example: two TCP solutions at alpha = 0, the exact
        // preimage pair at alpha = 4, strong M with certified rho(B) = 0.
        TagOutcome t{"Ex5.2"};
        const SolutionSet set = enumerate_solutions(TCPInstance(ex0, {0.0, -1.0}), 10.0, 20);
        bool pair_ok = set.solutions.size() == 2;
        if (pair_ok) {
            const auto near2 = [](const std::vector<double>& x, double a, double b) {
                return std::fabs(x[0] - a) <= 1e-8 && std::fabs(x[1] - b) <= 1e-8;
            };
            pair_ok = near2(set.solutions[0].x, 0.0, 1.0) && near2(set.solutions[1].x, 2.0, 1.0);
        }
        detail::record(t, pair_ok, "two-solution enumeration failed at alpha = 0", &ex0);

        const std::vector<double> probe = contract(ex4, {-1.0, 1.0});
        detail::record(t, probe[0] == 1.0 && probe[1] == 1.0,
                       "F(-1,1) != (1,1) at alpha = 4", &ex4);
        const RootSet pre = find_preimages(ex4, {1.0, 1.0}, 6.0, 13);
        bool second = false;
        for (const auto& x : pre.roots) {
            if (x[0] > 3.0) {
                const std::vector<double> fx = contract(ex4, x);
                second = std::fabs(fx[0] - 1.0) <= 1e-8 && std::fabs(fx[1] - 1.0) <= 1e-8 &&
                         std::fabs(x[1] - 1.0) <= 1e-8;
            }
        }
        detail::record(t, second, "second preimage of (1,1) not located", &ex4);

        for (const Tensor* ex : {&ex0, &ex4}) {
            const StrongMResult sm = is_strong_m(*ex);
            const bool ok = is_z(*ex).status == Truth::yes &&
                            sm.strong.status == Truth::yes && sm.rho.has_value() &&
                            sm.rho->upper <= 1e-8;
            detail::record(t, ok, "strong-M verdict with certified rho(B) <= 1e-8 failed", ex);
        }
        return t;
    });

    suites.emplace_back("P2.2", [&](Rng& rng) {
        // Collatz-Wielandt: certified interval brackets rho and every
        // positive d sandwiches it.
        TagOutcome t{"P2.2"};
        for (const auto& inst : pool) {
            const SpectralEstimate est = spectral_radius(inst.b);
            if (!est.converged) {
                ++t.skipped;
                continue;
            }
            detail::record(t, est.lower <= est.rho + 1e-12 && est.rho <= est.upper + 1e-12,
                           "certified interval does not bracket its midpoint", &inst.b);
            bool sandwich = true;
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<double> d(static_cast<std::size_t>(inst.b.dim()));
                for (double& c : d) c = rng.uniform(0.1, 2.0);
                const CwBounds cw = collatz_wielandt_bounds(inst.b, d);
                if (cw.lower > est.upper + 1e-9 || cw.upper < est.lower - 1e-9)
                    sandwich = false;
            }
            detail::record(t, sandwich, "a positive d violated the Collatz-Wielandt sandwich",
                           &inst.b);
        }
        return t;
    });

    suites.emplace_back("P2.4", [&](Rng&) {
        // mu(A) = r - rho(B) is decomposition-independent.
        TagOutcome t{"P2.4"};
        for (const auto& inst : pool) {
            double base = 0.0;
            try {
                base = mu(inst.a);
            } catch (const TensorError&) {
                ++t.skipped;
                continue;
            }
            bool agree = true;
            for (double shift : {0.7, 2.3}) {
                const ZDecomposition shifted{inst.r + shift, add_diagonal(inst.b, shift)};
                try {
                    if (std::fabs(mu_from_decomposition(shifted) - base) > 3e-10) agree = false;
                } catch (const TensorError&) {
                    agree = false;
                }
            }
            detail::record(t, agree, "mu changed across shifted decompositions", &inst.a);
        }
        return t;
    });

    suites.emplace_back("C2.3", [&](Rng&) {
        // Spectral radius is monotone under principal subtensors.
        TagOutcome t{"C2.3"};
        for (const auto& inst : pool) {
            const int n = inst.b.dim();
            if (n > 3) {
                ++t.skipped;
                continue;
            }
            const SpectralEstimate full = spectral_radius(inst.b);
            bool monotone = true;
            for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
                std::vector<int> idx;
                for (int i = 0; i < n; ++i)
                    if (mask & (1u << i)) idx.push_back(i);
                const SpectralEstimate sub = spectral_radius(principal_subtensor(inst.b, idx));
                if (sub.rho > full.rho + 2e-10) monotone = false;
            }
            detail::record(t, monotone, "principal subtensor exceeded the parent radius",
                           &inst.b);
        }
        return t;
    });

    // Tags run concurrently; assembly is ordered by tag list position.
    std::vector<std::future<TagOutcome>> running;
    for (std::size_t i = 0; i < suites.size(); ++i) {
        running.push_back(std::async(std::launch::async, [&, i] {
            Rng rng(seed + 0x9E3779B97F4A7C15ULL * (i + 1));
            return suites[i].second(rng);
        }));
    }
    for (auto& f : running) {
        TagOutcome t = f.get();
        if (t.failed > 0) report.all_passed = false;
        report.tags.push_back(std::move(t));
    }
    return report;
}

inline Json to_json(const VerifyReport& r) {
    Json j = Json::object();
    j["seed"] = r.seed;
    j["generated_instances"] = r.generated_instances;
    j["all_passed"] = r.all_passed;
    j["tags"] = Json::array();
    for (const auto& t : r.tags) {
        Json tag = Json::object();
        tag["tag"] = t.tag;
        tag["passed"] = t.passed;
        tag["failed"] = t.failed;
        tag["skipped"] = t.skipped;
        tag["failures"] = t.failures;
        j["tags"].push_back(std::move(tag));
    }
    return j;
}

inline std::string render_text(const VerifyReport& r) {
    std::string out = "tcpkit verify: seed " + std::to_string(r.seed) + ", " +
                      std::to_string(r.generated_instances) + " generated instances\n";
    for (const auto& t : r.tags) {
        out += "[" + t.tag + "] pass " + std::to_string(t.passed) + " fail " +
               std::to_string(t.failed) + " skip " + std::to_string(t.skipped) + "\n";
        for (const auto& f : t.failures) out += "  FAIL " + f + "\n";
    }
    out += r.all_passed ? "result: PASS\n" : "result: FAIL\n";
    return out;
}

}  // namespace tcpkit
