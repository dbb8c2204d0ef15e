// Tensor-class verdicts: exact scans, spectral decisions, sampled
// refutations, and the certificates each of them carries.
#include "tcpkit/classify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tcpkit/tensor.hpp"

namespace {

using tcpkit::Decided;
using tcpkit::FormKind;
using tcpkit::PropertyVerdict;
using tcpkit::SemimonotoneMode;
using tcpkit::Tensor;
using tcpkit::Truth;

TEST(IsZ, AcceptsDiagonalAndNegativeOffDiagonal) {
    EXPECT_EQ(tcpkit::is_z(Tensor::identity(4, 3)).status, Truth::yes);
    EXPECT_EQ(tcpkit::is_z(fixtures::nonsymmetric_m4(4.0)).status, Truth::yes);
    const PropertyVerdict v = tcpkit::is_z(fixtures::build(2, 2, {{{1, 1}, -3.0}}));
    EXPECT_EQ(v.status, Truth::yes);
    EXPECT_EQ(v.method, Decided::exact);
}

TEST(IsZ, ReportsOffendingEntry) {
    const Tensor bad = fixtures::build(4, 2, {{{1, 1, 2, 2}, 1.0}});
    const PropertyVerdict v = tcpkit::is_z(bad);
    EXPECT_EQ(v.status, Truth::no);
    ASSERT_TRUE(v.certificate.multi_index.has_value());
    EXPECT_EQ(*v.certificate.multi_index, (std::vector<int>{0, 0, 1, 1}));
}

TEST(IsStrongM, IdentityAndScaledDiagonal) {
    const auto id = tcpkit::is_strong_m(Tensor::identity(4, 2));
    EXPECT_EQ(id.strong.status, Truth::yes);
    EXPECT_EQ(id.weak.status, Truth::yes);
    EXPECT_EQ(id.strong.method, Decided::spectral);
    ASSERT_TRUE(id.strong.certificate.interval.has_value());
    EXPECT_LT(id.strong.certificate.interval->second, 1.0);

    const std::vector<double> diag{3.0, 5.0};
    const auto d = tcpkit::is_strong_m(Tensor::diagonal(2, 2, diag));
    EXPECT_EQ(d.strong.status, Truth::yes);
    ASSERT_TRUE(d.decomposition.has_value());
    EXPECT_DOUBLE_EQ(d.decomposition->r, 5.0);
}

TEST(IsStrongM, NonsymmetricExampleIsStrongM) {
    const auto sm = tcpkit::is_strong_m(fixtures::nonsymmetric_m4(4.0));
    EXPECT_EQ(sm.strong.status, Truth::yes);
    ASSERT_TRUE(sm.rho.has_value());
    EXPECT_LE(sm.rho->upper, 1e-8);
}

TEST(IsStrongM, BoundaryIsWeakOnly) {
    // A = I - [[0,1],[1,0]] has r = 1 = rho(B) exactly; the uniform vector
    // is the Perron vector, so the interval collapses and weak M is certain.
    const Tensor a = fixtures::build(
        2, 2, {{{1, 1}, 1.0}, {{2, 2}, 1.0}, {{1, 2}, -1.0}, {{2, 1}, -1.0}});
    const auto sm = tcpkit::is_strong_m(a);
    EXPECT_EQ(sm.strong.status, Truth::no);
    EXPECT_EQ(sm.weak.status, Truth::yes);
}

TEST(IsStrongM, ZeroTensorIsWeakNotStrong) {
    const auto sm = tcpkit::is_strong_m(Tensor::zeros(3, 2));
    EXPECT_EQ(sm.strong.status, Truth::no);
    EXPECT_EQ(sm.weak.status, Truth::yes);
}

TEST(IsStrongM, NonZTensorIsRefusedExactly) {
    const auto sm = tcpkit::is_strong_m(fixtures::build(3, 2, {{{1, 2, 2}, 0.25}}));
    EXPECT_EQ(sm.strong.status, Truth::no);
    EXPECT_EQ(sm.strong.method, Decided::exact);
    EXPECT_TRUE(sm.strong.certificate.multi_index.has_value());
    EXPECT_FALSE(sm.decomposition.has_value());
}

TEST(FindPositiveD, IdentityCertifiesAtFirstIterate) {
    for (int m : {2, 3, 4}) {
        const PropertyVerdict v = tcpkit::find_positive_d(Tensor::identity(m, 3));
        EXPECT_EQ(v.status, Truth::yes);
        EXPECT_EQ(v.method, Decided::exact);
        ASSERT_TRUE(v.certificate.vector.has_value());
        for (double c : *v.certificate.vector) EXPECT_DOUBLE_EQ(c, 1.0);
    }
}

TEST(FindPositiveD, CertificateReverifiesAgainstOracle) {
    const Tensor a = fixtures::nonsymmetric_m4(4.0);
    const PropertyVerdict v = tcpkit::find_positive_d(a);
    ASSERT_EQ(v.status, Truth::yes);
    ASSERT_TRUE(v.certificate.vector.has_value());
    const std::vector<double>& d = *v.certificate.vector;
    const std::vector<double> ad = oracle::naive_contract(a, d);
    for (double c : d) EXPECT_GT(c, 0.0);
    for (double c : ad) EXPECT_GT(c, 0.0);
}

TEST(FindPositiveD, NegativeIdentityIsExactlyFalse) {
    const PropertyVerdict v = tcpkit::find_positive_d(
        fixtures::build(3, 2, {{{1, 1, 1}, -1.0}, {{2, 2, 2}, -1.0}}));
    EXPECT_EQ(v.status, Truth::no);
    EXPECT_EQ(v.method, Decided::exact);
}

TEST(FindPositiveD, BoundaryTensorIsFalseViaSpectralInterval) {
    // Weak-but-not-strong M: no positive d can exist.
    const Tensor a = fixtures::build(
        2, 2, {{{1, 1}, 1.0}, {{2, 2}, 1.0}, {{1, 2}, -1.0}, {{2, 1}, -1.0}});
    const PropertyVerdict v = tcpkit::find_positive_d(a, 1e-10, 2000);
    EXPECT_EQ(v.status, Truth::no);
    EXPECT_EQ(v.method, Decided::spectral);
    EXPECT_TRUE(v.certificate.interval.has_value());
}

TEST(FindPositiveD, ThrowsOnNonZ) {
    EXPECT_THROW(tcpkit::find_positive_d(fixtures::build(3, 2, {{{1, 2, 2}, 1.0}})),
                 tcpkit::TensorError);
}

TEST(Semimonotone, ExactModeDelegatesToStrongM) {
    const PropertyVerdict v = tcpkit::check_semimonotone_conditions(
        fixtures::nonsymmetric_m4(4.0), SemimonotoneMode::exact_z);
    EXPECT_EQ(v.status, Truth::yes);
    EXPECT_EQ(v.method, Decided::spectral);
    EXPECT_THROW(tcpkit::check_semimonotone_conditions(
                     fixtures::build(3, 2, {{{1, 2, 2}, 1.0}}), SemimonotoneMode::exact_z),
                 tcpkit::TensorError);
}

TEST(Semimonotone, SampledFindsVertexWitness) {
    const Tensor neg = fixtures::build(2, 2, {{{1, 1}, -1.0}, {{2, 2}, -1.0}});
    const PropertyVerdict v =
        tcpkit::check_semimonotone_conditions(neg, SemimonotoneMode::sampled);
    EXPECT_EQ(v.status, Truth::no);
    EXPECT_EQ(v.method, Decided::sampled);
    ASSERT_TRUE(v.certificate.vector.has_value());
    const std::vector<double>& x = *v.certificate.vector;
    const std::vector<double> f = oracle::naive_contract(neg, x);
    double top = -1e300;
    for (std::size_t i = 0; i < x.size(); ++i) top = std::max(top, x[i] * f[i]);
    EXPECT_LE(top, 0.0);
}

TEST(Semimonotone, SampledNeverClaimsTrue) {
    const PropertyVerdict v = tcpkit::check_semimonotone_conditions(
        Tensor::identity(2, 2), SemimonotoneMode::sampled, 256);
    EXPECT_EQ(v.status, Truth::unknown);
}

TEST(CopositiveDefinite, PositiveDiagonalShortcut) {
    const PropertyVerdict pd =
        tcpkit::check_copositive_definite(Tensor::identity(4, 3), FormKind::positive_definite);
    EXPECT_EQ(pd.status, Truth::yes);
    EXPECT_EQ(pd.method, Decided::exact);
    const PropertyVerdict cp = tcpkit::check_copositive_definite(
        Tensor::identity(3, 2), FormKind::strictly_copositive);
    EXPECT_EQ(cp.status, Truth::yes);
}

TEST(CopositiveDefinite, OddOrderIsNeverPositiveDefinite) {
    const PropertyVerdict v = tcpkit::check_copositive_definite(
        fixtures::one_dim_square(), FormKind::positive_definite);
    EXPECT_EQ(v.status, Truth::no);
    EXPECT_EQ(v.method, Decided::exact);
    ASSERT_TRUE(v.certificate.vector.has_value());
    EXPECT_LE(oracle::naive_quad_form(fixtures::one_dim_square(), *v.certificate.vector),
              0.0);
}

TEST(CopositiveDefinite, NegativeIdentityRefutedWithWitness) {
    const Tensor neg = fixtures::build(2, 2, {{{1, 1}, -1.0}, {{2, 2}, -1.0}});
    for (FormKind kind : {FormKind::strictly_copositive, FormKind::positive_definite}) {
        const PropertyVerdict v = tcpkit::check_copositive_definite(neg, kind);
        EXPECT_EQ(v.status, Truth::no);
        ASSERT_TRUE(v.certificate.vector.has_value());
        EXPECT_LE(oracle::naive_quad_form(neg, *v.certificate.vector), 0.0);
    }
}

TEST(CopositiveDefinite, GridCatchesInteriorSignChange) {
    // q(x) = x1^4 - 2 x1^3 x2 + x2^4 dips negative near (0.6, 0.4).
    const PropertyVerdict v = tcpkit::check_copositive_definite(
        fixtures::nonsymmetric_m4(0.0), FormKind::strictly_copositive);
    EXPECT_EQ(v.status, Truth::no);
    ASSERT_TRUE(v.certificate.vector.has_value());
    EXPECT_LE(oracle::naive_quad_form(fixtures::nonsymmetric_m4(0.0), *v.certificate.vector),
              0.0);
}

TEST(CopositiveDefinite, ZeroDiagonalEntryRefutesDefiniteness) {
    const Tensor a = fixtures::build(2, 2, {{{1, 1}, 1.0}});
    const PropertyVerdict v =
        tcpkit::check_copositive_definite(a, FormKind::positive_definite);
    EXPECT_EQ(v.status, Truth::no);
}

TEST(ExtendedP, OneDimensionalOddOrderSplitsTheConditions) {
    const auto r = tcpkit::is_extended_p(fixtures::one_dim_square());
    EXPECT_EQ(r.extended_p.status, Truth::yes);
    EXPECT_EQ(r.extended_p.method, Decided::spectral);
    EXPECT_EQ(r.p_condition.status, Truth::no);
    ASSERT_TRUE(r.p_condition.certificate.vector.has_value());
    EXPECT_DOUBLE_EQ((*r.p_condition.certificate.vector)[0], -1.0);
}

TEST(ExtendedP, EvenOrderConditionsCoincide) {
    const auto r = tcpkit::is_extended_p(fixtures::nonsymmetric_m4(0.0));
    EXPECT_EQ(r.extended_p.status, Truth::yes);
    EXPECT_EQ(r.p_condition.status, Truth::yes);

    const Tensor neg = fixtures::build(2, 2, {{{1, 1}, -1.0}, {{2, 2}, -1.0}});
    const auto rn = tcpkit::is_extended_p(neg);
    EXPECT_EQ(rn.extended_p.status, Truth::no);
    EXPECT_EQ(rn.p_condition.status, Truth::no);
}

TEST(ExtendedP, NonZTensorRefutedBySampling) {
    // F(x) = (x2, x1): opposite-sign coordinates give a nonpositive max.
    const Tensor a = fixtures::build(2, 2, {{{1, 2}, 1.0}, {{2, 1}, 1.0}});
    const auto r = tcpkit::is_extended_p(a);
    EXPECT_EQ(r.extended_p.status, Truth::no);
    EXPECT_EQ(r.extended_p.method, Decided::sampled);
    ASSERT_TRUE(r.extended_p.certificate.vector.has_value());
}

TEST(GusPattern, TrailingPatternWithStrongMPasses) {
    const PropertyVerdict v = tcpkit::gus_pattern_check(fixtures::trailing_pattern_m4());
    EXPECT_EQ(v.status, Truth::yes);
    EXPECT_EQ(tcpkit::gus_pattern_check(Tensor::identity(3, 3)).status, Truth::yes);
}

TEST(GusPattern, MixedTrailingEntryRefutes) {
    const PropertyVerdict v = tcpkit::gus_pattern_check(fixtures::nonsymmetric_m4(0.0));
    EXPECT_EQ(v.status, Truth::no);
    EXPECT_EQ(v.method, Decided::exact);
    ASSERT_TRUE(v.certificate.multi_index.has_value());
    EXPECT_EQ(*v.certificate.multi_index, (std::vector<int>{0, 0, 0, 1}));
}

TEST(GusPattern, MatrixOrderRefused) {
    EXPECT_EQ(tcpkit::gus_pattern_check(Tensor::identity(2, 2)).status, Truth::no);
}

TEST(ScaleByDiagonal, MatrixExample) {
    const Tensor a = fixtures::build(
        2, 2, {{{1, 1}, 2.0}, {{1, 2}, -1.0}, {{2, 1}, -1.0}, {{2, 2}, 2.0}});
    const Tensor s = tcpkit::scale_by_diagonal(a, {1.0, 2.0});
    const Tensor want = fixtures::build(
        2, 2, {{{1, 1}, 2.0}, {{1, 2}, -2.0}, {{2, 1}, -2.0}, {{2, 2}, 8.0}});
    EXPECT_EQ(s.entries(), want.entries());
}

TEST(ScaleByDiagonal, IdentityVectorIsANoOp) {
    const Tensor a = fixtures::nonsymmetric_m4(4.0);
    EXPECT_EQ(tcpkit::scale_by_diagonal(a, {1.0, 1.0}).entries(), a.entries());
}

TEST(ScaleByDiagonal, ComposesMultiplicatively) {
    const Tensor a = fixtures::nonsymmetric_m4(0.0);
    const std::vector<double> d1{2.0, 0.5};
    const std::vector<double> d2{1.5, 3.0};
    const Tensor once = tcpkit::scale_by_diagonal(tcpkit::scale_by_diagonal(a, d1), d2);
    const Tensor both = tcpkit::scale_by_diagonal(a, {d1[0] * d2[0], d1[1] * d2[1]});
    for (std::size_t f = 0; f < once.entries().size(); ++f)
        EXPECT_NEAR(once.entries()[f], both.entries()[f], 1e-12);
}

TEST(ScaleByDiagonal, RejectsBadVectors) {
    const Tensor a = Tensor::identity(3, 2);
    EXPECT_THROW(tcpkit::scale_by_diagonal(a, {1.0}), tcpkit::TensorError);
    EXPECT_THROW(tcpkit::scale_by_diagonal(a, {1.0, 0.0}), tcpkit::TensorError);
    EXPECT_THROW(tcpkit::scale_by_diagonal(a, {1.0, -2.0}), tcpkit::TensorError);
}

TEST(DiagDominance, IdentityHasUnitMargins) {
    const PropertyVerdict v = tcpkit::strict_diag_dominance(Tensor::identity(2, 3));
    EXPECT_EQ(v.status, Truth::yes);
    ASSERT_TRUE(v.certificate.vector.has_value());
    for (double m : *v.certificate.vector) EXPECT_DOUBLE_EQ(m, 1.0);
}

TEST(DiagDominance, ReportsWorstRow) {
    const Tensor a = fixtures::build(2, 2, {{{1, 1}, 1.0}, {{1, 2}, -2.0}, {{2, 2}, 1.0}});
    const PropertyVerdict v = tcpkit::strict_diag_dominance(a);
    EXPECT_EQ(v.status, Truth::no);
    ASSERT_TRUE(v.certificate.multi_index.has_value());
    EXPECT_EQ((*v.certificate.multi_index)[0], 0);
    EXPECT_DOUBLE_EQ((*v.certificate.vector)[0], -1.0);
    EXPECT_DOUBLE_EQ((*v.certificate.vector)[1], 1.0);
}

TEST(DiagDominance, HigherOrderRowSums) {
    const Tensor a =
        fixtures::build(3, 2, {{{1, 1, 1}, 1.0}, {{1, 2, 2}, -0.3}, {{2, 2, 2}, 1.0}});
    const PropertyVerdict v = tcpkit::strict_diag_dominance(a);
    EXPECT_EQ(v.status, Truth::yes);
    EXPECT_NEAR((*v.certificate.vector)[0], 0.7, 1e-15);
}

TEST(DominanceScaling, FindsScalingForStrongM) {
    const Tensor a = fixtures::build(2, 2, {{{1, 1}, 1.0}, {{1, 2}, -2.0}, {{2, 2}, 1.0}});
    const PropertyVerdict v = tcpkit::find_dominance_scaling(a);
    ASSERT_EQ(v.status, Truth::yes);
    ASSERT_TRUE(v.certificate.vector.has_value());
    const Tensor scaled = tcpkit::scale_by_diagonal(a, *v.certificate.vector);
    EXPECT_EQ(tcpkit::strict_diag_dominance(scaled).status, Truth::yes);
}

TEST(DominanceScaling, AlreadyDominantKeepsUniformVector) {
    const PropertyVerdict v = tcpkit::find_dominance_scaling(Tensor::identity(4, 2));
    ASSERT_EQ(v.status, Truth::yes);
    for (double c : *v.certificate.vector) EXPECT_DOUBLE_EQ(c, 1.0);
}

TEST(DominanceScaling, BoundaryTensorStaysUnknown) {
    // d1 > d2 and d2 > d1 would both be required; no scaling exists.
    const Tensor a = fixtures::build(
        2, 2, {{{1, 1}, 1.0}, {{2, 2}, 1.0}, {{1, 2}, -1.0}, {{2, 1}, -1.0}});
    EXPECT_EQ(tcpkit::find_dominance_scaling(a, 1e-10, 20).status, Truth::unknown);
}

// Strong M, the positive-d certificate, and exact semimonotonicity must
// agree on random Z-tensors built to straddle the boundary r = rho(B).
TEST(Equivalences, StrongMAndPositiveDAgreeOnRandomZTensors) {
    oracle::TestRng rng(0xC1A55);
    int unknowns = 0;
    int trials = 0;
    const double factors[] = {0.5, 0.9, 1.1, 2.0};
    for (int t = 0; t < 40; ++t) {
        const int m = rng.uniform_int(2, 4);
        const int n = rng.uniform_int(2, 4);
        const Tensor b = oracle::random_nonnegative_tensor(rng, m, n, 0.5);
        const double rho = tcpkit::spectral_radius(b).rho;
        if (rho < 1e-6) continue;
        const double r = rho * factors[t % 4];
        std::vector<double> e = b.entries();
        for (double& x : e) x = -x;
        const Tensor a = tcpkit::add_diagonal(Tensor(m, n, std::move(e)), r);
        ++trials;

        const auto sm = tcpkit::is_strong_m(a);
        const PropertyVerdict s = tcpkit::find_positive_d(a);
        if (sm.strong.status == Truth::unknown || s.status == Truth::unknown) {
            ++unknowns;
            continue;
        }
        EXPECT_EQ(sm.strong.status, s.status)
            << "m=" << m << " n=" << n << " r=" << r << " rho=" << rho;
        if (s.status == Truth::yes) {
            const std::vector<double>& d = *s.certificate.vector;
            const std::vector<double> ad = oracle::naive_contract(a, d);
            for (double c : ad) EXPECT_GT(c, 0.0);
        }
    }
    ASSERT_GT(trials, 30);
    EXPECT_LE(unknowns * 10, trials);
}

TEST(Equivalences, StrongMClosedUnderDiagonalIncrease) {
    oracle::TestRng rng(0xD1A6);
    for (int t = 0; t < 8; ++t) {
        const int m = rng.uniform_int(2, 4);
        const int n = rng.uniform_int(2, 3);
        const Tensor b = oracle::random_nonnegative_tensor(rng, m, n, 0.5);
        const double rho = tcpkit::spectral_radius(b).rho;
        std::vector<double> e = b.entries();
        for (double& x : e) x = -x;
        const Tensor a = tcpkit::add_diagonal(Tensor(m, n, std::move(e)), rho * 1.5 + 0.1);
        ASSERT_EQ(tcpkit::is_strong_m(a).strong.status, Truth::yes);
        EXPECT_EQ(tcpkit::is_strong_m(tcpkit::add_diagonal(a, 0.75)).strong.status,
                  Truth::yes);
    }
}

TEST(ClassifyTensor, FullReportForIdentity) {
    const tcpkit::ClassificationReport rep = tcpkit::classify_tensor(Tensor::identity(4, 2));
    ASSERT_TRUE(rep.mu.has_value());
    EXPECT_NEAR(*rep.mu, 1.0, 1e-9);
    ASSERT_TRUE(rep.decomposition.has_value());
    for (const PropertyVerdict& v : rep.verdicts) {
        if (v.property == "z" || v.property == "strong-m" || v.property == "weak-m" ||
            v.property == "s" || v.property == "strictly-semimonotone" ||
            v.property == "extended-p" || v.property == "p-condition" ||
            v.property == "gus-pattern" || v.property == "strictly-copositive" ||
            v.property == "positive-definite") {
            EXPECT_EQ(v.status, Truth::yes) << v.property;
        }
    }
}

TEST(ClassifyTensor, NonZReportSkipsZOnlyChecks) {
    const tcpkit::ClassificationReport rep =
        tcpkit::classify_tensor(fixtures::build(2, 2, {{{1, 2}, 1.0}, {{2, 1}, 1.0}}));
    EXPECT_FALSE(rep.mu.has_value());
    EXPECT_FALSE(rep.decomposition.has_value());
    bool has_s = false;
    bool sampled_semimono = false;
    for (const PropertyVerdict& v : rep.verdicts) {
        if (v.property == "s") has_s = true;
        if (v.property == "strictly-semimonotone" && v.method == Decided::sampled)
            sampled_semimono = true;
    }
    EXPECT_FALSE(has_s);
    EXPECT_TRUE(sampled_semimono);
}

}  // namespace
