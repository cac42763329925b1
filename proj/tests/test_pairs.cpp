#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace stj;

namespace {

CMat e11() {
    CMat A = zeros(2, 2);
    A(0, 0) = 1;
    return A;
}

RationalMatFun constant(const CMat& C) { return RationalMatFun::constant(C); }

// f(z) = -s0 / (z - alpha)
RationalMatFun point_mass_at(const CMat& s0, double x) { return RationalMatFun::pole_sum(zeros(s0.rows(), s0.rows()), {{x, s0}}); }

StieltjesPair scaled(const StieltjesPair& p) {
    auto th = [](cd z) { return 1.0 + z * z; };
    const auto phi = p.phi, psi = p.psi;
    return StieltjesPair(RationalMatFun::pointwise(p.q(), p.q(), [phi, th](cd z) { return CMat(phi(z) * th(z)); }),
                         RationalMatFun::pointwise(p.q(), p.q(), [psi, th](cd z) { return CMat(psi(z) * th(z)); }),
                         p.alpha);
}

StieltjesPair random_measure_pair(std::mt19937_64& rng, double alpha, int q) {
    return pair_from_function(stieltjes_transform(fx::measure(rng, alpha, q, 2, q)), alpha);
}

}  // namespace

TEST(DefaultGrid, Shape) {
    const auto g = default_grid(1.5);
    EXPECT_EQ(g.size(), 15u);
    int real_left = 0;
    for (cd z : g) real_left += z.imag() == 0.0 && z.real() < 1.5;
    EXPECT_EQ(real_left, 3);
    EXPECT_EQ(equivalence_grid(1.5).size(), 16u);
}

TEST(PairFromFunction, ModelFunctionsAreValidPairs) {
    EXPECT_TRUE(verify_pair(pair_from_function(constant(zeros(2, 2)), 0.0), 1e-9).ok());
    std::mt19937_64 rng(71);
    EXPECT_TRUE(verify_pair(pair_from_function(constant(fx::psd_rank(rng, 2, 1)), 0.0), 1e-9).ok());
    EXPECT_TRUE(verify_pair(pair_from_function(point_mass_at(e11(), 0.0), 0.0), 1e-9).ok());
}

TEST(VerifyPair, ConstantPairs) {
    const StieltjesPair io(constant(identity(2)), constant(zeros(2, 2)), 0.0);
    const auto r = verify_pair(io, 1e-9);
    EXPECT_TRUE(r.ok());
    for (const auto& pt : r.points) {
        if (pt.z.imag() != 0.0) {
            EXPECT_LT(std::abs(pt.kd1), 1e-15);
        }
    }
    const StieltjesPair neg(constant(-identity(2)), constant(identity(2)), 0.0);
    const auto n = verify_pair(neg, 1e-9);
    EXPECT_FALSE(n.re_ok);
    EXPECT_FALSE(n.ok());
    const StieltjesPair flat(constant(zeros(2, 2)), constant(zeros(2, 2)), 0.0);
    EXPECT_FALSE(verify_pair(flat, 1e-9).rank_ok);
}

TEST(VerifyPair, MeasureTransformsPassAndReproduce) {
    std::mt19937_64 rng(72);
    for (int t = 0; t < 30; ++t) {
        const int q = 1 + t % 3;
        const double alpha = fx::uniform(rng, -1, 1);
        const auto f = stieltjes_transform(fx::measure(rng, alpha, q, 1 + t % 4, 1 + t % q));
        const auto p = pair_from_function(f, alpha);
        ASSERT_TRUE(verify_pair(p, 1e-9).ok()) << t;
        for (cd z : p.grid) ASSERT_LT(fro(p.phi(z) * p.psi(z).inverse() - f(z)), 1e-10 * std::max(1.0, fro(f(z))));
    }
}

TEST(VerifyPair, NegativeMeasureFails) {
    const auto f = RationalMatFun::pole_sum(zeros(1, 1), {{1.0, -identity(1)}});
    EXPECT_FALSE(verify_pair(pair_from_function(f, 0.0), 1e-9).ok());
}

TEST(RangeClass, Verdicts) {
    std::mt19937_64 rng(73);
    const StieltjesPair oi(constant(zeros(2, 2)), constant(identity(2)), 0.0);
    EXPECT_TRUE(in_class_P_of(oi, e11(), 1e-9));
    EXPECT_TRUE(in_class_P_of(oi, zeros(2, 2), 1e-9));
    const auto p = random_measure_pair(rng, 0.0, 2);
    EXPECT_TRUE(in_class_P_of(p, fx::psd_rank(rng, 2, 2), 1e-9));
    EXPECT_FALSE(in_class_P_of(p, e11(), 1e-9));
    const auto g = fx::range_function(rng, e11(), 0.0);
    const auto pg = pair_from_function(g, 0.0);
    EXPECT_TRUE(in_class_P_of(pg, e11(), 1e-9));
    EXPECT_TRUE(in_class_P_of(scaled(pg), e11(), 1e-9));  // invariant under equivalence
}

TEST(Equivalence, ScalingSelfAndOrthogonalSpans) {
    std::mt19937_64 rng(74);
    const auto p = random_measure_pair(rng, 0.5, 2);
    EXPECT_TRUE(equivalent(p, p, 1e-10));
    EXPECT_TRUE(equivalent(p, scaled(p), 1e-10));
    EXPECT_TRUE(equivalent(scaled(p), p, 1e-10));
    const StieltjesPair oi(constant(zeros(2, 2)), constant(identity(2)), 0.0);
    const StieltjesPair io(constant(identity(2)), constant(zeros(2, 2)), 0.0);
    EXPECT_FALSE(equivalent(oi, io, 1e-10));
    EXPECT_FALSE(equivalent(p, random_measure_pair(rng, 0.5, 2), 1e-6));
}

TEST(Equivalence, Transitive) {
    std::mt19937_64 rng(75);
    const auto p = random_measure_pair(rng, 0.0, 3);
    const CMat th = fx::gaussian(rng, 3, 3);
    const auto phi = p.phi, psi = p.psi;
    const StieltjesPair p2(RationalMatFun::pointwise(3, 3, [phi, th](cd z) { return CMat(phi(z) * th); }),
                           RationalMatFun::pointwise(3, 3, [psi, th](cd z) { return CMat(psi(z) * th); }), 0.0);
    const auto p3 = scaled(p2);
    EXPECT_TRUE(equivalent(p, p2, 1e-10));
    EXPECT_TRUE(equivalent(p2, p3, 1e-10));
    EXPECT_TRUE(equivalent(p, p3, 1e-10));
}

TEST(GammaEmbed, FullRankIsIdentity) {
    std::mt19937_64 rng(76);
    const auto p = random_measure_pair(rng, 0.0, 2);
    const auto e = gamma_U_embed(p.phi, p.psi, identity(2), fx::psd_rank(rng, 2, 2), 0.0);
    for (cd z : p.grid) {
        EXPECT_LT(fro(e.phi(z) - p.phi(z)), 1e-12);
        EXPECT_LT(fro(e.psi(z) - p.psi(z)), 1e-12);
    }
}

TEST(GammaEmbed, RankOneScalarUnits) {
    CMat U = zeros(2, 1);
    U(0, 0) = 1;
    const auto e = gamma_U_embed(constant(identity(1)), constant(identity(1)), U, e11(), 0.0);
    const cd z(0.3, 0.7);
    EXPECT_LT(fro(e.phi(z) - e11()), 1e-14);
    EXPECT_LT(fro(e.psi(z) - identity(2)), 1e-14);
}

TEST(GammaEmbed, ScalarStieltjesFunctionLandsInRangeClass) {
    std::mt19937_64 rng(77);
    CMat U = zeros(2, 1);
    U(0, 0) = 1;
    const auto f = stieltjes_transform(fx::measure(rng, 0.0, 1, 2, 1));
    const auto e = gamma_U_embed(f, constant(identity(1)), U, e11(), 0.0);
    EXPECT_TRUE(verify_pair(e, 1e-9).ok());
    EXPECT_TRUE(in_class_P_of(e, e11(), 1e-9));
    EXPECT_TRUE(in_diamond(e));
}

TEST(GammaEmbed, RejectsBadBasis) {
    CMat U = zeros(2, 1);
    U(1, 0) = 1;  // spans the wrong line
    EXPECT_THROW(gamma_U_embed(constant(identity(1)), constant(identity(1)), U, e11(), 0.0), PreconditionError);
    CMat V = zeros(2, 1);
    V(0, 0) = 2;  // not normalized
    EXPECT_THROW(gamma_U_embed(constant(identity(1)), constant(identity(1)), V, e11(), 0.0), PreconditionError);
}

TEST(GammaEmbed, InjectiveOnEquivalenceClasses) {
    std::mt19937_64 rng(78);
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
        const int q = 2 + t % 2, r = 1 + t % (q - 1);
        const double alpha = fx::uniform(rng, -1, 1);
        const CMat M = fx::psd_rank(rng, q, r);
        const CMat U = range_basis(M, 1e-9).full().leftCols(r);
        const auto a = random_measure_pair(rng, alpha, r), b = random_measure_pair(rng, alpha, r);
        const auto ea = gamma_U_embed(a.phi, a.psi, U, M, alpha);
        const auto ea2 = gamma_U_embed(scaled(a).phi, scaled(a).psi, U, M, alpha);
        const auto eb = gamma_U_embed(b.phi, b.psi, U, M, alpha);
        ASSERT_TRUE(equivalent(ea, ea2, 1e-9)) << t;
        ASSERT_FALSE(equivalent(ea, eb, 1e-6)) << t;
        ++checked;
    }
    EXPECT_EQ(checked, 50);
}

TEST(GammaExtract, RoundtripAndTrivialPair) {
    std::mt19937_64 rng(79);
    for (int t = 0; t < 20; ++t) {
        const int q = 3, r = 1 + t % 2;
        const CMat M = fx::psd_rank(rng, q, r);
        const CMat U = range_basis(M, 1e-9).full().leftCols(r);
        const auto a = random_measure_pair(rng, 0.2, r);
        const auto e = gamma_U_embed(a.phi, a.psi, U, M, 0.2);
        const auto back = gamma_U_extract(e, U, M);
        ASSERT_TRUE(equivalent(back, a, 1e-9)) << t;
    }
    CMat U = zeros(2, 1);
    U(0, 0) = 1;
    const StieltjesPair oi(constant(zeros(2, 2)), constant(identity(2)), 0.0);
    const auto x = gamma_U_extract(oi, U, e11());
    const cd z(1.0, 1.0);
    EXPECT_LT(fro(x.phi(z)), 1e-15);
    EXPECT_LT(fro(x.psi(z) - identity(1)), 1e-15);
}

TEST(GammaExtract, InvertibleMIsSimilarity) {
    std::mt19937_64 rng(80);
    const CMat U = fx::unitary(rng, 2);
    const auto a = random_measure_pair(rng, 0.0, 2);
    const auto e = gamma_U_embed(a.phi, a.psi, U, fx::psd_rank(rng, 2, 2), 0.0);
    const cd z(-0.5, 1.5);
    EXPECT_LT(fro(e.phi(z) * e.psi(z).inverse() - U * a.phi(z) * U.adjoint()), 1e-10);
}

TEST(Diamond, Verdicts) {
    EXPECT_TRUE(in_diamond(pair_from_function(point_mass_at(e11(), 0.0), 0.0)));
    const auto rep = diamond_report(pair_from_function(point_mass_at(e11(), 0.0), 0.0));
    EXPECT_NEAR(rep.values.back(), 1e-5, 1e-12);
    EXPECT_FALSE(in_diamond(pair_from_function(constant(e11()), 0.0)));
    EXPECT_TRUE(in_diamond(pair_from_function(constant(zeros(2, 2)), 0.0)));
}

TEST(PolyPair, CrossMultipliesScalarDenominators) {
    std::mt19937_64 rng(81);
    const auto f = stieltjes_transform(fx::measure(rng, 0.0, 2, 2, 2));
    const auto g = stieltjes_transform(fx::measure(rng, 0.0, 2, 3, 2));
    const auto pp = poly_pair(f, g);
    const auto p = pair_from_poly(pp, 0.0);
    const cd z(0.4, -0.9);
    EXPECT_LT(fro(p.phi(z) - f(z)), 1e-10);
    EXPECT_LT(fro(p.psi(z) - g(z)), 1e-10);
}
