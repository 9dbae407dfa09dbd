#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace pencil;
using pencil::testing::random_polynomial;
using pencil::testing::random_series;
using pencil::testing::rseries;

namespace
{

rational_polynomial poly(std::initializer_list<long> c)
{
    return rational_polynomial(std::vector<rational>(c.begin(), c.end()));
}

} // namespace

TEST(SatCurve, IdentityComposition)
{
    const auto e = euler_series<rational>(12);
    const auto s = build_sat_curve<rational>({{e}, {poly({0, 1})}, 0, 1});
    ASSERT_EQ(s.curve.dim(), 2u);
    EXPECT_EQ(s.curve[0], rational_series::monomial(1, 12));
    EXPECT_EQ(s.curve[1], e);
    EXPECT_TRUE(s.warnings.empty());
}

TEST(SatCurve, TailsOfEuler)
{
    const auto e = euler_series<rational>(8);
    const auto s = build_sat_curve<rational>({{e}, {poly({0, 1}), poly({0, 2})}, 1, 1});
    ASSERT_EQ(s.curve.dim(), 3u);
    EXPECT_EQ(s.curve[1], rseries({0, 1, 2, 6, 24, 120, 720, 5040}));
    EXPECT_EQ(s.curve[2], rseries({0, 2, 8, 48, 384, 3840, 46080, 645120}));
    EXPECT_TRUE(s.warnings.empty());
}

TEST(SatCurve, ComponentOrderGroupsByPolynomial)
{
    const auto e = euler_series<rational>(6);
    const auto f = rseries({0, 1, 0, 0, 0, 0, 0});
    const auto s = build_sat_curve<rational>({{e, f}, {poly({0, 1}), poly({0, 3})}, 0, 1});
    ASSERT_EQ(s.curve.dim(), 5u);
    EXPECT_EQ(s.curve[1], e);
    EXPECT_EQ(s.curve[2], f);
    EXPECT_EQ(s.curve[3], compose(e, poly({0, 3})));
    EXPECT_EQ(s.curve[4], compose(f, poly({0, 3})));
}

TEST(SatCurve, Warnings)
{
    const auto e = euler_series<rational>(6);
    const auto neg = build_sat_curve<rational>({{e}, {poly({0, -1})}, 0, 1});
    EXPECT_EQ(neg.warnings, std::vector<std::string>{"P_1 is not positive"});
    const auto wide = build_sat_curve<rational>({{e}, {poly({0, 1, 1})}, 0, 1});
    EXPECT_EQ(wide.warnings, std::vector<std::string>{"P_1 is not 1-short"});
    const auto dup = build_sat_curve<rational>({{e}, {poly({0, 2}), poly({0, 2})}, 0, 1});
    EXPECT_EQ(dup.warnings, std::vector<std::string>{"P_1 and P_2 coincide"});
}

TEST(RelationSearch, Parabola)
{
    const auto c = parse_curve<rational>("x, x^2", 12);
    const auto rb = relation_search(c, 2, 12);
    EXPECT_EQ(rb.monomial_count(), 6u);
    ASSERT_EQ(rb.basis.size(), 1u);
    EXPECT_EQ(rb.relation_text(0), "y1 - x^2");
    EXPECT_TRUE(rb.verified);
    EXPECT_FALSE(rb.transcendence_evidence);
}

TEST(RelationSearch, EulerCurvesHaveTrivialKernels)
{
    const auto xi1 = parse_curve<rational>("x, E(x), E(2*x)", 40);
    const auto r1 = relation_search(xi1, 3, 40);
    EXPECT_EQ(r1.monomial_count(), 20u);
    EXPECT_TRUE(r1.basis.empty());
    EXPECT_TRUE(r1.transcendence_evidence);
    EXPECT_GE(r1.evidence_margin, 20);

    const auto e = parse_curve<rational>("x, E(x)", 60);
    const auto r2 = relation_search(e, 4, 60);
    EXPECT_EQ(r2.monomial_count(), 15u);
    EXPECT_TRUE(r2.basis.empty());
    EXPECT_TRUE(r2.transcendence_evidence);
    EXPECT_GE(r2.evidence_margin, 15);
}

TEST(RelationSearch, Preconditions)
{
    const auto c = parse_curve<rational>("x, x^2", 12);
    EXPECT_THROW(relation_search(c, 2, 13), order_exceeded);
    const auto thin = relation_search(c, 2, 4);
    EXPECT_FALSE(thin.warnings.empty());
    EXPECT_FALSE(thin.transcendence_evidence);

    precision_scope scope(128);
    const auto f = parse_curve<big_float>("x, x^2", 12);
    EXPECT_THROW(relation_search(f, 2, 12), exactness_required);
}

TEST(RelationSearch, KernelDimensionMonotone)
{
    const auto c = parse_curve<rational>("x, x^2 + x^3, x^3", 30);
    for (std::size_t d = 1; d <= 3; ++d) {
        std::size_t prev = SIZE_MAX;
        for (std::size_t N = 4; N <= 30; N += 2) {
            const auto rb = relation_search(c, d, N);
            EXPECT_LE(rb.basis.size(), prev) << "d=" << d << " N=" << N;
            prev = rb.basis.size();
            EXPECT_TRUE(rb.verified);
            if (d > 1) {
                EXPECT_GE(rb.basis.size(), relation_search(c, d - 1, N).basis.size());
            }
        }
    }
}

TEST(RelationSearch, BasisIsPrimitiveAndVerified)
{
    const auto c = parse_curve<rational>("x, 2*x^2 - x^3, x^3", 30);
    const auto rb = relation_search(c, 3, 30);
    ASSERT_FALSE(rb.basis.empty());
    for (std::size_t r = 0; r < rb.basis.size(); ++r) {
        integer g = 0;
        bool first_positive = false, seen = false;
        for (const auto &a : rb.basis[r]) {
            if (a != 0 && !seen) {
                first_positive = a > 0;
                seen = true;
            }
            g = boost::multiprecision::gcd(g, a);
        }
        EXPECT_TRUE(first_positive);
        EXPECT_EQ(g, 1);
        EXPECT_TRUE(evaluate_relation(c, rb.monomials, rb.basis[r], 30, 3).is_zero());
    }
}

TEST(RelationSearch, JsonKeysAreExponentTuples)
{
    const auto rb = relation_search(parse_curve<rational>("x, x^2", 12), 2, 12);
    const auto j = to_json(rb);
    const auto &rel = j["relations"][0]["coefficients"];
    EXPECT_EQ(rel["0,1"], "1");
    EXPECT_EQ(rel["2,0"], "-1");
}

TEST(TailIdentities, Examples)
{
    const auto e = euler_series<rational>(40);
    EXPECT_TRUE(verify_tail_identities(e, poly({0, 2}), 3, 40));
    std::mt19937 gen(31);
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_TRUE(verify_tail_identities(random_series(gen, 20, 1), poly({0, 1}), k, 20));
    }
    EXPECT_THROW(verify_tail_identities(e, poly({1, 1}), 1, 10), composition_at_unit);
    EXPECT_THROW(verify_tail_identities(e, poly({0, 1}), 1, 41), order_exceeded);
}

TEST(TailIdentities, RandomPairs)
{
    std::mt19937 gen(32);
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = random_series(gen, 24, 1);
        const auto p = random_polynomial(gen, 3);
        std::uniform_int_distribution<std::size_t> k(0, 8);
        EXPECT_TRUE(verify_tail_identities(h, p, k(gen), 24));
    }
}

TEST(TailIdentities, CorruptedTailIsDetected)
{
    const tail_operator broken = [](const rational_series &s, std::size_t k) {
        auto t = tail_T(s, k);
        if (t.order() >= 2) {
            auto c = t.coeffs();
            c[2] += 1;
            return rational_series(std::move(c));
        }
        return t;
    };
    EXPECT_FALSE(verify_tail_identities(euler_series<rational>(40), poly({0, 2}), 3, 40, broken));

    const tail_operator negated = [](const rational_series &s, std::size_t k) { return -tail_T(s, k); };
    EXPECT_FALSE(verify_tail_identities(euler_series<rational>(40), poly({0, 2}), 3, 40, negated));
}
