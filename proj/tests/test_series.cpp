#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace pencil;
using pencil::testing::random_polynomial;
using pencil::testing::random_series;
using pencil::testing::rseries;

TEST(Series, Derive)
{
    EXPECT_EQ(derive(rseries({0, 0, 1})), rseries({0, 2}));
    EXPECT_EQ(derive(euler_series<rational>(4)), rseries({1, 2, 6, 24}));
    EXPECT_TRUE(derive(rational_series::one(4)).is_zero());
    EXPECT_THROW(derive(rational_series::one(0)), order_underflow);
}

TEST(Series, Compose)
{
    const auto e = euler_series<rational>(4);
    EXPECT_EQ(compose(e, rational_polynomial({0, 2})), rseries({0, 2, 4, 16, 96}));

    std::mt19937 gen(7);
    const auto s = random_series(gen, 10);
    EXPECT_EQ(compose(s, rational_polynomial({0, 1})), s);

    EXPECT_EQ(compose(rseries({0, 0, 1, 0, 0}), rational_polynomial({0, 1, 1})), rseries({0, 0, 1, 2, 1}));
    EXPECT_THROW(compose(s, rational_polynomial({1, 1})), composition_at_unit);
    EXPECT_THROW(compose(s, rseries({1, 1, 0})), composition_at_unit);
}

TEST(Series, Divide)
{
    EXPECT_EQ(divide(rational_series::one(3), rseries({1, 1, 0, 0})), rseries({1, -1, 1, -1}));
    const auto e = euler_series<rational>(8);
    EXPECT_EQ(divide(e, rational_series::one(8)), e);
    EXPECT_THROW(divide(rseries({0, 0, 1}), rseries({0, 1, 1})), non_unit_divisor);

    std::mt19937 gen(11);
    auto u = random_series(gen, 12);
    if (u[0] == 0) {
        u = u + rational_series::one(12);
    }
    EXPECT_EQ(divide(u, u), rational_series::one(12));
}

TEST(Series, ExpSeries)
{
    EXPECT_EQ(exp_series(rseries({0, 1, 0, 0})),
              rational_series({rational(1), rational(1), rational(1, 2), rational(1, 6)}));
    EXPECT_EQ(exp_series(rational_series::zero(5)), rational_series::one(5));
    EXPECT_EQ(exp_series(euler_series<rational>(3)),
              rational_series({rational(1), rational(1), rational(3, 2), rational(19, 6)}));
    EXPECT_THROW(exp_series(rseries({1, 1})), nonzero_constant_term);
}

TEST(Series, TruncateAndTail)
{
    EXPECT_EQ(truncate_J(rseries({0, 1, 1}), 1), rseries({0, 1, 0}));
    EXPECT_EQ(truncate_J(euler_series<rational>(6), 3), rseries({0, 1, 1, 2, 0, 0, 0}));
    const auto s = rseries({5, 1, 2});
    EXPECT_EQ(truncate_J(s, 0), rseries({5, 0, 0}));
    EXPECT_THROW(truncate_J(s, 3), order_exceeded);

    EXPECT_EQ(tail_T(rseries({0, 1, 1}), 1), rseries({0, 1}));
    EXPECT_EQ(tail_T(euler_series<rational>(5), 3), rseries({0, 6, 24}));
    EXPECT_EQ(tail_T(rseries({0, 1, 2}), 0), rseries({0, 1, 2}));
    EXPECT_EQ(tail_T(s, 0), rseries({0, 1, 2}));
    EXPECT_THROW(tail_T(s, 3), order_exceeded);
}

TEST(Series, EulerSeries)
{
    EXPECT_EQ(euler_series<rational>(5), rseries({0, 1, 1, 2, 6, 24}));
    EXPECT_EQ(euler_series<rational>(1), rseries({0, 1}));

    const auto e = euler_series<rational>(30);
    const auto x = rational_series::monomial(1, 30);
    const auto x2 = rational_series::monomial(2, 30);
    EXPECT_TRUE((x2 * derive(e).truncated(29) - (e - x).truncated(29)).is_zero());

    EXPECT_EQ(e[1], 1);
    for (std::size_t n = 1; n < 30; ++n) {
        EXPECT_EQ(e[n + 1], rational(n) * e[n]);
    }
}

TEST(Series, QShort)
{
    auto check = [](std::vector<long> c, std::size_t q) {
        std::vector<rational> r(c.begin(), c.end());
        return q_short_check(rational_polynomial(std::move(r)), q);
    };
    const auto two_x = check({0, 2}, 1);
    EXPECT_TRUE(two_x.is_short);
    EXPECT_TRUE(two_x.is_positive);
    const auto minus_x = check({0, -1}, 1);
    EXPECT_TRUE(minus_x.is_short);
    EXPECT_FALSE(minus_x.is_positive);
    const auto x_x2 = check({0, 1, 1}, 1);
    EXPECT_FALSE(x_x2.is_short);
    EXPECT_EQ(x_x2.deg, 2u);
    EXPECT_EQ(x_x2.val, 1u);
    EXPECT_TRUE(check({0, 1, 1}, 2).is_short);
    EXPECT_FALSE(check({1, 1}, 3).is_short);
    EXPECT_THROW(q_short_check(rational_polynomial{}, 1), undefined_valuation);
}

TEST(SeriesProperties, RingAxioms)
{
    std::mt19937 gen(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_series(gen, 15), b = random_series(gen, 15), c = random_series(gen, 15);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(SeriesProperties, MixedOrdersKeepTheSmaller)
{
    std::mt19937 gen(2);
    const auto a = random_series(gen, 10), b = random_series(gen, 6);
    EXPECT_EQ((a + b).order(), 6u);
    EXPECT_EQ((a * b).order(), 6u);
    EXPECT_THROW(b.truncated(7), order_exceeded);
}

TEST(SeriesProperties, Reconstruction)
{
    std::mt19937 gen(3);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = random_series(gen, 20);
        for (std::size_t k = 0; k <= 20; ++k) {
            EXPECT_EQ(truncate_J(s, k) + shift_up(tail_T(s, k), k), s);
        }
    }
}

TEST(SeriesProperties, TailComposition)
{
    std::mt19937 gen(4);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = random_series(gen, 20);
        for (std::size_t k = 0; k < 19; ++k) {
            EXPECT_EQ(tail_T(s, k + 1), tail_T(tail_T(s, 1), k));
        }
    }
}

TEST(SeriesProperties, TailExchange)
{
    std::mt19937 gen(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = random_series(gen, 16, 2);
        const auto p = random_polynomial(gen, 4);
        const auto lhs = tail_T(compose(h, p), 1);
        const rational_polynomial p_over_x(std::vector<rational>(p.coeffs().begin() + 1, p.coeffs().end()));
        const auto rhs = p_over_x.to_series(15) * compose(tail_T(h, 1), p);
        EXPECT_EQ(lhs, rhs.truncated(lhs.order()));
    }
}

TEST(SeriesProperties, TailExchangeNeedsVanishingLinearTerm)
{
    const auto h = rseries({0, 1, 1, 1, 1, 1});
    const rational_polynomial p({0, 1, 1});
    const auto lhs = tail_T(compose(h, p), 1);
    const auto rhs = rational_polynomial({1, 1}).to_series(4) * compose(tail_T(h, 1), p);
    EXPECT_NE(lhs, rhs.truncated(lhs.order()));
}

TEST(SeriesProperties, ExpIdentities)
{
    std::mt19937 gen(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_series(gen, 10, 1), b = random_series(gen, 10, 1);
        EXPECT_EQ(exp_series(a) * exp_series(-a), rational_series::one(10));
        EXPECT_EQ(exp_series(a + b), exp_series(a) * exp_series(b));
    }
}

TEST(SeriesProperties, ComposeAssociative)
{
    std::mt19937 gen(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_series(gen, 12);
        const auto p = random_polynomial(gen, 3), r = random_polynomial(gen, 3);
        const auto pr = compose(p.to_series(12), r);
        EXPECT_EQ(compose(compose(s, p), r), compose(s, pr));
    }
}

TEST(SeriesModes, FloatSeriesAgreeWithExact)
{
    precision_scope scope(128);
    const auto e = euler_series<big_float>(10);
    const auto ex = exp_series(e);
    const auto exq = exp_series(euler_series<rational>(10));
    for (std::size_t k = 0; k <= 10; ++k) {
        const double want = coefficient_traits<rational>::to_double(exq[k]);
        EXPECT_NEAR(coefficient_traits<big_float>::to_double(ex[k]), want, 1e-12 * std::abs(want));
    }
}

template <typename A, typename B>
concept addable = requires(A a, B b) { a + b; };

TEST(SeriesModes, MixingModesDoesNotCompile)
{
    static_assert(addable<rational_series, rational_series>);
    static_assert(addable<float_series, float_series>);
    static_assert(!addable<rational_series, float_series>);
    static_assert(!addable<float_series, rational_series>);
}

TEST(SeriesModes, JsonRoundTripChecksMode)
{
    const auto e = euler_series<rational>(6);
    const auto j = to_json(e);
    EXPECT_EQ(series_from_json<rational>(j), e);
    EXPECT_THROW(series_from_json<big_float>(j), mode_mismatch);
}
