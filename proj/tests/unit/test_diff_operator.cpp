#include <gtest/gtest.h>

#include <crjet/diff_operator.hpp>

#include "../support/random_series.hpp"

using namespace crjet;

namespace
{

TruncatedSeries var(int nv, int order, int v) { return TruncatedSeries::variable(nv, order, v); }

DiffOperator random_op(std::mt19937_64 &rng, int nv, int order)
{
    std::vector<TruncatedSeries> c;
    for (int i = 0; i < nv; ++i) {
        c.push_back(crjet::testing::random_series(rng, nv, order, 2));
    }
    return DiffOperator::from_field(VectorField(std::move(c)));
}

} // namespace

TEST(DiffOperator, IdentityAndFieldApply)
{
    const auto x = var(2, 6, 0);
    const auto y = var(2, 6, 1);
    const auto f = x * x * y;
    EXPECT_EQ(DiffOperator::identity(2, 6).apply(f), f);
    const auto X = DiffOperator::from_field(VectorField({y, TruncatedSeries(2, 6)}));
    // y d/dx (x^2 y) = 2 x y^2
    EXPECT_EQ(X.apply(f).truncated(4), (x * y * y * CScalar(2)).truncated(4));
    EXPECT_EQ(X.degree(), 1);
}

TEST(DiffOperator, CompositionOfCoordinateFields)
{
    // [x d/dy, d/dx] = -d/dy
    const int nv = 2;
    const auto x = var(nv, 8, 0);
    const auto zero = TruncatedSeries(nv, 8);
    const auto one = TruncatedSeries::constant(nv, 8, CScalar(1));
    const auto A = DiffOperator::from_field(VectorField({zero, x}));
    const auto B = DiffOperator::from_field(VectorField({one, zero}));
    const auto C = commutator(A, B);
    const auto expected = DiffOperator::from_field(VectorField({zero, -one}));
    EXPECT_EQ(compare_on_monomials(C, expected, 4), "");
    EXPECT_NE(compare_on_monomials(C, A, 4), "");
}

TEST(DiffOperator, SecondOrderLeibniz)
{
    // d/dx (x d/dx) = x d^2/dx^2 + d/dx
    const int nv = 1;
    const auto x = var(nv, 8, 0);
    const auto one = TruncatedSeries::constant(nv, 8, CScalar(1));
    const auto D = DiffOperator::from_field(VectorField({one}));
    const auto xD = DiffOperator::from_field(VectorField({x}));
    const auto P = D * xD;
    DiffOperator expected(nv, 8);
    expected.add_term(MultiIndex({2}), x);
    expected.add_term(MultiIndex({1}), one);
    EXPECT_EQ(compare_on_monomials(P, expected, 5), "");
    EXPECT_EQ(P.degree(), 2);
}

class DiffOperatorRandom : public ::testing::TestWithParam<int>
{
};

TEST_P(DiffOperatorRandom, AgreesWithFieldBracketAndAssociates)
{
    std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
    const int nv = 3;
    const int order = 7;
    std::vector<TruncatedSeries> cx, cy;
    for (int i = 0; i < nv; ++i) {
        cx.push_back(crjet::testing::random_series(rng, nv, order, 2));
        cy.push_back(crjet::testing::random_series(rng, nv, order, 2));
    }
    const VectorField X(cx), Y(cy);
    const auto opX = DiffOperator::from_field(X);
    const auto opY = DiffOperator::from_field(Y);
    EXPECT_EQ(compare_on_monomials(commutator(opX, opY), DiffOperator::from_field(bracket(X, Y)), 4), "");

    const auto Z = random_op(rng, nv, order);
    EXPECT_EQ(compare_on_monomials((opX * opY) * Z, opX * (opY * Z), 4), "");
    const auto f = crjet::testing::random_series(rng, nv, order, 3);
    const auto lhs = (opX * opY).apply(f);
    const auto rhs = opX.apply(opY.apply(f));
    const int o = std::min(lhs.order(), rhs.order());
    EXPECT_EQ(lhs.truncated(o), rhs.truncated(o));
}

INSTANTIATE_TEST_SUITE_P(Seeds, DiffOperatorRandom, ::testing::Range(1, 7));
