#include <gtest/gtest.h>

#include <cmath>

#include <crjet/expr.hpp>

using namespace crjet;

namespace
{

std::string canon(const std::string &s) { return to_string(parse_expression(s)); }

SeriesContext two_vars(int order)
{
    SeriesContext ctx;
    ctx.nvars = 2;
    ctx.order = order;
    ctx.variable = [order](const std::string &n) -> std::optional<TruncatedSeries> {
        if (n == "x") {
            return TruncatedSeries::variable(2, order, 0);
        }
        if (n == "y") {
            return TruncatedSeries::variable(2, order, 1);
        }
        return std::nullopt;
    };
    return ctx;
}

} // namespace

TEST(Parse, PrecedenceAndAssociativity)
{
    EXPECT_EQ(canon("1 + 2*x^2"), "1 + 2*x^2");
    EXPECT_EQ(canon("(a - b) - c"), "a - b - c");
    EXPECT_EQ(canon("a - (b - c)"), "a - (b - c)");
    EXPECT_EQ(canon("a/(b*c)"), "a/(b*c)");
    EXPECT_EQ(canon("-x^2"), "-x^2");
    EXPECT_EQ(canon("(-x)^2"), "(-x)^2");
    EXPECT_EQ(canon("2*i*z"), "2*i*z");
}

TEST(Parse, ExactLiterals)
{
    EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
    EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
    EXPECT_EQ(parse_rational("-2"), Rational(-2));
    EXPECT_EQ(canon("0.5*x"), "1/2*x");
    EXPECT_THROW(parse_rational("1.2.3"), Error);
}

TEST(Parse, RoundTripIsStable)
{
    for (const std::string s : {"Im(w) - z1*conj(z1) - 1/2*(z1^2*conj(z2) + conj(z1)^2*z2)",
                                "x1*d(f1, x1, x2) - 3*f2^3/(1 + x2^2)", "-(a + b)*(c - d)^2", "exp(-x)*sin(2*x) + cos(x)"}) {
        const std::string once = canon(s);
        EXPECT_EQ(canon(once), once) << s;
    }
}

TEST(Parse, ErrorPositions)
{
    try {
        parse_expression("1 + * 2", 3, 7);
        FAIL() << "no error";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 3);
        EXPECT_EQ(e.col(), 11);
    }
    try {
        parse_expression("x^y");
        FAIL() << "no error";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.col(), 3);
    }
    EXPECT_THROW(parse_expression("(x + 1"), ParseError);
    EXPECT_THROW(parse_expression("f(x,)"), ParseError);
    EXPECT_THROW(parse_expression("x $ y"), ParseError);
    EXPECT_THROW(parse_expression("1/0"), ParseError);
}

TEST(ToSeries, Arithmetic)
{
    const auto ctx = two_vars(4);
    const auto x = TruncatedSeries::variable(2, 4, 0);
    const auto y = TruncatedSeries::variable(2, 4, 1);
    EXPECT_EQ(to_series(parse_expression("(x + y)^2 - 2*x*y"), ctx), x * x + y * y);
    EXPECT_EQ(to_series(parse_expression("i*x"), ctx), x * CScalar::i());
    // 1/(1 - x) = 1 + x + ... + x^4
    const auto geo = to_series(parse_expression("1/(1 - x)"), ctx);
    EXPECT_EQ(geo.coeff(MultiIndex({4, 0})), CScalar(1));
    EXPECT_FALSE(geo.is_polynomial());
    EXPECT_TRUE(to_series(parse_expression("x/2"), ctx).is_polynomial());
}

TEST(ToSeries, Errors)
{
    const auto ctx = two_vars(4);
    EXPECT_THROW(to_series(parse_expression("x/y"), ctx), ParseError);
    EXPECT_THROW(to_series(parse_expression("q + 1"), ctx), ParseError);
    EXPECT_THROW(to_series(parse_expression("conj(x)"), ctx), ParseError);
}

TEST(ToSeries, ConjugationWithPairing)
{
    SeriesContext ctx;
    ctx.nvars = 2;
    ctx.order = 3;
    ctx.variable = [](const std::string &n) -> std::optional<TruncatedSeries> {
        if (n == "z") {
            return TruncatedSeries::variable(2, 3, 0);
        }
        return std::nullopt;
    };
    ctx.pairing = VariablePairing::ambient(1);
    const auto z = TruncatedSeries::variable(2, 3, 0);
    const auto zb = TruncatedSeries::variable(2, 3, 1);
    EXPECT_EQ(to_series(parse_expression("conj(i*z)"), ctx), zb * -CScalar::i());
    EXPECT_EQ(to_series(parse_expression("Re(z)"), ctx), (z + zb) * CScalar(Rational(1, 2)));
}

TEST(CompileReal, Evaluates)
{
    const auto e = parse_expression("exp(x)*cos(y) + x^3/4 - sin(0.5)");
    const auto f = compile_real(*&e, [](const ExprNode &n) { return n.name == "x" ? 0 : n.name == "y" ? 1 : -1; });
    const double args[2] = {0.3, -1.2};
    EXPECT_NEAR(f(args), std::exp(0.3) * std::cos(-1.2) + 0.027 / 4 - std::sin(0.5), 1e-14);
    EXPECT_THROW(compile_real(parse_expression("z + 1"), [](const ExprNode &) { return -1; }), ParseError);
    EXPECT_THROW(compile_real(parse_expression("i*x"), [](const ExprNode &) { return 0; }), ParseError);
}
