#include <gtest/gtest.h>

#include <cmath>

#include <crjet/jet_systems.hpp>
#include <crjet/mappings.hpp>
#include <crjet/models.hpp>

using namespace crjet;

namespace
{

MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }

CompleteSystem system(int q, int m, int k, double lo, double hi,
                      const std::vector<std::pair<JetKey, std::string>> &rhs)
{
    CompleteSystem S;
    S.q = q;
    S.m = m;
    S.k = k;
    S.box.assign(static_cast<std::size_t>(q), {lo, hi});
    for (const auto &[key, text] : rhs) {
        S.rhs.emplace(key, parse_expression(text));
    }
    S.validate();
    return S;
}

JetVector jet1(std::vector<Rational> values)
{
    JetVector J(1, 1, static_cast<int>(values.size()) - 1);
    for (int d = 0; d < static_cast<int>(values.size()); ++d) {
        J.set(0, mi({d}), values[static_cast<std::size_t>(d)]);
    }
    return J;
}

} // namespace

TEST(JetIndices, Order)
{
    const auto idx = jet_multi_indices(2, 2);
    const std::vector<MultiIndex> expect{mi({0, 0}), mi({1, 0}), mi({0, 1}), mi({2, 0}), mi({1, 1}), mi({0, 2})};
    EXPECT_EQ(idx, expect);
    EXPECT_EQ(jet_reference_name(1, mi({1, 1})), "d(f2, x1, x2)");
    EXPECT_EQ(jet_reference_name(0, mi({0, 0})), "f1");
}

TEST(JetVector, SeriesRoundTrip)
{
    // f = 1 + 2 x1 + 3 x1 x2 + x2^2 / 2
    const int o = 3;
    const auto x1 = TruncatedSeries::variable(2, o, 0), x2 = TruncatedSeries::variable(2, o, 1);
    const auto f = TruncatedSeries::constant(2, o, CScalar(1)) + x1 * CScalar(2) + x1 * x2 * CScalar(3) +
                   x2 * x2 * CScalar(Rational(1, 2));
    const auto J = JetVector::from_series({f}, 2);
    EXPECT_EQ(J.at(0, mi({1, 1})), Rational(3));
    EXPECT_EQ(J.at(0, mi({0, 2})), Rational(1));
    EXPECT_EQ(J.to_series()[0], f.truncated(2));
    EXPECT_THROW(JetVector::from_series({f * CScalar::i()}, 2), Error);
}

TEST(Validate, RejectsMalformedSystems)
{
    EXPECT_THROW(system(1, 1, 1, -1, 1, {}), Error);
    EXPECT_THROW(system(1, 1, 0, -1, 1, {{{0, mi({1})}, "d(f1, x1)"}}), ParseError);
    EXPECT_THROW(system(1, 1, 0, -1, 1, {{{0, mi({1})}, "f2"}}), ParseError);
    EXPECT_THROW(system(1, 1, 0, -1, 1, {{{0, mi({1})}, "i*f1"}}), ParseError);
    EXPECT_THROW(system(1, 1, 0, 0.5, 1, {{{0, mi({1})}, "f1"}}), Error);
}

TEST(Reduce, SecondOrderToFirst)
{
    const auto S = system(1, 1, 1, -1, 1, {{{0, mi({2})}, "0"}});
    const auto R = reduce_to_first_order(S);
    EXPECT_EQ(R.k, 0);
    EXPECT_EQ(R.m, 2);
    EXPECT_EQ(to_string(R.rhs.at({0, mi({1})})), "f2");
    EXPECT_EQ(to_string(R.rhs.at({1, mi({1})})), "0");
    const auto u0 = reduce_jet(jet1({Rational(1), Rational(2)}), S);
    EXPECT_EQ(u0.at(0, mi({0})), Rational(1));
    EXPECT_EQ(u0.at(1, mi({0})), Rational(2));
}

TEST(Integrate, LinearSolutionOfSecondOrder)
{
    const auto S = system(1, 1, 1, -2, 2, {{{0, mi({2})}, "0"}});
    const auto r = integrate(S, jet1({Rational(1), Rational(-3)}), Grid::uniform(1, -2, 2, 9), 1e-2);
    EXPECT_LT(max_deviation(r, [](const std::vector<double> &x) { return std::vector<double>{1 - 3 * x[0]}; }), 1e-12);
}

TEST(Integrate, Exponential)
{
    const auto S = system(1, 1, 0, -1, 1, {{{0, mi({1})}, "f1"}});
    const auto r = integrate(S, jet1({Rational(1)}), Grid::uniform(1, -1, 1, 21), 1e-4);
    EXPECT_LT(max_deviation(r, [](const std::vector<double> &x) { return std::vector<double>{std::exp(x[0])}; }), 1e-9);
}

TEST(Integrate, TwoVariables)
{
    const auto S = system(2, 1, 0, -0.5, 0.5, {{{0, mi({1, 0})}, "f1"}, {{0, mi({0, 1})}, "2*f1"}});
    JetVector J(2, 1, 0);
    J.set(0, mi({0, 0}), Rational(1));
    const auto r = integrate(S, J, Grid::uniform(2, -0.5, 0.5, 11), 1e-4);
    EXPECT_EQ(r.values.size(), 121u);
    EXPECT_LT(max_deviation(r, [](const std::vector<double> &x) { return std::vector<double>{std::exp(x[0] + 2 * x[1])}; }),
              1e-8);
}

TEST(Integrate, FourthOrderConvergence)
{
    const auto S = system(1, 1, 0, 0, 1, {{{0, mi({1})}, "f1"}});
    Grid g;
    g.axes = {{1.0}};
    auto err = [&](double h) {
        const auto r = integrate(S, jet1({Rational(1)}), g, h);
        return std::fabs(r.values[0][0] - std::exp(1.0));
    };
    const double e1 = err(0.1), e2 = err(0.05), e3 = err(0.025);
    EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.2);
    EXPECT_NEAR(std::log2(e2 / e3), 4.0, 0.2);
}

TEST(Integrate, ErrorsCarryLocation)
{
    const auto S = system(1, 1, 0, -1, 1, {{{0, mi({1})}, "f1"}});
    try {
        integrate(S, jet1({Rational(1)}), Grid::uniform(1, 0, 2, 3), 1e-2);
        FAIL() << "no error";
    } catch (const Error &e) {
        EXPECT_NE(std::string(e.what()).find("(2)"), std::string::npos) << e.what();
    }
    // f' = f^2 blows up at x = 1.
    const auto B = system(1, 1, 0, -2, 2, {{{0, mi({1})}, "f1^2"}});
    EXPECT_THROW(integrate(B, jet1({Rational(1)}), Grid::uniform(1, 0, 2, 3), 1e-3), Error);
}

TEST(Taylor, SecondOrderZero)
{
    const auto S = system(1, 1, 1, -1, 1, {{{0, mi({2})}, "0"}});
    const auto T = taylor_propagate(S, jet1({Rational(1), Rational(2)}), 5);
    EXPECT_EQ(T.jet, jet1({Rational(1), Rational(2), Rational(0), Rational(0), Rational(0), Rational(0)}));
}

TEST(Taylor, Exponential)
{
    const auto S = system(1, 1, 0, -1, 1, {{{0, mi({1})}, "f1"}});
    const auto T = taylor_propagate(S, jet1({Rational(3)}), 6);
    for (int d = 0; d <= 6; ++d) {
        EXPECT_EQ(T.jet.at(0, mi({d})), Rational(3));
    }
}

TEST(Taylor, ManufacturedPolynomial)
{
    // f = x1^2 x2 + 3 x2 - x1 x2^3
    const int o = 6;
    const auto x1 = TruncatedSeries::variable(2, o, 0), x2 = TruncatedSeries::variable(2, o, 1);
    const auto f = x1 * x1 * x2 + x2 * CScalar(3) - x1 * x2 * x2 * x2;
    const auto S = system(2, 1, 2, -1, 1,
                          {{{0, mi({3, 0})}, "0"},
                           {{0, mi({2, 1})}, "2"},
                           {{0, mi({1, 2})}, "-6*x2"},
                           {{0, mi({0, 3})}, "-6*x1"}});
    const auto T = taylor_propagate(S, JetVector::from_series({f}, 2), 6);
    EXPECT_EQ(T.jet, JetVector::from_series({f}, 6));
    EXPECT_GT(T.consistency_checks, 0);
}

TEST(Taylor, DetectsNonIntegrableSystem)
{
    const auto S = system(2, 1, 0, -1, 1, {{{0, mi({1, 0})}, "x2"}, {{0, mi({0, 1})}, "0"}});
    JetVector J(2, 1, 0);
    EXPECT_THROW(taylor_propagate(S, J, 2), Error);
}

namespace
{

FamilyMember member(const std::string &label, std::vector<CScalar> params, std::vector<TruncatedSeries> F)
{
    return {label, std::move(params), std::move(F)};
}

// Parameters (lambda, u, a) of dilation o rotation o isotropy.
std::vector<FamilyMember> heisenberg_family(int order)
{
    using namespace heisenberg_maps;
    const CScalar I = CScalar::i();
    auto iso = [&](CScalar a) { return isotropy(2, order, {a}); };
    auto dil = [&](Rational l) { return dilation(2, order, l); };
    auto rot = [&](CScalar u) { return rotation(2, order, DenseMatrix<CScalar>{{u}}); };
    const CScalar u(Rational(3, 5), Rational(4, 5));
    std::vector<FamilyMember> fam;
    fam.push_back(member("id", {CScalar(1), CScalar(1), CScalar(0)}, dil(Rational(1))));
    fam.push_back(member("iso(0)", {CScalar(1), CScalar(1), CScalar(0)}, iso(CScalar(0))));
    fam.push_back(member("iso(1/2)", {CScalar(1), CScalar(1), CScalar(Rational(1, 2))}, iso(CScalar(Rational(1, 2)))));
    fam.push_back(member("iso(-1/2)", {CScalar(1), CScalar(1), CScalar(Rational(-1, 2))}, iso(CScalar(Rational(-1, 2)))));
    fam.push_back(member("iso(i/3)", {CScalar(1), CScalar(1), I * CScalar(Rational(1, 3))}, iso(I * CScalar(Rational(1, 3)))));
    fam.push_back(member("iso(1+i)", {CScalar(1), CScalar(1), CScalar(1) + I}, iso(CScalar(1) + I)));
    fam.push_back(member("dil(2) iso(1/2)", {CScalar(2), CScalar(1), CScalar(Rational(1, 2))},
                         compose_ambient(dil(Rational(2)), iso(CScalar(Rational(1, 2))))));
    fam.push_back(member("dil(1/3) iso(1/2)", {CScalar(Rational(1, 3)), CScalar(1), CScalar(Rational(1, 2))},
                         compose_ambient(dil(Rational(1, 3)), iso(CScalar(Rational(1, 2))))));
    fam.push_back(member("rot(u)", {CScalar(1), u, CScalar(0)}, rot(u)));
    fam.push_back(member("rot(u) iso(i/3)", {CScalar(1), u, I * CScalar(Rational(1, 3))},
                         compose_ambient(rot(u), iso(I * CScalar(Rational(1, 3))))));
    fam.push_back(member("dil(-1)", {CScalar(-1), CScalar(1), CScalar(0)}, dil(Rational(-1))));
    return fam;
}

} // namespace

TEST(Injectivity, HeisenbergDilations)
{
    std::vector<FamilyMember> fam;
    for (const Rational l : {Rational(1, 2), Rational(1), Rational(2), Rational(3)}) {
        fam.push_back(member("dil(" + l.get_str() + ")", {CScalar(l)}, heisenberg_maps::dilation(2, 8, l)));
    }
    const auto rep = jet_injectivity_demo(fam, 2, 8);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.pairs, 6);
    EXPECT_EQ(rep.distinct_jet_pairs, 6);
}

TEST(Injectivity, IsotropyFamilyThroughOrderEight)
{
    const int order = 8;
    const auto fam = heisenberg_family(order);
    for (const auto &m : fam) {
        EXPECT_NO_THROW(restrict(make_map(models::heisenberg_rho(2, order), models::heisenberg_rho(2, order), 2, m.components)))
            << m.label;
    }
    const auto rep = jet_injectivity_demo(fam, 2, order);
    for (const auto &c : rep.counterexamples) {
        ADD_FAILURE() << c;
    }
    EXPECT_EQ(rep.pairs, 55);
    EXPECT_EQ(rep.equal_jet_pairs, 1);
    EXPECT_EQ(rep.equal_jet_equal_map_pairs, 1);
    EXPECT_EQ(rep.distinct_jet_pairs, 54);
}

TEST(Injectivity, OneJetsAreNotEnough)
{
    // (z, w) / (1 - r w) is tangent to Im w = |z|^2 for real r and has the identity 1-jet.
    const int order = 8;
    const auto F = heisenberg_maps::vertical_isotropy(2, order, Rational(1, 4));
    EXPECT_NO_THROW(restrict(make_map(models::heisenberg_rho(2, order), models::heisenberg_rho(2, order), 2, F)));
    const auto fam = heisenberg_family(order);
    const std::vector<FamilyMember> pair{fam[0], member("r = 1/4", {CScalar(1), CScalar(1), CScalar(0), CScalar(Rational(1, 4))}, F)};
    const auto one = jet_injectivity_demo(pair, 1, order);
    EXPECT_FALSE(one.passed());
    EXPECT_EQ(one.equal_jet_pairs, 1);
    EXPECT_TRUE(jet_injectivity_demo(pair, 2, order).passed());
}
