#include <gtest/gtest.h>

#include <crjet/invariants.hpp>
#include <crjet/models.hpp>

using namespace crjet;

namespace
{

const CScalar I = CScalar::i();

struct Model {
    Hypersurface M;
    Frame F;
};

Model named(const std::string &name, int order)
{
    auto [rho, N] = models::by_name(name, order);
    Model m{from_defining(rho, N), {}};
    m.F = build_frame(m.M);
    return m;
}

void expect_passed(const IdentityReport &r)
{
    EXPECT_TRUE(r.passed()) << r.name << ": " << (r.violations.empty() ? "" : r.violations.front().label + " = " +
                                                                              r.violations.front().residual);
    EXPECT_GT(r.checked + (r.vacuous ? 1 : 0), 0) << r.name;
}

} // namespace

TEST(HTensor, HeisenbergLeviEntry)
{
    auto m = named("heisenberg2", 6);
    HTensor H(m.F);
    EXPECT_EQ(H.h({0}, 0).constant_term(), -(CScalar(2) * I));
    EXPECT_TRUE(H.h({}, 0).is_zero());
    EXPECT_EQ(H.h({}), TruncatedSeries::constant(3, H.h({}).order(), CScalar(1)));
    EXPECT_EQ(nested_bracket_value(m.F, {0}, 0), CScalar(2) * I);
}

TEST(HTensor, M2LeviEntryVanishes)
{
    auto m = named("m2", 8);
    HTensor H(m.F);
    EXPECT_TRUE(H.h({0}, 0).constant_term().is_zero());
    EXPECT_FALSE(H.h({0}, 0).is_zero());
}

TEST(HTensor, TuplesEnumerateInLexOrder)
{
    const auto t = HTensor::tuples(2, 2);
    ASSERT_EQ(t.size(), 4u);
    EXPECT_EQ(t[1], (IndexTuple{0, 1}));
    EXPECT_EQ(HTensor::tuples(3, 0).size(), 1u);
    EXPECT_EQ(tuple_label({0, 2}, true), "1b3b");
}

TEST(Filtration, Heisenberg)
{
    for (int N : {2, 3}) {
        auto m = named("heisenberg" + std::to_string(N), 8);
        const auto r = intrinsic_filtration(m.F, FiltrationBounds::defaults(N));
        EXPECT_EQ(r.Ek_dims, (std::vector<int>{1, N}));
        EXPECT_EQ(r.k0.to_string(), "1");
        EXPECT_EQ(r.ell0.to_string(), "1");
        EXPECT_EQ(r.ell1.to_string(), "1");
        EXPECT_EQ(r.type.to_string(), "2");
        EXPECT_EQ(r.levi_rank, N - 1);
        EXPECT_EQ(extrinsic_k0(m.M, N - 1).k0.to_string(), "1");
    }
}

TEST(Filtration, M3)
{
    auto m = named("m3", 8);
    const auto r = intrinsic_filtration(m.F, FiltrationBounds::defaults(3));
    EXPECT_EQ(r.Ek_dims, (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(r.Fk_dims, (std::vector<int>{2, 1, 0}));
    EXPECT_EQ(r.k0.to_string(), "2");
    EXPECT_EQ(r.levi_rank, 1);
    EXPECT_EQ(r.ell0.to_string(), "1");
    const auto e = extrinsic_k0(m.M, 2);
    EXPECT_EQ(e.k0.to_string(), "2");
    EXPECT_EQ(e.span_dims, (std::vector<int>{1, 2, 3}));
}

TEST(Filtration, M2)
{
    auto m = named("m2", 16);
    FiltrationBounds b{6, 7, 7};
    const auto r = intrinsic_filtration(m.F, b);
    EXPECT_EQ(r.k0.to_string(), "∞@kmax");
    EXPECT_EQ(r.ell0.to_string(), "∞@lmax");
    EXPECT_EQ(r.ell1.to_string(), "∞@lmax");
    EXPECT_EQ(r.type.to_string(), "4");
    EXPECT_EQ(r.Ek_dims.size(), 7u);
    EXPECT_EQ(extrinsic_k0(m.M, 6).k0.to_string(), "∞@kmax");
}

TEST(Filtration, CubicHasEll0Two)
{
    auto m = named("cubic", 10);
    const auto r = intrinsic_filtration(m.F, {3, 4, 4});
    EXPECT_EQ(r.ell0.to_string(), "2");
    EXPECT_EQ(r.ell1.to_string(), "2");
    EXPECT_EQ(r.k0, extrinsic_k0(m.M, 3).k0);
    ASSERT_TRUE(r.ell0_witness.has_value());
    EXPECT_EQ(r.ell0_witness->first.size(), 2u);
}

TEST(Filtration, DegenerateTube)
{
    auto m = named("tube3", 8);
    const auto r = intrinsic_filtration(m.F, FiltrationBounds::defaults(3));
    EXPECT_FALSE(r.k0.finite());
    EXPECT_EQ(r.levi_rank, 1);
    EXPECT_EQ(r.Ek_dims, (std::vector<int>{1, 2, 2}));
    EXPECT_FALSE(extrinsic_k0(m.M, 2).k0.finite());
}

TEST(Filtration, OrderTooSmallIsReported)
{
    auto m = named("heisenberg2", 3);
    EXPECT_THROW(extrinsic_k0(m.M, 5), OrderExhausted);
}

TEST(AdaptFrame, LastFieldsSpanF1)
{
    auto m = named("m3", 8);
    const auto r = intrinsic_filtration(m.F, FiltrationBounds::defaults(3));
    const Frame G = adapt_frame(m.F, r);
    expect_passed(verify_frame(G));
    HTensor H(G);
    // F_1(0) has dimension 1 and is spanned by L_2 after adaptation.
    EXPECT_TRUE(H.h({0}, 1).constant_term().is_zero());
    EXPECT_TRUE(H.h({1}, 1).constant_term().is_zero());
    EXPECT_FALSE(H.h({0}, 0).constant_term().is_zero());
    const auto r2 = intrinsic_filtration(G, FiltrationBounds::defaults(3));
    EXPECT_EQ(r2.Ek_dims, r.Ek_dims);
}

TEST(Identities, NamedModels)
{
    for (const std::string name : {"heisenberg2", "heisenberg3", "m3", "m2", "cubic"}) {
        SCOPED_TRACE(name);
        auto m = named(name, 6);
        const int N = m.M.N;
        const auto bounds = FiltrationBounds::defaults(N);
        const auto r = intrinsic_filtration(m.F, bounds);
        expect_passed(verify_frame(m.F));
        expect_passed(verify_h_recursion(m.F, 2));
        expect_passed(verify_h_shift(m.F, r.ell0));
        expect_passed(verify_bracket_values(m.F, r, bounds.lmax));
    }
}

TEST(Identities, VacuousShiftWhenEll0IsOne)
{
    auto m = named("heisenberg2", 6);
    const auto rep = verify_h_shift(m.F, {1, "lmax", 2});
    EXPECT_TRUE(rep.vacuous);
    EXPECT_TRUE(rep.passed());
    const auto inf = verify_h_shift(m.F, {std::nullopt, "lmax", 2});
    EXPECT_TRUE(inf.vacuous);
}

TEST(Identities, DetectsBrokenFrame)
{
    auto m = named("heisenberg2", 6);
    Frame G = m.F;
    G.T = CScalar(2) * G.T;
    EXPECT_FALSE(verify_frame(G).passed());
}

class RandomIdentities : public ::testing::TestWithParam<int>
{
};

TEST_P(RandomIdentities, AllSuitesVanish)
{
    const int seed = GetParam();
    const int N = seed % 2 == 0 ? 2 : 3;
    const auto M = models::random_hypersurface(static_cast<std::uint64_t>(seed), N, 6);
    const Frame F = build_frame(M);
    const auto bounds = FiltrationBounds::defaults(N);
    const auto r = intrinsic_filtration(F, bounds);
    expect_passed(verify_frame(F));
    expect_passed(verify_h_recursion(F, 2));
    expect_passed(verify_h_shift(F, r.ell0));
    expect_passed(verify_bracket_values(F, r, bounds.lmax));
    EXPECT_EQ(r.k0, extrinsic_k0(M, bounds.kmax).k0);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomIdentities, ::testing::Range(1, 11));

TEST(Identities, HShiftOnCubicOnlyModels)
{
    // No quadratic part, so ell0 >= 2 whenever it is finite.
    int nonvacuous = 0;
    for (std::uint64_t seed = 101; seed <= 110; ++seed) {
        SCOPED_TRACE(seed);
        const auto M = models::random_hypersurface(seed, 2, 8, 4, 3);
        const Frame F = build_frame(M);
        const auto r = intrinsic_filtration(F, {2, 3, 3});
        if (r.ell0.finite()) {
            EXPECT_GE(*r.ell0.value, 2);
        }
        const auto rep = verify_h_shift(F, r.ell0);
        nonvacuous += rep.vacuous ? 0 : 1;
        expect_passed(rep);
        expect_passed(verify_bracket_values(F, r, 3));
    }
    EXPECT_GE(nonvacuous, 5);
}

TEST(CommutatorCertificates, HeisenbergCommutatorForms)
{
    auto m = named("heisenberg2", 10);
    for (int mm : {2, 3}) {
        SCOPED_TRACE(mm);
        const auto rep = commutator_certificates(m.F, IndexTuple(static_cast<std::size_t>(mm), 0), 0);
        EXPECT_TRUE(rep.commutator_form.verified) << rep.commutator_form.mismatch;
        EXPECT_TRUE(rep.weighted_form.verified) << rep.weighted_form.mismatch;
        EXPECT_EQ(rep.weighted_form.weight, 2);
    }
}

TEST(CommutatorCertificates, MixedIndicesInC3)
{
    auto m = named("heisenberg3", 8);
    const auto rep = commutator_certificates(m.F, {0, 1}, 0, 4);
    EXPECT_TRUE(rep.commutator_form.verified) << rep.commutator_form.mismatch;
    EXPECT_TRUE(rep.weighted_form.verified) << rep.weighted_form.mismatch;
}

TEST(CommutatorCertificates, NeedsNondegenerateLeviEntry)
{
    auto m = named("m2", 8);
    EXPECT_THROW(commutator_certificates(m.F, {0, 0}, 0), Error);
}

TEST(Scan, M2Grid)
{
    auto [rho, N] = models::by_name("m2", 6);
    const auto M = from_defining(rho, N);
    ASSERT_TRUE(M.phi.is_polynomial());
    std::vector<ScanPoint> pts;
    for (const auto &z : {Rational(0), Rational(1, 2), Rational(-1, 2), Rational(1, 4), Rational(-1, 4)}) {
        for (const auto &s : {Rational(0), Rational(1, 2), Rational(-1, 2)}) {
            pts.push_back({{CScalar(z)}, s});
        }
    }
    const auto one = nondegeneracy_scan(M, pts, 1, 1);
    const auto four = nondegeneracy_scan(M, pts, 1, 4);
    ASSERT_EQ(one.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(one[i].nondegenerate, !pts[i].z[0].is_zero());
        EXPECT_EQ(one[i].k0, four[i].k0);
        EXPECT_EQ(one[i].t, four[i].t);
    }
    EXPECT_EQ(one[3].t, Rational(1, 16));
}

TEST(Scan, HeisenbergEverywhereNondegenerate)
{
    auto [rho, N] = models::by_name("heisenberg3", 6);
    const auto M = from_defining(rho, N);
    std::vector<ScanPoint> pts{{{CScalar(Rational(1, 3)), CScalar(Rational(0), Rational(1, 2))}, Rational(1)},
                               {{CScalar(0), CScalar(0)}, Rational(0)}};
    for (const auto &r : nondegeneracy_scan(M, pts, 1, 2)) {
        EXPECT_TRUE(r.nondegenerate);
    }
}

TEST(Scan, NonPolynomialGraphRejected)
{
    const AmbientLayout a{2};
    const auto v = [&](int i) { return TruncatedSeries::variable(4, 6, i); };
    const auto im_w = (v(a.w()) - v(a.wbar())) * CScalar(Rational(0), Rational(-1, 2));
    const auto re_w = (v(a.w()) + v(a.wbar())) * CScalar(Rational(1, 2));
    const auto M = from_defining(im_w * (TruncatedSeries::constant(4, 6, CScalar(1)) + re_w) - v(0) * v(2), 2);
    EXPECT_FALSE(M.phi.is_polynomial());
    EXPECT_THROW(nondegeneracy_scan(M, {{{CScalar(0)}, Rational(0)}}, 1), Error);
}

TEST(Identities, HRecursionDepthThreeInC2)
{
    for (int seed : {42, 43, 44}) {
        const auto M = models::random_hypersurface(static_cast<std::uint64_t>(seed), 2, 6);
        const auto rep = verify_h_recursion(build_frame(M), 3);
        expect_passed(rep);
        EXPECT_GE(rep.order, 1);
    }
}
