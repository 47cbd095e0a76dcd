#include <gtest/gtest.h>

#include <crjet/aut_dim.hpp>
#include <crjet/models.hpp>

using namespace crjet;

TEST(AutBound, Values)
{
    EXPECT_EQ(aut_bound(2), 30);
    EXPECT_EQ(aut_bound(3), 630);
    EXPECT_EQ(aut_bound(4), 12012);
    EXPECT_THROW(aut_bound(1), Error);
}

TEST(HolomorphicDegeneracy, TubeHasTangentField)
{
    const auto M = from_defining(models::tube_c3_rho(6), 3);
    const auto sys = holomorphic_degeneracy_test(M, 2, 6);
    EXPECT_GE(sys.solution_dim, 2);
    EXPECT_TRUE(sys.basis_verified);
    EXPECT_EQ(static_cast<int>(sys.basis.size()), sys.solution_dim);
}

TEST(HolomorphicDegeneracy, HeisenbergAndM2HaveNone)
{
    const auto H = holomorphic_degeneracy_test(from_defining(models::heisenberg_rho(2, 6), 2), 2, 6);
    EXPECT_EQ(H.solution_dim, 0);
    EXPECT_GT(H.unknowns, 0);
    const auto M2 = holomorphic_degeneracy_test(from_defining(models::m2_rho(8), 2), 2, 8);
    EXPECT_EQ(M2.solution_dim, 0);
}

TEST(HolomorphicDegeneracy, VacuousOrderRejected)
{
    const auto M = from_defining(models::heisenberg_rho(2, 6), 2);
    EXPECT_THROW(holomorphic_degeneracy_test(M, 5, 6), OrderExhausted);
    EXPECT_THROW(holomorphic_degeneracy_test(M, 2, 7), OrderExhausted);
}

TEST(InfinitesimalAut, HeisenbergIsSu21)
{
    const auto M = from_defining(models::heisenberg_rho(2, 8), 2);
    const auto sys = infinitesimal_aut_dim(M, 2, 8);
    EXPECT_EQ(sys.solution_dim, 8);
    EXPECT_TRUE(sys.basis_verified);
    EXPECT_LE(sys.solution_dim, aut_bound(2));
    // Weights -2..0 alone: translations (3) and the grading plus rotation (2).
    EXPECT_EQ(infinitesimal_aut_dim(M, 0, 8).solution_dim, 5);
}

TEST(InfinitesimalAut, HeisenbergC3)
{
    const auto M = from_defining(models::heisenberg_rho(3, 8), 3);
    const auto sys = infinitesimal_aut_dim(M, 2, 8);
    // su(3, 1)
    EXPECT_EQ(sys.solution_dim, 15);
    EXPECT_TRUE(sys.basis_verified);
    EXPECT_LE(sys.solution_dim, aut_bound(3));
}

TEST(InfinitesimalAut, M3WithinBound)
{
    const auto M = from_defining(models::m3_rho(8), 3);
    const auto sys = infinitesimal_aut_dim(M, 2, 8);
    EXPECT_GE(sys.solution_dim, 3);
    EXPECT_LE(sys.solution_dim, aut_bound(3));
    EXPECT_TRUE(sys.basis_verified);
}

TEST(InfinitesimalAut, TubeGrowsWithDegree)
{
    const auto M = from_defining(models::tube_c3_rho(8), 3);
    int prev = -1;
    for (int d = 1; d <= 3; ++d) {
        const auto sys = infinitesimal_aut_dim(M, d, 8);
        EXPECT_GT(sys.solution_dim, prev) << "d = " << d;
        EXPECT_TRUE(sys.basis_verified);
        prev = sys.solution_dim;
    }
}

TEST(InfinitesimalAut, BasisFieldsAreTangent)
{
    const auto M = from_defining(models::heisenberg_rho(2, 8), 2);
    const auto sys = infinitesimal_aut_dim(M, 1, 8);
    const auto p = M.ambient().pairing();
    for (const auto &Y : sys.basis) {
        auto r = Y.apply(M.rho);
        r += conjugate(r, p);
        const auto res = restrict_to_graph(r, M).truncated(sys.checked_through);
        EXPECT_TRUE(res.is_zero()) << Y.to_string();
    }
}

TEST(InfinitesimalAut, VacuousOrderRejected)
{
    const auto M = from_defining(models::heisenberg_rho(2, 8), 2);
    EXPECT_THROW(infinitesimal_aut_dim(M, 4, 6), OrderExhausted);
}
