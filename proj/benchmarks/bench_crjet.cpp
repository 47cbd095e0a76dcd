#include <benchmark/benchmark.h>

#include <crjet/aut_dim.hpp>
#include <crjet/invariants.hpp>
#include <crjet/jet_systems.hpp>
#include <crjet/mappings.hpp>
#include <crjet/models.hpp>

using namespace crjet;

static void BM_SeriesProduct(benchmark::State &state)
{
    const int order = static_cast<int>(state.range(0));
    const auto M = models::random_hypersurface(7, 3, order);
    for (auto _ : state) {
        benchmark::DoNotOptimize(M.phi * M.phi);
    }
}
BENCHMARK(BM_SeriesProduct)->Arg(4)->Arg(6)->Arg(8);

static void BM_GraphSolve(benchmark::State &state)
{
    const int order = static_cast<int>(state.range(0));
    const auto rho = models::random_hypersurface(3, 2, order).rho;
    for (auto _ : state) {
        benchmark::DoNotOptimize(from_defining(rho, 2));
    }
}
BENCHMARK(BM_GraphSolve)->Arg(6)->Arg(10);

static void BM_FiltrationM3(benchmark::State &state)
{
    const Frame F = build_frame(from_defining(models::m3_rho(8), 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(intrinsic_filtration(F, FiltrationBounds::defaults(3)));
    }
}
BENCHMARK(BM_FiltrationM3);

static void BM_FiltrationM2Deep(benchmark::State &state)
{
    const Frame F = build_frame(from_defining(models::m2_rho(16), 2));
    FiltrationBounds b{6, 7, 7};
    for (auto _ : state) {
        benchmark::DoNotOptimize(intrinsic_filtration(F, b));
    }
}
BENCHMARK(BM_FiltrationM2Deep)->Unit(benchmark::kMillisecond);

static void BM_ReflectionIsotropy(benchmark::State &state)
{
    const int order = 6;
    const auto rho = models::heisenberg_rho(2, order);
    const auto F = heisenberg_maps::isotropy(2, order, {CScalar(Rational(1, 2), Rational(1, 3))});
    for (auto _ : state) {
        const CRMap m = make_map(rho, rho, 2, F);
        const auto f = restrict(m);
        const Frame S = build_frame(m.source), T = build_frame(m.target);
        const auto P = pushforward_data(f, S, T);
        benchmark::DoNotOptimize(verify_reflection_derivatives(P, f, S, T, 2));
    }
}
BENCHMARK(BM_ReflectionIsotropy)->Unit(benchmark::kMillisecond);

static void BM_AutTube(benchmark::State &state)
{
    const auto M = from_defining(models::tube_c3_rho(8), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(infinitesimal_aut_dim(M, static_cast<int>(state.range(0)), 8));
    }
}
BENCHMARK(BM_AutTube)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_IntegrateTwoAxes(benchmark::State &state)
{
    CompleteSystem S;
    S.q = 2;
    S.m = 1;
    S.k = 0;
    S.box = {{0, 1}, {0, 1}};
    S.rhs.emplace(JetKey{0, MultiIndex({1, 0})}, parse_expression("f1"));
    S.rhs.emplace(JetKey{0, MultiIndex({0, 1})}, parse_expression("2*f1"));
    JetVector J(2, 1, 0);
    J.set(0, MultiIndex({0, 0}), Rational(1));
    const Grid g = Grid::uniform(2, 0, 1, 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(S, J, g, 1e-3));
    }
}
BENCHMARK(BM_IntegrateTwoAxes)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
