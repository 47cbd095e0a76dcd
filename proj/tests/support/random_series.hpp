#ifndef CRJET_TESTS_RANDOM_SERIES_HPP
#define CRJET_TESTS_RANDOM_SERIES_HPP

#include <random>

#include <crjet/series.hpp>

namespace crjet::testing
{

inline Rational small_rational(std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    return Rational(num(rng), den(rng));
}

inline CScalar small_scalar(std::mt19937_64 &rng)
{
    return {small_rational(rng), small_rational(rng)};
}

/// Sparse random series with a handful of terms in each degree.
inline TruncatedSeries random_series(std::mt19937_64 &rng, int nvars, int order, int terms_per_degree = 3)
{
    TruncatedSeries out(nvars, order);
    std::uniform_int_distribution<int> var(0, nvars - 1);
    for (int d = 0; d <= order; ++d) {
        for (int t = 0; t < terms_per_degree; ++t) {
            std::vector<int> e(static_cast<std::size_t>(nvars), 0);
            for (int k = 0; k < d; ++k) {
                ++e[static_cast<std::size_t>(var(rng))];
            }
            out += TruncatedSeries::monomial(nvars, order, MultiIndex(e), small_scalar(rng));
        }
    }
    return out;
}

} // namespace crjet::testing

#endif
