#ifndef CRJET_MODELS_HPP
#define CRJET_MODELS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <crjet/hypersurface.hpp>

namespace crjet::models
{

/// Defining functions in the ambient layout, as exact polynomials.

/// Im w - sum |z_j|^2.
TruncatedSeries heisenberg_rho(int N, int order);
/// Im w - |z1|^2 - Re(z1^2 zb2) in C^3.
TruncatedSeries m3_rho(int order);
/// Im w - (z^2 zb + z zb^2) in C^2: Levi form vanishes at 0, cubic terms do not.
TruncatedSeries cubic_rho(int order);
/// Im w - |z|^4 in C^2: finite type 4, never finitely nondegenerate at 0.
TruncatedSeries m2_rho(int order);
/// Im w - |z1|^2 in C^3: Levi degenerate along z2, holomorphically degenerate.
TruncatedSeries tube_c3_rho(int order);
/// Im w: Levi flat, holomorphically degenerate.
TruncatedSeries flat_rho(int N, int order);

/// Names accepted by by_name: heisenberg2, heisenberg3, heisenberg4, m2, m3, cubic,
/// tube3, flat2, flat3.
std::vector<std::string> names();
/// Defining function and dimension of a named model; throws on unknown names.
std::pair<TruncatedSeries, int> by_name(const std::string &name, int order);

/// Seeded random hypersurface Im w = P(z, zb, Re w), P a real polynomial of
/// degree min_degree..max_degree without constant or linear part. Deterministic in seed.
Hypersurface random_hypersurface(std::uint64_t seed, int N, int order, int max_degree = 4, int min_degree = 2);

/// Small deterministic generator used by the random models and the scans.
class SplitMix64
{
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform integer in [lo, hi].
    int uniform(int lo, int hi);

private:
    std::uint64_t state_;
};

} // namespace crjet::models

#endif
