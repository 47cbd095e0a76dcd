#ifndef CRJET_MAPPINGS_HPP
#define CRJET_MAPPINGS_HPP

#include <string>
#include <vector>

#include <crjet/invariants.hpp>

namespace crjet
{

/// Holomorphic map Z' = F(Z) between hypersurfaces, both in normalized
/// coordinates, with F(0) = 0. Components use the ambient layout of the source
/// and never involve conjugated variables.
struct CRMap {
    Hypersurface source;
    Hypersurface target;
    std::vector<TruncatedSeries> F;
};

/// Builds a CRMap from defining functions and components in the original
/// coordinates. When F(0) = p != 0 the target is recentered at p, which needs
/// a polynomial target defining function.
CRMap make_map(const TruncatedSeries &rho_source, const TruncatedSeries &rho_target, int N,
               std::vector<TruncatedSeries> components);

/// F o G for ambient component lists in one layout. A constant term in G needs polynomial F.
std::vector<TruncatedSeries> compose_ambient(const std::vector<TruncatedSeries> &F, const std::vector<TruncatedSeries> &G);

/// Jacobian dF(0), rows indexed by components.
DenseMatrix<CScalar> jacobian_at_zero(const std::vector<TruncatedSeries> &F);

/// f = F|M in graph charts: components (z', zb', s') as series in (z, zb, s).
struct IntrinsicMap {
    std::vector<TruncatedSeries> components;
    /// rho'(F, conj F) restricted to the source graph.
    TruncatedSeries tangency_residual;
};

/// Throws when the tangency residual is nonzero or, with diffeomorphism set,
/// when dF(0) is singular.
IntrinsicMap restrict(const CRMap &map, bool diffeomorphism = true);

/// g o f for a series g on the target, in the target intrinsic layout.
TruncatedSeries pull_back(const TruncatedSeries &g, const IntrinsicMap &f);

/// f_*(T, L_B, Lbar_B) = (T', L'_A, L'_Abar) [[xi,0,0],[eta,gamma,0],[conj eta,0,conj gamma]].
struct PushforwardData {
    TruncatedSeries xi;
    std::vector<TruncatedSeries> eta;
    /// gamma[A][B] = gamma^A_B
    SeriesMatrix gamma;

    int order() const;
};

/// Pairs f_* of the source frame with the pulled-back target coframe. Throws
/// when a zero block of the matrix does not vanish (f is not CR).
PushforwardData pushforward_data(const IntrinsicMap &f, const Frame &source, const Frame &target);

/// The five first-order reflection identities relating (xi, eta, gamma) to h and h'.
IdentityReport verify_reflection_base(const PushforwardData &P, const IntrinsicMap &f, const Frame &source,
                                      const Frame &target);

/// Derivatives of gamma^D_B h'_{A..D} and eta^D h'_{A..D} along Lbar_C, for tuples of length k.
IdentityReport verify_reflection_derivatives(const PushforwardData &P, const IntrinsicMap &f, const Frame &source,
                                 const Frame &target, int k);

struct LeviReconstruction {
    SeriesMatrix gamma;
    std::vector<TruncatedSeries> eta;
};

/// Recovers gamma and eta from xi and conj(gamma) through the Levi pairing of the
/// target; throws when that pairing is singular at 0.
LeviReconstruction solve_levi_reflection(const TruncatedSeries &xi, const SeriesMatrix &gamma_bar, const IntrinsicMap &f,
                                         const Frame &source, const Frame &target);

/// Entrywise conjugate of gamma in the intrinsic layout.
SeriesMatrix conjugate_matrix(const SeriesMatrix &m, const IntrinsicLayout &layout);

/// Ambient automorphisms of Im w = |z|^2 in C^N, in the original coordinates.
namespace heisenberg_maps
{
/// (z, w) -> (z + a, w + 2i <z, a> + i |a|^2)
std::vector<TruncatedSeries> translation(int N, int order, const std::vector<CScalar> &a);
/// (z, w) -> (lambda z, lambda^2 w), lambda real and nonzero
std::vector<TruncatedSeries> dilation(int N, int order, const Rational &lambda);
/// (z, w) -> (U z, w), U unitary
std::vector<TruncatedSeries> rotation(int N, int order, const DenseMatrix<CScalar> &U);
/// (z, w) -> (z + a w, w) / (1 - 2i <z, a> - i |a|^2 w)
std::vector<TruncatedSeries> isotropy(int N, int order, const std::vector<CScalar> &a);
/// (z, w) -> (z, w) / (1 - r w), r real; its 1-jet is the identity
std::vector<TruncatedSeries> vertical_isotropy(int N, int order, const Rational &r);
} // namespace heisenberg_maps

} // namespace crjet

#endif
