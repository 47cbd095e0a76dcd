#ifndef CRJET_AUT_DIM_HPP
#define CRJET_AUT_DIM_HPP

#include <string>
#include <vector>

#include <gmpxx.h>

#include <crjet/hypersurface.hpp>

namespace crjet
{

/// (2N - 1) * binom(4N - 3, 2N - 2)
mpz_class aut_bound(int N);

/// Y = sum_j a_j d/dZ_j with holomorphic polynomial coefficients in the ambient layout.
struct FormalVectorField {
    std::vector<TruncatedSeries> a;

    /// Y rho
    TruncatedSeries apply(const TruncatedSeries &rho) const;
    std::string to_string() const;
};

struct TangencySystem {
    std::string condition;
    /// Degree bound d and how it is measured ("degree" or "weighted degree").
    int degree = 0;
    std::string degree_kind;
    int order = 0;
    /// Real unknowns (two per complex coefficient) and real equations.
    int unknowns = 0;
    int equations = 0;
    /// Real dimension of the solution space.
    int solution_dim = 0;
    std::vector<FormalVectorField> basis;
    /// Each basis field re-checked by direct evaluation of its tangency residual.
    bool basis_verified = false;
    /// Residual degrees compared, all below this bound.
    int checked_through = 0;
};

/// Holomorphic Y with coefficients of degree <= d and (Y rho)|M = 0 through
/// the truncation. Throws when order < d + 2: the top unknowns would not be constrained.
TangencySystem holomorphic_degeneracy_test(const Hypersurface &M, int d, int order);

/// Holomorphic Y whose real part is tangent: (Y rho + conj(Y rho))|M = 0. The
/// weight of Y is at most d, with weight z_j = 1 and w = 2, so a_j has weighted
/// degree <= d + wt(Z_j). Throws when order < (highest ordinary degree) + 2.
TangencySystem infinitesimal_aut_dim(const Hypersurface &M, int d, int order);

} // namespace crjet

#endif
