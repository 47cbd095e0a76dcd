#ifndef CRJET_HYPERSURFACE_HPP
#define CRJET_HYPERSURFACE_HPP

#include <string>
#include <vector>

#include <crjet/linalg.hpp>
#include <crjet/series.hpp>

namespace crjet
{

/// Variable layout (z_1..z_n, w, zb_1..zb_n, wb) of ambient series in C^N.
struct AmbientLayout {
    int N;

    int nvars() const { return 2 * N; }
    int z(int j) const { return j; }
    int w() const { return N - 1; }
    int zbar(int j) const { return N + j; }
    int wbar() const { return 2 * N - 1; }
    /// Holomorphic coordinate k (z_1..z_n, w) and its conjugate.
    int holo(int k) const { return k; }
    int antiholo(int k) const { return N + k; }
    VariablePairing pairing() const { return VariablePairing::ambient(N); }
    std::vector<std::string> names() const;
};

/// Variable layout (z_1..z_n, zb_1..zb_n, s) of intrinsic series on M.
struct IntrinsicLayout {
    int n;

    int nvars() const { return 2 * n + 1; }
    int z(int j) const { return j; }
    int zbar(int j) const { return n + j; }
    int s() const { return 2 * n; }
    VariablePairing pairing() const { return VariablePairing::intrinsic(n); }
    std::vector<std::string> names() const;
};

/// Real hypersurface {rho = 0} near 0, in graph form t = phi(z, zb, s) with w = s + i t.
struct Hypersurface {
    int N = 0;
    /// Defining function after the normalizing linear change, ambient layout.
    TruncatedSeries rho;
    /// Graph function, intrinsic layout; real with phi(0) = 0.
    TruncatedSeries phi;
    /// Holomorphic linear change Z' = A Z applied to the input coordinates.
    DenseMatrix<CScalar> linear_change;

    int n() const { return N - 1; }
    int order() const { return phi.order(); }
    AmbientLayout ambient() const { return {N}; }
    IntrinsicLayout intrinsic() const { return {N - 1}; }
};

/// Normalizes rho and solves rho(z, s + i phi, zb, s - i phi) = 0 for phi by
/// Newton iteration on series.
Hypersurface from_defining(const TruncatedSeries &rho, int N);

/// Hypersurface Im w = phi(z, zb, Re w).
Hypersurface from_graph(const TruncatedSeries &phi, int N);

/// rho evaluated on the graph; the zero series for a consistent Hypersurface.
TruncatedSeries graph_residual(const Hypersurface &M);

/// Ambient series restricted to M: w -> s + i phi, wb -> s - i phi.
TruncatedSeries restrict_to_graph(const TruncatedSeries &ambient, const Hypersurface &M);

/// First-order operator sum_i X^i d/dx_i with one coefficient per coordinate.
class VectorField
{
public:
    VectorField() = default;
    explicit VectorField(std::vector<TruncatedSeries> coeffs);

    int dim() const { return static_cast<int>(coeffs_.size()); }
    int order() const;
    const TruncatedSeries &operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
    const std::vector<TruncatedSeries> &coeffs() const { return coeffs_; }

    TruncatedSeries apply(const TruncatedSeries &f) const;
    VectorField conjugate(const VariablePairing &pairing) const;
    std::vector<CScalar> value_at_zero() const;

    VectorField &operator+=(const VectorField &o);
    VectorField &operator-=(const VectorField &o);
    friend VectorField operator+(VectorField a, const VectorField &b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField &b) { return a -= b; }
    friend VectorField operator*(const TruncatedSeries &f, const VectorField &X);
    friend VectorField operator*(const CScalar &c, const VectorField &X);

private:
    std::vector<TruncatedSeries> coeffs_;
};

VectorField bracket(const VectorField &X, const VectorField &Y);

/// 1-form sum_i w_i dx_i.
class OneForm
{
public:
    OneForm() = default;
    explicit OneForm(std::vector<TruncatedSeries> coeffs);

    int dim() const { return static_cast<int>(coeffs_.size()); }
    const TruncatedSeries &operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
    const std::vector<TruncatedSeries> &coeffs() const { return coeffs_; }

    TruncatedSeries pair(const VectorField &X) const;
    OneForm conjugate(const VariablePairing &pairing) const;

    OneForm &operator+=(const OneForm &o);
    friend OneForm operator+(OneForm a, const OneForm &b) { return a += b; }
    friend OneForm operator*(const TruncatedSeries &f, const OneForm &w);
    friend OneForm operator*(const CScalar &c, const OneForm &w);

private:
    std::vector<TruncatedSeries> coeffs_;
};

/// d omega(X, Y) = X<omega,Y> - Y<omega,X> - <omega,[X,Y]>.
TruncatedSeries exterior_derivative(const OneForm &omega, const VectorField &X, const VectorField &Y);

/// Interior product X _| d omega, the Lie derivative of a holomorphic form along a CR field.
OneForm contract_exterior_derivative(const VectorField &X, const OneForm &omega);

/// Basis T, L_A, Lbar_A of CT M with its dual coframe theta, theta^A, theta^Abar.
struct Frame {
    int n = 0;
    VectorField T;
    std::vector<VectorField> L;
    std::vector<VectorField> Lbar;
    OneForm theta;
    std::vector<OneForm> thetaA;
    std::vector<OneForm> thetaAbar;

    IntrinsicLayout layout() const { return {n}; }
    int order() const;
    /// (T, L_1..L_n, Lbar_1..Lbar_n)
    std::vector<VectorField> basis() const;
    /// (theta, theta^1..theta^n, theta^1bar..theta^nbar)
    std::vector<OneForm> cobasis() const;
};

/// T = d/ds, Lbar_j = d/dzb_j + a_j d/ds annihilating s + i phi, L_j = conj(Lbar_j).
Frame build_frame(const Hypersurface &M);

/// L'_A = sum_B P(B, A) L_B with a constant invertible P; the coframe follows.
Frame change_cr_basis(const Frame &F, const DenseMatrix<CScalar> &P);

/// Constant change making L_{r_k+1}(0)..L_n(0) span the k-th subspace for each k.
/// subspaces[k] holds a basis (coordinates in the current L basis) of a
/// decreasing chain; subspaces[0] is normally all of C^n.
DenseMatrix<CScalar> adapted_basis_change(int n, const std::vector<std::vector<std::vector<CScalar>>> &subspaces);

/// Labeled structure functions R^C_{Abar B}, R^C_{D B}, R^C_{Abar}, R^C_B.
struct StructureFunction {
    std::string label;
    TruncatedSeries value;
};
std::vector<StructureFunction> structure_functions(const Frame &F);

/// Labeled duality pairings <cobasis_a, basis_b> - delta_ab.
std::vector<StructureFunction> duality_defects(const Frame &F);

} // namespace crjet

#endif
