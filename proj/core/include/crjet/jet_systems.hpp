#ifndef CRJET_JET_SYSTEMS_HPP
#define CRJET_JET_SYSTEMS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <crjet/expr.hpp>
#include <crjet/series.hpp>

namespace crjet
{

/// (component i, derivative multi-index beta), 0-based component.
using JetKey = std::pair<int, MultiIndex>;

/// Multi-indices of q variables with |beta| <= k in the documented order:
/// by total degree, then x1-heavy first (exponent vectors descending).
std::vector<MultiIndex> jet_multi_indices(int q, int k);

/// Coordinates lambda^beta_i of a k-jet of a map R^q -> R^m.
class JetVector
{
public:
    JetVector() = default;
    JetVector(int q, int m, int k);

    int q() const { return q_; }
    int m() const { return m_; }
    int k() const { return k_; }

    const Rational &at(int i, const MultiIndex &beta) const;
    void set(int i, const MultiIndex &beta, Rational v);
    /// Every (i, beta), components outermost, betas in jet_multi_indices order.
    std::vector<JetKey> keys() const;

    /// Jet of the truncated series maps f_i (q variables) through order k.
    static JetVector from_series(const std::vector<TruncatedSeries> &f, int k);
    /// Taylor polynomials sum lambda^beta_i x^beta / beta!, known through order k.
    std::vector<TruncatedSeries> to_series() const;
    /// Same jet cut to order k' <= k.
    JetVector truncated(int k) const;

    friend bool operator==(const JetVector &a, const JetVector &b) = default;

private:
    int q_ = 0;
    int m_ = 0;
    int k_ = 0;
    std::map<JetKey, Rational> values_;
};

/// d^alpha f_j = r^alpha_j(x, d^beta f), |alpha| = k + 1, |beta| <= k.
///
/// Right-hand sides are expressions in x1..xq, f1..fm and d(fi, xa, xb, ...)
/// for derivatives of order <= k.
struct CompleteSystem {
    int q = 1;
    int m = 1;
    int k = 0;
    /// Closed box [lo, hi] per axis on which the right-hand sides may be evaluated.
    std::vector<std::pair<double, double>> box;
    std::map<JetKey, Expr> rhs;

    /// Checks arities, that every required (j, alpha) has a right-hand side and
    /// that right-hand sides only reference derivatives of order <= k.
    void validate() const;
};

/// Parses a d(fi, xa, ...) or fi reference into a jet key; nullopt for other nodes.
std::optional<JetKey> jet_reference(const ExprNode &node, int q, int m);
/// Canonical text of a jet reference: "f1" or "d(f1, x1, x2)".
std::string jet_reference_name(int i, const MultiIndex &beta);

/// Unknowns (i, beta), |beta| <= k, become components of a k = 0 system; the
/// enumeration is JetVector::keys() order. k = 0 systems come back unchanged.
CompleteSystem reduce_to_first_order(const CompleteSystem &S);
/// Initial data of the reduced system.
JetVector reduce_jet(const JetVector &jet, const CompleteSystem &S);

struct Grid {
    /// Sample coordinates per axis; every axis includes its own marching origin 0 implicitly.
    std::vector<std::vector<double>> axes;

    static Grid uniform(int q, double lo, double hi, int points);
    std::size_t size() const;
    std::vector<double> point(std::size_t index) const;
};

struct ReconstructionResult {
    Grid grid;
    double step = 0;
    /// values[p][j] = f_j at grid point p (row-major, last axis fastest).
    std::vector<std::vector<double>> values;
    /// Max-norm deviation from a supplied reference solution, or -1.
    double max_error = -1;
};

/// Axis-by-axis fixed-step RK4 marching: x1 from 0, then x2 from every reached
/// (x1, 0, ...), and so on. Throws when the march leaves the box or a value is not finite.
ReconstructionResult integrate(const CompleteSystem &S, const JetVector &lambda0, const Grid &grid, double step);

/// Max-norm deviation of a result from a reference f(x) -> values.
double max_deviation(const ReconstructionResult &r,
                     const std::function<std::vector<double>(const std::vector<double> &)> &reference);

struct TaylorResult {
    JetVector jet;
    /// Overdetermined derivatives compared for consistency.
    int consistency_checks = 0;
};

/// Formal differentiation of the system from the k-jet up to target_order; all
/// paths to the same derivative must agree exactly.
TaylorResult taylor_propagate(const CompleteSystem &S, const JetVector &lambda0, int target_order);

/// Member of a parameterized family of ambient maps.
struct FamilyMember {
    std::string label;
    std::vector<CScalar> parameters;
    std::vector<TruncatedSeries> components;
};

struct InjectivityReport {
    int jet_order = 0;
    int full_order = 0;
    int pairs = 0;
    int distinct_parameter_pairs = 0;
    int distinct_jet_pairs = 0;
    int equal_jet_pairs = 0;
    /// Pairs with equal jets whose maps agree through full_order.
    int equal_jet_equal_map_pairs = 0;
    std::vector<std::string> counterexamples;

    bool passed() const { return counterexamples.empty(); }
};

/// Holomorphic jet of an ambient map at 0 through order k (coefficients of z, w only).
std::vector<TruncatedSeries> ambient_jet(const std::vector<TruncatedSeries> &F, int k);

/// Compares every pair of members: distinct parameters must give distinct
/// jets, equal jets must give maps equal through full_order.
InjectivityReport jet_injectivity_demo(const std::vector<FamilyMember> &family, int jet_order, int full_order);

} // namespace crjet

#endif
