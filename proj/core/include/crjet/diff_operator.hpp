#ifndef CRJET_DIFF_OPERATOR_HPP
#define CRJET_DIFF_OPERATOR_HPP

#include <map>
#include <string>

#include <crjet/hypersurface.hpp>

namespace crjet
{

/// Linear differential operator sum_beta c_beta d^beta with series coefficients,
/// all known through a common order.
class DiffOperator
{
public:
    DiffOperator() = default;
    DiffOperator(int nvars, int order) : nvars_(nvars), order_(order) {}

    static DiffOperator identity(int nvars, int order);
    static DiffOperator from_field(const VectorField &X);

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    /// Highest |beta| with a nonzero coefficient, -1 for the zero operator.
    int degree() const;
    bool is_zero() const;
    const std::map<MultiIndex, TruncatedSeries> &terms() const { return terms_; }

    TruncatedSeries apply(const TruncatedSeries &f) const;

    DiffOperator &operator+=(const DiffOperator &o);
    DiffOperator &operator-=(const DiffOperator &o);
    friend DiffOperator operator+(DiffOperator a, const DiffOperator &b) { return a += b; }
    friend DiffOperator operator-(DiffOperator a, const DiffOperator &b) { return a -= b; }
    /// Composition: (a * b) f = a(b f).
    friend DiffOperator operator*(const DiffOperator &a, const DiffOperator &b);
    friend DiffOperator operator*(const TruncatedSeries &f, const DiffOperator &a);

    DiffOperator truncated(int order) const;
    /// Adds c d^beta; the operator order drops to c.order() if lower.
    void add_term(const MultiIndex &beta, const TruncatedSeries &c);

private:
    void lower_order(int order);

    int nvars_ = 0;
    int order_ = 0;
    std::map<MultiIndex, TruncatedSeries> terms_;
};

DiffOperator commutator(const DiffOperator &a, const DiffOperator &b);

/// Applies both operators to every monomial of degree <= max_degree and
/// compares the results through the lower of the two result orders. Returns
/// the first differing monomial as a string, or an empty string.
std::string compare_on_monomials(const DiffOperator &a, const DiffOperator &b, int max_degree);

} // namespace crjet

#endif
