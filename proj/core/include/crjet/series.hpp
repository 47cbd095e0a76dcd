#ifndef CRJET_SERIES_HPP
#define CRJET_SERIES_HPP

#include <compare>
#include <iosfwd>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace crjet
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class OrderExhausted : public Error
{
public:
    using Error::Error;
};

using Rational = mpq_class;

/// p/q in lowest terms with q > 0.
Rational make_rational(long num, long den = 1);
std::string to_string(const Rational &q);

/// Exact complex rational re + i*im.
class CScalar
{
public:
    CScalar() = default;
    CScalar(long re) : re_(re) {}
    // Rationals built from (num, den) pairs are not reduced by gmpxx; do it here.
    CScalar(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
    CScalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }

    static CScalar i() { return {Rational(0), Rational(1)}; }

    const Rational &re() const { return re_; }
    const Rational &im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    CScalar conj() const { return {re_, -im_}; }
    Rational norm2() const { return re_ * re_ + im_ * im_; }
    CScalar inverse() const;

    CScalar &operator+=(const CScalar &o);
    CScalar &operator-=(const CScalar &o);
    CScalar &operator*=(const CScalar &o);
    CScalar &operator/=(const CScalar &o);

    friend CScalar operator+(CScalar a, const CScalar &b) { return a += b; }
    friend CScalar operator-(CScalar a, const CScalar &b) { return a -= b; }
    friend CScalar operator*(CScalar a, const CScalar &b) { return a *= b; }
    friend CScalar operator/(CScalar a, const CScalar &b) { return a /= b; }
    CScalar operator-() const { return {-re_, -im_}; }

    friend bool operator==(const CScalar &a, const CScalar &b) { return a.re_ == b.re_ && a.im_ == b.im_; }

    /// Canonical rendering: "p/q", "p/q*i", "a+b*i".
    std::string to_string() const;

private:
    Rational re_{0};
    Rational im_{0};
};

/// acc += a * b without temporaries for the common real cases.
void add_product(CScalar &acc, const CScalar &a, const CScalar &b);

class MultiIndex
{
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exponents);

    static MultiIndex zero(int nvars);
    static MultiIndex unit(int nvars, int var);

    int nvars() const { return static_cast<int>(exps_.size()); }
    int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
    int total() const;
    const std::vector<int> &exponents() const { return exps_; }

    MultiIndex operator+(const MultiIndex &o) const;

    auto operator<=>(const MultiIndex &) const = default;
    bool operator==(const MultiIndex &) const = default;

    std::string to_string() const;

private:
    std::vector<int> exps_;
};

/// Involution on variable indices used by conjugation.
class VariablePairing
{
public:
    explicit VariablePairing(std::vector<int> image);

    /// (z_1..z_n, zb_1..zb_n, s): z_j <-> zb_j, s fixed.
    static VariablePairing intrinsic(int n);
    /// (z_1..z_N, zb_1..zb_N): z_j <-> zb_j.
    static VariablePairing ambient(int N);

    int size() const { return static_cast<int>(image_.size()); }
    int operator()(int var) const { return image_[static_cast<std::size_t>(var)]; }

private:
    std::vector<int> image_;
};

/// Exact multivariate formal power series known through total degree order().
///
/// Coefficients of total degree above order() are unknown, not zero, unless the
/// series is flagged polynomial: then the stored terms are the whole function.
/// Terms are kept sorted by lexicographic exponent order with no stored zero.
class TruncatedSeries
{
public:
    static constexpr int kMaxVars = 10;
    static constexpr int kMaxOrder = 60;

    struct Term {
        std::uint64_t key;
        CScalar coeff;
    };

    TruncatedSeries() = default;
    TruncatedSeries(int nvars, int order);

    static TruncatedSeries constant(int nvars, int order, const CScalar &c);
    static TruncatedSeries variable(int nvars, int order, int var);
    static TruncatedSeries monomial(int nvars, int order, const MultiIndex &m, const CScalar &c);

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Highest stored total degree, -1 for the zero series.
    int max_degree() const;
    /// True when the tail above order() is known to vanish. Constants, variables
    /// and monomials are polynomial; sums, products, derivatives, conjugates and
    /// compositions stay polynomial while no nonzero term is truncated away.
    bool is_polynomial() const { return polynomial_; }
    /// Asserts that the stored terms are the whole function.
    TruncatedSeries as_polynomial() const;

    CScalar coeff(const MultiIndex &m) const;
    CScalar constant_term() const;

    const std::vector<Term> &terms() const { return terms_; }
    MultiIndex exponents_of(const Term &t) const;
    int degree_of(const Term &t) const;

    /// Same series with order lowered to new_order (no-op when not lower).
    TruncatedSeries truncated(int new_order) const;
    TruncatedSeries homogeneous_part(int degree) const;
    /// Same coefficients, declared to be known through new_order. A raise keeps
    /// the polynomial flag, so it is exact for polynomials and an assertion otherwise.
    TruncatedSeries with_order(int new_order) const;

    TruncatedSeries &operator+=(const TruncatedSeries &o);
    TruncatedSeries &operator-=(const TruncatedSeries &o);
    TruncatedSeries &operator*=(const CScalar &c);
    TruncatedSeries operator-() const;

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries &b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries &b) { return a -= b; }
    friend TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b);
    friend TruncatedSeries operator*(TruncatedSeries a, const CScalar &c) { return a *= c; }
    friend TruncatedSeries operator*(const CScalar &c, TruncatedSeries a) { return a *= c; }

    friend bool operator==(const TruncatedSeries &a, const TruncatedSeries &b);

    std::string to_string(std::span<const std::string> names = {}) const;

    // Used by the arithmetic kernels; keys must be sorted and unique.
    static TruncatedSeries from_sorted_terms(int nvars, int order, std::vector<Term> terms, bool polynomial = false);

private:
    int nvars_ = 0;
    int order_ = 0;
    bool polynomial_ = true;
    std::vector<Term> terms_;
};

std::ostream &operator<<(std::ostream &os, const TruncatedSeries &a);
std::ostream &operator<<(std::ostream &os, const CScalar &c);

TruncatedSeries add(const TruncatedSeries &a, const TruncatedSeries &b);
TruncatedSeries mul(const TruncatedSeries &a, const TruncatedSeries &b);
TruncatedSeries pow(const TruncatedSeries &a, int e);
/// Formal partial derivative; the result is known one degree less.
TruncatedSeries derive(const TruncatedSeries &a, int var);
TruncatedSeries conjugate(const TruncatedSeries &a, const VariablePairing &pairing);
/// a(subs_0, ..., subs_{k-1}); substitutions with a constant term require a polynomial a.
TruncatedSeries compose(const TruncatedSeries &a, std::span<const TruncatedSeries> subs);
TruncatedSeries invert_unit(const TruncatedSeries &a);
/// Taylor expansion of the polynomial a about point (one coordinate per variable).
TruncatedSeries recenter(const TruncatedSeries &a, std::span<const CScalar> point);

/// Value of a polynomial series at a point.
CScalar evaluate(const TruncatedSeries &a, std::span<const CScalar> point);

} // namespace crjet

#endif
