#include <crjet/series.hpp>

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace crjet
{

namespace
{

constexpr int kBits = 6;
constexpr std::uint64_t kFieldMask = (std::uint64_t{1} << kBits) - 1;

int shift_of(int var)
{
    return kBits * (TruncatedSeries::kMaxVars - 1 - var);
}

int field(std::uint64_t key, int var)
{
    return static_cast<int>((key >> shift_of(var)) & kFieldMask);
}

std::uint64_t unit_key(int var)
{
    return std::uint64_t{1} << shift_of(var);
}

int key_degree(std::uint64_t key)
{
    int d = 0;
    for (; key != 0; key >>= kBits) {
        d += static_cast<int>(key & kFieldMask);
    }
    return d;
}

std::uint64_t pack(const MultiIndex &m)
{
    std::uint64_t key = 0;
    for (int v = 0; v < m.nvars(); ++v) {
        if (m[v] < 0 || m[v] > TruncatedSeries::kMaxOrder) {
            throw Error("exponent out of range in " + m.to_string());
        }
        key |= static_cast<std::uint64_t>(m[v]) << shift_of(v);
    }
    return key;
}

MultiIndex unpack(std::uint64_t key, int nvars)
{
    std::vector<int> e(static_cast<std::size_t>(nvars));
    for (int v = 0; v < nvars; ++v) {
        e[static_cast<std::size_t>(v)] = field(key, v);
    }
    return MultiIndex(std::move(e));
}

void check_same_nvars(const TruncatedSeries &a, const TruncatedSeries &b)
{
    if (a.nvars() != b.nvars()) {
        throw Error("series variable count mismatch: " + std::to_string(a.nvars()) + " vs " +
                    std::to_string(b.nvars()));
    }
}

using Accumulator = std::unordered_map<std::uint64_t, CScalar>;

TruncatedSeries from_accumulator(int nvars, int order, Accumulator &acc)
{
    std::vector<TruncatedSeries::Term> terms;
    terms.reserve(acc.size());
    for (auto &[k, c] : acc) {
        if (!c.is_zero()) {
            terms.push_back({k, std::move(c)});
        }
    }
    std::sort(terms.begin(), terms.end(), [](const auto &x, const auto &y) { return x.key < y.key; });
    return TruncatedSeries::from_sorted_terms(nvars, order, std::move(terms));
}

} // namespace

Rational make_rational(long num, long den)
{
    if (den == 0) {
        throw Error("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational &q)
{
    return q.get_str();
}

// CScalar

CScalar CScalar::inverse() const
{
    if (is_zero()) {
        throw Error("division by zero");
    }
    Rational n = norm2();
    return {re_ / n, -im_ / n};
}

CScalar &CScalar::operator+=(const CScalar &o)
{
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

CScalar &CScalar::operator-=(const CScalar &o)
{
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

CScalar &CScalar::operator*=(const CScalar &o)
{
    if (is_real() && o.is_real()) {
        re_ *= o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
}

CScalar &CScalar::operator/=(const CScalar &o)
{
    if (o.is_real()) {
        if (sgn(o.re_) == 0) {
            throw Error("division by zero");
        }
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

std::string CScalar::to_string() const
{
    if (sgn(im_) == 0) {
        return re_.get_str();
    }
    std::string imag = (im_ == 1) ? "i" : (im_ == -1) ? "-i" : im_.get_str() + "*i";
    if (sgn(re_) == 0) {
        return imag;
    }
    if (sgn(im_) > 0) {
        return re_.get_str() + "+" + imag;
    }
    return re_.get_str() + imag;
}

void add_product(CScalar &acc, const CScalar &a, const CScalar &b)
{
    CScalar t = a;
    t *= b;
    acc += t;
}

// MultiIndex

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents))
{
    for (int e : exps_) {
        if (e < 0) {
            throw Error("negative exponent in multi-index");
        }
    }
}

MultiIndex MultiIndex::zero(int nvars)
{
    return MultiIndex(std::vector<int>(static_cast<std::size_t>(nvars), 0));
}

MultiIndex MultiIndex::unit(int nvars, int var)
{
    std::vector<int> e(static_cast<std::size_t>(nvars), 0);
    e.at(static_cast<std::size_t>(var)) = 1;
    return MultiIndex(std::move(e));
}

int MultiIndex::total() const
{
    int t = 0;
    for (int e : exps_) {
        t += e;
    }
    return t;
}

MultiIndex MultiIndex::operator+(const MultiIndex &o) const
{
    if (o.nvars() != nvars()) {
        throw Error("multi-index size mismatch");
    }
    std::vector<int> e = exps_;
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] += o.exps_[i];
    }
    return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (i != 0) {
            s += ",";
        }
        s += std::to_string(exps_[i]);
    }
    return s + ")";
}

// VariablePairing

VariablePairing::VariablePairing(std::vector<int> image) : image_(std::move(image))
{
    const int n = size();
    for (int v = 0; v < n; ++v) {
        int w = image_[static_cast<std::size_t>(v)];
        if (w < 0 || w >= n || image_[static_cast<std::size_t>(w)] != v) {
            throw Error("variable pairing is not an involution");
        }
    }
}

VariablePairing VariablePairing::intrinsic(int n)
{
    std::vector<int> img(static_cast<std::size_t>(2 * n + 1));
    for (int j = 0; j < n; ++j) {
        img[static_cast<std::size_t>(j)] = j + n;
        img[static_cast<std::size_t>(j + n)] = j;
    }
    img[static_cast<std::size_t>(2 * n)] = 2 * n;
    return VariablePairing(std::move(img));
}

VariablePairing VariablePairing::ambient(int N)
{
    std::vector<int> img(static_cast<std::size_t>(2 * N));
    for (int j = 0; j < N; ++j) {
        img[static_cast<std::size_t>(j)] = j + N;
        img[static_cast<std::size_t>(j + N)] = j;
    }
    return VariablePairing(std::move(img));
}

// TruncatedSeries

TruncatedSeries::TruncatedSeries(int nvars, int order) : nvars_(nvars), order_(order)
{
    if (nvars < 0 || nvars > kMaxVars) {
        throw Error("unsupported number of variables: " + std::to_string(nvars));
    }
    if (order < 0) {
        throw OrderExhausted("series order exhausted");
    }
    if (order > kMaxOrder) {
        throw Error("truncation order above " + std::to_string(kMaxOrder));
    }
}

TruncatedSeries TruncatedSeries::from_sorted_terms(int nvars, int order, std::vector<Term> terms, bool polynomial)
{
    TruncatedSeries s(nvars, order);
    s.terms_ = std::move(terms);
    s.polynomial_ = polynomial;
    return s;
}

TruncatedSeries TruncatedSeries::as_polynomial() const
{
    TruncatedSeries s = *this;
    s.polynomial_ = true;
    return s;
}

TruncatedSeries TruncatedSeries::constant(int nvars, int order, const CScalar &c)
{
    TruncatedSeries s(nvars, order);
    if (!c.is_zero()) {
        s.terms_.push_back({0, c});
    }
    return s;
}

TruncatedSeries TruncatedSeries::variable(int nvars, int order, int var)
{
    return monomial(nvars, order, MultiIndex::unit(nvars, var), CScalar(1));
}

TruncatedSeries TruncatedSeries::monomial(int nvars, int order, const MultiIndex &m, const CScalar &c)
{
    if (m.nvars() != nvars) {
        throw Error("monomial variable count mismatch");
    }
    TruncatedSeries s(nvars, order);
    if (!c.is_zero()) {
        if (m.total() <= order) {
            s.terms_.push_back({pack(m), c});
        } else {
            s.polynomial_ = false;
        }
    }
    return s;
}

int TruncatedSeries::max_degree() const
{
    int d = -1;
    for (const auto &t : terms_) {
        d = std::max(d, key_degree(t.key));
    }
    return d;
}

CScalar TruncatedSeries::coeff(const MultiIndex &m) const
{
    if (m.nvars() != nvars_) {
        throw Error("monomial variable count mismatch");
    }
    if (m.total() > order_) {
        throw OrderExhausted("coefficient " + m.to_string() + " is beyond the truncation order");
    }
    const std::uint64_t k = pack(m);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const Term &t, std::uint64_t x) { return t.key < x; });
    if (it != terms_.end() && it->key == k) {
        return it->coeff;
    }
    return {};
}

CScalar TruncatedSeries::constant_term() const
{
    if (!terms_.empty() && terms_.front().key == 0) {
        return terms_.front().coeff;
    }
    return {};
}

MultiIndex TruncatedSeries::exponents_of(const Term &t) const
{
    return unpack(t.key, nvars_);
}

int TruncatedSeries::degree_of(const Term &t) const
{
    return key_degree(t.key);
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const
{
    if (new_order >= order_) {
        return *this;
    }
    TruncatedSeries s(nvars_, new_order);
    s.polynomial_ = polynomial_;
    for (const auto &t : terms_) {
        if (key_degree(t.key) <= new_order) {
            s.terms_.push_back(t);
        } else {
            s.polynomial_ = false;
        }
    }
    return s;
}

TruncatedSeries TruncatedSeries::homogeneous_part(int degree) const
{
    TruncatedSeries s(nvars_, order_);
    s.polynomial_ = polynomial_;
    for (const auto &t : terms_) {
        if (key_degree(t.key) == degree) {
            s.terms_.push_back(t);
        }
    }
    return s;
}

TruncatedSeries TruncatedSeries::with_order(int new_order) const
{
    if (new_order < max_degree()) {
        return truncated(new_order);
    }
    TruncatedSeries s(nvars_, new_order);
    s.terms_ = terms_;
    s.polynomial_ = polynomial_;
    return s;
}

namespace
{

// Merge of two sorted term lists with sign; drops terms above order.
std::vector<TruncatedSeries::Term> merge_terms(const std::vector<TruncatedSeries::Term> &x,
                                               const std::vector<TruncatedSeries::Term> &y, bool subtract,
                                               int order)
{
    std::vector<TruncatedSeries::Term> out;
    out.reserve(x.size() + y.size());
    auto i = x.begin();
    auto j = y.begin();
    auto keep = [order](std::uint64_t k) { return key_degree(k) <= order; };
    while (i != x.end() || j != y.end()) {
        if (j == y.end() || (i != x.end() && i->key < j->key)) {
            if (keep(i->key)) {
                out.push_back(*i);
            }
            ++i;
        } else if (i == x.end() || j->key < i->key) {
            if (keep(j->key)) {
                out.push_back({j->key, subtract ? -j->coeff : j->coeff});
            }
            ++j;
        } else {
            CScalar c = subtract ? i->coeff - j->coeff : i->coeff + j->coeff;
            if (!c.is_zero() && keep(i->key)) {
                out.push_back({i->key, std::move(c)});
            }
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

TruncatedSeries &TruncatedSeries::operator+=(const TruncatedSeries &o)
{
    check_same_nvars(*this, o);
    order_ = std::min(order_, o.order_);
    polynomial_ = polynomial_ && o.polynomial_ && max_degree() <= order_ && o.max_degree() <= order_;
    terms_ = merge_terms(terms_, o.terms_, false, order_);
    return *this;
}

TruncatedSeries &TruncatedSeries::operator-=(const TruncatedSeries &o)
{
    check_same_nvars(*this, o);
    order_ = std::min(order_, o.order_);
    polynomial_ = polynomial_ && o.polynomial_ && max_degree() <= order_ && o.max_degree() <= order_;
    terms_ = merge_terms(terms_, o.terms_, true, order_);
    return *this;
}

TruncatedSeries &TruncatedSeries::operator*=(const CScalar &c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto &t : terms_) {
        t.coeff *= c;
    }
    return *this;
}

TruncatedSeries TruncatedSeries::operator-() const
{
    TruncatedSeries s = *this;
    for (auto &t : s.terms_) {
        t.coeff = -t.coeff;
    }
    return s;
}

TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b)
{
    check_same_nvars(a, b);
    const int order = std::min(a.order(), b.order());
    if (a.is_zero() || b.is_zero()) {
        TruncatedSeries z(a.nvars(), order);
        z.polynomial_ = (a.is_zero() && a.polynomial_) || (b.is_zero() && b.polynomial_);
        return z;
    }
    // Leading forms multiply to a nonzero form, so nothing is lost iff the degrees fit.
    const bool polynomial = a.polynomial_ && b.polynomial_ && a.max_degree() + b.max_degree() <= order;
    // Bucket by degree so pairs beyond the order are never visited.
    auto bucket = [order](const TruncatedSeries &s) {
        std::vector<std::vector<const TruncatedSeries::Term *>> buckets(static_cast<std::size_t>(order) + 1);
        for (const auto &t : s.terms()) {
            int d = key_degree(t.key);
            if (d <= order) {
                buckets[static_cast<std::size_t>(d)].push_back(&t);
            }
        }
        return buckets;
    };
    const auto ba = bucket(a);
    const auto bb = bucket(b);
    Accumulator acc;
    acc.reserve(a.size() + b.size());
    for (int da = 0; da <= order; ++da) {
        for (const auto *ta : ba[static_cast<std::size_t>(da)]) {
            for (int db = 0; da + db <= order; ++db) {
                for (const auto *tb : bb[static_cast<std::size_t>(db)]) {
                    add_product(acc[ta->key + tb->key], ta->coeff, tb->coeff);
                }
            }
        }
    }
    auto out = from_accumulator(a.nvars(), order, acc);
    out.polynomial_ = polynomial;
    return out;
}

bool operator==(const TruncatedSeries &a, const TruncatedSeries &b)
{
    if (a.nvars_ != b.nvars_ || a.order_ != b.order_ || a.terms_.size() != b.terms_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].key != b.terms_[i].key || !(a.terms_[i].coeff == b.terms_[i].coeff)) {
            return false;
        }
    }
    return true;
}

std::string TruncatedSeries::to_string(std::span<const std::string> names) const
{
    std::ostringstream os;
    if (terms_.empty()) {
        os << "0";
    }
    bool first = true;
    for (const auto &t : terms_) {
        if (!first) {
            os << " + ";
        }
        first = false;
        os << "(" << t.coeff.to_string() << ")";
        for (int v = 0; v < nvars_; ++v) {
            int e = field(t.key, v);
            if (e == 0) {
                continue;
            }
            os << "*";
            if (static_cast<int>(names.size()) > v) {
                os << names[static_cast<std::size_t>(v)];
            } else {
                os << "x" << v;
            }
            if (e > 1) {
                os << "^" << e;
            }
        }
    }
    os << " + O(" << order_ + 1 << ")";
    return os.str();
}

std::ostream &operator<<(std::ostream &os, const TruncatedSeries &a)
{
    return os << a.to_string();
}

std::ostream &operator<<(std::ostream &os, const CScalar &c)
{
    return os << c.to_string();
}

// Free operations

TruncatedSeries add(const TruncatedSeries &a, const TruncatedSeries &b)
{
    return a + b;
}

TruncatedSeries mul(const TruncatedSeries &a, const TruncatedSeries &b)
{
    return a * b;
}

TruncatedSeries pow(const TruncatedSeries &a, int e)
{
    if (e < 0) {
        throw Error("negative power of a series");
    }
    TruncatedSeries result = TruncatedSeries::constant(a.nvars(), a.order(), CScalar(1));
    TruncatedSeries base = a;
    while (e > 0) {
        if (e & 1) {
            result = result * base;
        }
        e >>= 1;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

TruncatedSeries derive(const TruncatedSeries &a, int var)
{
    if (var < 0 || var >= a.nvars()) {
        throw Error("derivative variable out of range");
    }
    if (a.order() == 0) {
        throw OrderExhausted("cannot differentiate a series known only through order 0");
    }
    std::vector<TruncatedSeries::Term> out;
    out.reserve(a.size());
    const std::uint64_t u = unit_key(var);
    for (const auto &t : a.terms()) {
        int e = field(t.key, var);
        if (e == 0) {
            continue;
        }
        out.push_back({t.key - u, t.coeff * CScalar(e)});
    }
    // Subtracting the same unit from every key preserves the sort order.
    return TruncatedSeries::from_sorted_terms(a.nvars(), a.order() - 1, std::move(out), a.is_polynomial());
}

TruncatedSeries conjugate(const TruncatedSeries &a, const VariablePairing &pairing)
{
    if (pairing.size() != a.nvars()) {
        throw Error("pairing size does not match series variables");
    }
    std::vector<TruncatedSeries::Term> out;
    out.reserve(a.size());
    for (const auto &t : a.terms()) {
        std::uint64_t k = 0;
        for (int v = 0; v < a.nvars(); ++v) {
            k |= static_cast<std::uint64_t>(field(t.key, v)) << shift_of(pairing(v));
        }
        out.push_back({k, t.coeff.conj()});
    }
    std::sort(out.begin(), out.end(), [](const auto &x, const auto &y) { return x.key < y.key; });
    return TruncatedSeries::from_sorted_terms(a.nvars(), a.order(), std::move(out), a.is_polynomial());
}

TruncatedSeries compose(const TruncatedSeries &a, std::span<const TruncatedSeries> subs)
{
    if (static_cast<int>(subs.size()) != a.nvars()) {
        throw Error("compose needs one substitution per variable");
    }
    if (subs.empty()) {
        throw Error("compose of a series without variables");
    }
    const int out_vars = subs.front().nvars();
    for (const auto &s : subs) {
        if (s.nvars() != out_vars) {
            throw Error("substitutions disagree on variable count");
        }
    }
    std::vector<int> max_exp(static_cast<std::size_t>(a.nvars()), 0);
    for (const auto &t : a.terms()) {
        for (int v = 0; v < a.nvars(); ++v) {
            max_exp[static_cast<std::size_t>(v)] = std::max(max_exp[static_cast<std::size_t>(v)], field(t.key, v));
        }
    }
    int order = a.order();
    bool has_constant = false;
    for (int v = 0; v < a.nvars(); ++v) {
        if (max_exp[static_cast<std::size_t>(v)] == 0) {
            continue;
        }
        const auto &s = subs[static_cast<std::size_t>(v)];
        order = std::min(order, s.order());
        has_constant = has_constant || !s.constant_term().is_zero();
    }
    // The unknown tail of a truncated series involves every variable.
    for (const auto &s : subs) {
        has_constant = has_constant || (!a.is_polynomial() && !s.constant_term().is_zero());
    }
    if (has_constant && !a.is_polynomial()) {
        throw Error("substitution with a nonzero constant term into an order-limited series");
    }

    // Powers of every substitution, truncated at the result order.
    std::vector<std::vector<TruncatedSeries>> powers(static_cast<std::size_t>(a.nvars()));
    for (int v = 0; v < a.nvars(); ++v) {
        auto &pv = powers[static_cast<std::size_t>(v)];
        pv.push_back(TruncatedSeries::constant(out_vars, order, CScalar(1)));
        if (max_exp[static_cast<std::size_t>(v)] > 0) {
            TruncatedSeries base = subs[static_cast<std::size_t>(v)].truncated(order);
            for (int e = 1; e <= max_exp[static_cast<std::size_t>(v)]; ++e) {
                pv.push_back(pv.back() * base);
            }
        }
    }

    // Horner-style grouping on the leading variable: terms sharing a prefix of
    // exponents share the partial product.
    TruncatedSeries result(out_vars, order);
    std::vector<TruncatedSeries> prefix(static_cast<std::size_t>(a.nvars()) + 1);
    std::vector<int> prev(static_cast<std::size_t>(a.nvars()), -1);
    prefix[0] = TruncatedSeries::constant(out_vars, order, CScalar(1));
    for (const auto &t : a.terms()) {
        int v0 = 0;
        while (v0 < a.nvars() && prev[static_cast<std::size_t>(v0)] == field(t.key, v0)) {
            ++v0;
        }
        for (int v = v0; v < a.nvars(); ++v) {
            int e = field(t.key, v);
            prev[static_cast<std::size_t>(v)] = e;
            const auto &p = prefix[static_cast<std::size_t>(v)];
            prefix[static_cast<std::size_t>(v) + 1] = (e == 0) ? p : p * powers[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)];
        }
        result += prefix[static_cast<std::size_t>(a.nvars())] * t.coeff;
    }
    if (!a.is_polynomial()) {
        return TruncatedSeries::from_sorted_terms(result.nvars(), result.order(), result.terms(), false);
    }
    return result;
}

TruncatedSeries invert_unit(const TruncatedSeries &a)
{
    const CScalar c0 = a.constant_term();
    if (c0.is_zero()) {
        throw Error("cannot invert a series with zero constant term");
    }
    // Newton iteration b <- b (2 - a b), doubling the correct degree each step.
    TruncatedSeries b = TruncatedSeries::constant(a.nvars(), a.order(), c0.inverse());
    const TruncatedSeries two = TruncatedSeries::constant(a.nvars(), a.order(), CScalar(2));
    for (int known = 0; known < a.order(); known = 2 * known + 1) {
        b = b * (two - a * b);
    }
    return b;
}

TruncatedSeries recenter(const TruncatedSeries &a, std::span<const CScalar> point)
{
    if (static_cast<int>(point.size()) != a.nvars()) {
        throw Error("recenter point dimension mismatch");
    }
    if (!a.is_polynomial()) {
        throw Error("cannot recenter an order-limited series exactly");
    }
    std::vector<TruncatedSeries> subs;
    subs.reserve(point.size());
    for (int v = 0; v < a.nvars(); ++v) {
        subs.push_back(TruncatedSeries::variable(a.nvars(), a.order(), v) +
                       TruncatedSeries::constant(a.nvars(), a.order(), point[static_cast<std::size_t>(v)]));
    }
    return compose(a, subs);
}

CScalar evaluate(const TruncatedSeries &a, std::span<const CScalar> point)
{
    if (static_cast<int>(point.size()) != a.nvars()) {
        throw Error("evaluation point dimension mismatch");
    }
    if (!a.is_polynomial()) {
        throw Error("cannot evaluate an order-limited series away from 0");
    }
    CScalar sum;
    for (const auto &t : a.terms()) {
        CScalar term = t.coeff;
        for (int v = 0; v < a.nvars(); ++v) {
            for (int e = field(t.key, v); e > 0; --e) {
                term *= point[static_cast<std::size_t>(v)];
            }
        }
        sum += term;
    }
    return sum;
}

} // namespace crjet
