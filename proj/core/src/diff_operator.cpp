#include <crjet/diff_operator.hpp>

#include <algorithm>
#include <functional>

namespace crjet
{

namespace
{

// All gamma <= alpha componentwise.
void for_each_below(const MultiIndex &alpha, const std::function<void(const MultiIndex &)> &fn)
{
    std::vector<int> g(static_cast<std::size_t>(alpha.nvars()), 0);
    while (true) {
        fn(MultiIndex(g));
        int v = 0;
        while (v < alpha.nvars()) {
            if (g[static_cast<std::size_t>(v)] < alpha[v]) {
                ++g[static_cast<std::size_t>(v)];
                break;
            }
            g[static_cast<std::size_t>(v)] = 0;
            ++v;
        }
        if (v == alpha.nvars()) {
            return;
        }
    }
}

Rational binomial(int n, int k)
{
    Rational r(1);
    for (int i = 1; i <= k; ++i) {
        r *= Rational(n - k + i, i);
        r.canonicalize();
    }
    return r;
}

TruncatedSeries derive_multi(TruncatedSeries f, const MultiIndex &beta)
{
    for (int v = 0; v < beta.nvars(); ++v) {
        for (int e = 0; e < beta[v]; ++e) {
            f = derive(f, v);
        }
    }
    return f;
}

MultiIndex sub(const MultiIndex &a, const MultiIndex &b)
{
    std::vector<int> e(a.exponents());
    for (int v = 0; v < a.nvars(); ++v) {
        e[static_cast<std::size_t>(v)] -= b[v];
    }
    return MultiIndex(std::move(e));
}

} // namespace

DiffOperator DiffOperator::identity(int nvars, int order)
{
    DiffOperator d(nvars, order);
    d.add_term(MultiIndex::zero(nvars), TruncatedSeries::constant(nvars, order, CScalar(1)));
    return d;
}

DiffOperator DiffOperator::from_field(const VectorField &X)
{
    DiffOperator d(X.dim(), X.order());
    for (int i = 0; i < X.dim(); ++i) {
        d.add_term(MultiIndex::unit(X.dim(), i), X[i]);
    }
    return d;
}

int DiffOperator::degree() const
{
    int d = -1;
    for (const auto &[beta, c] : terms_) {
        d = std::max(d, beta.total());
    }
    return d;
}

bool DiffOperator::is_zero() const
{
    return terms_.empty();
}

void DiffOperator::lower_order(int order)
{
    if (order >= order_) {
        return;
    }
    order_ = order;
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second = it->second.truncated(order);
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
}

void DiffOperator::add_term(const MultiIndex &beta, const TruncatedSeries &c)
{
    if (c.nvars() != nvars_ || beta.nvars() != nvars_) {
        throw Error("operator coefficient on the wrong coordinates");
    }
    lower_order(c.order());
    auto t = c.truncated(order_);
    if (t.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(beta, t);
    if (!inserted) {
        it->second += t;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

TruncatedSeries DiffOperator::apply(const TruncatedSeries &f) const
{
    const int out_order = std::min(order_, f.order() - std::max(0, degree()));
    if (out_order < 0) {
        throw OrderExhausted("order exhausted applying a differential operator");
    }
    TruncatedSeries out(nvars_, out_order);
    for (const auto &[beta, c] : terms_) {
        out += c.truncated(out_order) * derive_multi(f, beta).truncated(out_order);
    }
    return out;
}

DiffOperator &DiffOperator::operator+=(const DiffOperator &o)
{
    if (o.nvars_ != nvars_) {
        throw Error("operator variable count mismatch");
    }
    lower_order(o.order_);
    for (const auto &[beta, c] : o.terms_) {
        add_term(beta, c);
    }
    return *this;
}

DiffOperator &DiffOperator::operator-=(const DiffOperator &o)
{
    if (o.nvars_ != nvars_) {
        throw Error("operator variable count mismatch");
    }
    lower_order(o.order_);
    for (const auto &[beta, c] : o.terms_) {
        add_term(beta, -c);
    }
    return *this;
}

DiffOperator DiffOperator::truncated(int order) const
{
    DiffOperator d = *this;
    d.lower_order(order);
    return d;
}

DiffOperator operator*(const DiffOperator &a, const DiffOperator &b)
{
    if (a.nvars_ != b.nvars_) {
        throw Error("operator variable count mismatch");
    }
    const int order = std::min(a.order_, b.order_ - std::max(0, a.degree()));
    if (order < 0) {
        throw OrderExhausted("order exhausted composing differential operators");
    }
    DiffOperator out(a.nvars_, order);
    // a_alpha d^alpha (b_beta d^beta) = sum_{gamma <= alpha} C(alpha, gamma) a_alpha (d^gamma b_beta) d^{alpha - gamma + beta}
    for (const auto &[alpha, ca] : a.terms_) {
        for (const auto &[beta, cb] : b.terms_) {
            for_each_below(alpha, [&](const MultiIndex &gamma) {
                Rational coef(1);
                for (int v = 0; v < alpha.nvars(); ++v) {
                    coef *= binomial(alpha[v], gamma[v]);
                }
                const auto db = derive_multi(cb, gamma).truncated(order);
                if (db.is_zero()) {
                    return;
                }
                out.add_term(sub(alpha, gamma) + beta, ca.truncated(order) * db * CScalar(coef));
            });
        }
    }
    return out;
}

DiffOperator operator*(const TruncatedSeries &f, const DiffOperator &a)
{
    DiffOperator out(a.nvars_, std::min(a.order_, f.order()));
    for (const auto &[beta, c] : a.terms_) {
        out.add_term(beta, f * c);
    }
    return out;
}

DiffOperator commutator(const DiffOperator &a, const DiffOperator &b)
{
    return a * b - b * a;
}

std::string compare_on_monomials(const DiffOperator &a, const DiffOperator &b, int max_degree)
{
    const int nv = a.nvars();
    const int order = std::max({a.order() + std::max(0, a.degree()), b.order() + std::max(0, b.degree()), max_degree});
    std::vector<int> e(static_cast<std::size_t>(nv), 0);
    std::function<std::string(int, int)> rec = [&](int var, int left) -> std::string {
        if (var == nv) {
            const MultiIndex m(e);
            const auto f = TruncatedSeries::monomial(nv, std::min(order, TruncatedSeries::kMaxOrder), m, CScalar(1));
            const auto x = a.apply(f);
            const auto y = b.apply(f);
            const int o = std::min(x.order(), y.order());
            if (!(x.truncated(o) == y.truncated(o))) {
                return m.to_string();
            }
            return {};
        }
        for (int k = 0; k <= left; ++k) {
            e[static_cast<std::size_t>(var)] = k;
            auto r = rec(var + 1, left - k);
            if (!r.empty()) {
                return r;
            }
        }
        e[static_cast<std::size_t>(var)] = 0;
        return {};
    };
    return rec(0, max_degree);
}

} // namespace crjet
