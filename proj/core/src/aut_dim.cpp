#include <crjet/aut_dim.hpp>

#include <functional>
#include <map>

#include <crjet/linalg.hpp>

namespace crjet
{

mpz_class aut_bound(int N)
{
    if (N < 2) {
        throw Error("the bound needs N >= 2");
    }
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(4 * N - 3), static_cast<unsigned long>(2 * N - 2));
    return (2 * N - 1) * b;
}

TruncatedSeries FormalVectorField::apply(const TruncatedSeries &rho) const
{
    const AmbientLayout amb{static_cast<int>(a.size())};
    TruncatedSeries out(rho.nvars(), rho.order() - 1);
    for (int j = 0; j < amb.N; ++j) {
        out += a[static_cast<std::size_t>(j)] * derive(rho, amb.holo(j));
    }
    return out;
}

std::string FormalVectorField::to_string() const
{
    const AmbientLayout amb{static_cast<int>(a.size())};
    const auto names = amb.names();
    std::string s;
    for (int j = 0; j < amb.N; ++j) {
        const auto &c = a[static_cast<std::size_t>(j)];
        if (c.is_zero()) {
            continue;
        }
        std::string body;
        for (const auto &t : c.terms()) {
            const MultiIndex e = c.exponents_of(t);
            std::string mono;
            for (int v = 0; v < e.nvars(); ++v) {
                if (e[v] > 0) {
                    mono += (mono.empty() ? "" : "*") + names[static_cast<std::size_t>(v)] +
                            (e[v] > 1 ? "^" + std::to_string(e[v]) : "");
                }
            }
            body += (body.empty() ? "" : " + ") + std::string("(") + t.coeff.to_string() + ")" +
                    (mono.empty() ? "" : "*" + mono);
        }
        s += (s.empty() ? "" : " + ") + std::string("[") + body + "] d/d" + names[static_cast<std::size_t>(amb.holo(j))];
    }
    return s.empty() ? "0" : s;
}

namespace
{

struct Unknown {
    int component;
    MultiIndex mono;
    bool imaginary;
};

// Holomorphic monomials in (z_1..z_n, w), ambient layout, accepted by `keep`.
std::vector<MultiIndex> holomorphic_monomials(const AmbientLayout &amb, int max_degree,
                                              const std::function<bool(const MultiIndex &)> &keep)
{
    std::vector<MultiIndex> out;
    std::vector<int> e(static_cast<std::size_t>(amb.nvars()), 0);
    std::function<void(int, int)> rec = [&](int v, int left) {
        if (v == amb.N) {
            MultiIndex m(e);
            if (keep(m)) {
                out.push_back(m);
            }
            return;
        }
        for (int t = 0; t <= left; ++t) {
            e[static_cast<std::size_t>(amb.holo(v))] = t;
            rec(v + 1, left - t);
        }
        e[static_cast<std::size_t>(amb.holo(v))] = 0;
    };
    rec(0, max_degree);
    return out;
}

TangencySystem solve(const Hypersurface &M, int order, std::vector<Unknown> unknowns, bool real_part,
                     TangencySystem sys)
{
    const AmbientLayout amb = M.ambient();
    const int nv = amb.nvars();
    const TruncatedSeries rho = M.rho.truncated(order);
    Hypersurface Mt = M;
    Mt.phi = M.phi.truncated(order);
    auto residual = [&](const FormalVectorField &Y) {
        TruncatedSeries r = Y.apply(rho);
        if (real_part) {
            r += conjugate(r, amb.pairing());
        }
        return restrict_to_graph(r, Mt);
    };
    auto field_of = [&](const Unknown &x) {
        FormalVectorField Y;
        Y.a.assign(static_cast<std::size_t>(amb.N), TruncatedSeries(nv, order));
        Y.a[static_cast<std::size_t>(x.component)] =
            TruncatedSeries::monomial(nv, order, x.mono, x.imaginary ? CScalar::i() : CScalar(1));
        return Y;
    };
    std::vector<TruncatedSeries> columns;
    int checked = order;
    for (const auto &x : unknowns) {
        columns.push_back(residual(field_of(x)));
        checked = std::min(checked, columns.back().order());
    }
    // Rows: (monomial, real or imaginary part) of the residual coefficients.
    std::map<std::pair<MultiIndex, int>, SparseRow<Rational>> rows;
    for (int c = 0; c < static_cast<int>(columns.size()); ++c) {
        const auto &s = columns[static_cast<std::size_t>(c)].truncated(checked);
        for (const auto &t : s.terms()) {
            const MultiIndex e = s.exponents_of(t);
            if (sgn(t.coeff.re()) != 0) {
                rows[{e, 0}].emplace_back(c, t.coeff.re());
            }
            if (sgn(t.coeff.im()) != 0) {
                rows[{e, 1}].emplace_back(c, t.coeff.im());
            }
        }
    }
    RowReducer<Rational> red(static_cast<int>(unknowns.size()));
    for (auto &[key, row] : rows) {
        red.add_row(row);
    }
    sys.order = order;
    sys.unknowns = static_cast<int>(unknowns.size());
    sys.equations = static_cast<int>(rows.size());
    sys.checked_through = checked;
    sys.solution_dim = sys.unknowns - red.rank();
    sys.basis_verified = true;
    for (const auto &v : red.nullspace()) {
        FormalVectorField Y;
        Y.a.assign(static_cast<std::size_t>(amb.N), TruncatedSeries(nv, order));
        for (std::size_t c = 0; c < v.size(); ++c) {
            if (sgn(v[c]) == 0) {
                continue;
            }
            const auto &x = unknowns[c];
            const CScalar coef = x.imaginary ? CScalar(Rational(0), v[c]) : CScalar(v[c]);
            Y.a[static_cast<std::size_t>(x.component)] += TruncatedSeries::monomial(nv, order, x.mono, coef);
        }
        if (!residual(Y).truncated(checked).is_zero()) {
            sys.basis_verified = false;
        }
        sys.basis.push_back(std::move(Y));
    }
    return sys;
}

} // namespace

TangencySystem holomorphic_degeneracy_test(const Hypersurface &M, int d, int order)
{
    if (d < 0) {
        throw Error("degree bound must be nonnegative");
    }
    if (order < d + 2) {
        throw OrderExhausted("order " + std::to_string(order) + " < d + 2: the tangency system would be vacuous");
    }
    if (order > M.rho.order()) {
        throw OrderExhausted("hypersurface known only through order " + std::to_string(M.rho.order()));
    }
    const AmbientLayout amb = M.ambient();
    std::vector<Unknown> unknowns;
    const auto monos = holomorphic_monomials(amb, d, [](const MultiIndex &) { return true; });
    for (int j = 0; j < amb.N; ++j) {
        for (const auto &m : monos) {
            unknowns.push_back({j, m, false});
            unknowns.push_back({j, m, true});
        }
    }
    TangencySystem sys;
    sys.condition = "(Y rho)|M = 0";
    sys.degree = d;
    sys.degree_kind = "degree";
    return solve(M, order, std::move(unknowns), false, std::move(sys));
}

TangencySystem infinitesimal_aut_dim(const Hypersurface &M, int d, int order)
{
    const AmbientLayout amb = M.ambient();
    auto weight = [&](const MultiIndex &m) {
        int w = 0;
        for (int j = 0; j < amb.N - 1; ++j) {
            w += m[amb.z(j)];
        }
        return w + 2 * m[amb.w()];
    };
    const int max_weight = d + 2;
    if (max_weight < 0) {
        throw Error("degree bound too negative");
    }
    // Ordinary degree never exceeds the weighted one.
    const int max_degree = max_weight;
    if (order < max_degree + 2) {
        throw OrderExhausted("order " + std::to_string(order) + " < " + std::to_string(max_degree + 2) +
                             ": the tangency system would be vacuous");
    }
    if (order > M.rho.order()) {
        throw OrderExhausted("hypersurface known only through order " + std::to_string(M.rho.order()));
    }
    std::vector<Unknown> unknowns;
    for (int j = 0; j < amb.N; ++j) {
        const int bound = d + (j == amb.N - 1 ? 2 : 1);
        if (bound < 0) {
            continue;
        }
        for (const auto &m : holomorphic_monomials(amb, bound, [&](const MultiIndex &x) { return weight(x) <= bound; })) {
            unknowns.push_back({j, m, false});
            unknowns.push_back({j, m, true});
        }
    }
    TangencySystem sys;
    sys.condition = "(Y rho + conj(Y rho))|M = 0";
    sys.degree = d;
    sys.degree_kind = "weighted degree";
    return solve(M, order, std::move(unknowns), true, std::move(sys));
}

} // namespace crjet
