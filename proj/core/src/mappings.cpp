#include <crjet/mappings.hpp>

#include <algorithm>

namespace crjet
{

namespace
{

std::size_t u(int i) { return static_cast<std::size_t>(i); }

bool is_holomorphic(const TruncatedSeries &f, const AmbientLayout &a)
{
    for (const auto &t : f.terms()) {
        const MultiIndex e = f.exponents_of(t);
        for (int k = 0; k < a.N; ++k) {
            if (e[a.antiholo(k)] != 0) {
                return false;
            }
        }
    }
    return true;
}

// Substitutions Z -> M Z for the holomorphic variables and the conjugate for the rest.
std::vector<TruncatedSeries> linear_subs(const DenseMatrix<CScalar> &M, const AmbientLayout &a, int order)
{
    std::vector<TruncatedSeries> subs;
    for (int k = 0; k < a.N; ++k) {
        TruncatedSeries s(a.nvars(), order);
        for (int l = 0; l < a.N; ++l) {
            s += TruncatedSeries::variable(a.nvars(), order, a.holo(l)) * M[u(k)][u(l)];
        }
        subs.push_back(std::move(s));
    }
    for (int k = 0; k < a.N; ++k) {
        subs.push_back(conjugate(subs[u(k)], a.pairing()));
    }
    return subs;
}

std::vector<TruncatedSeries> with_conjugates(const std::vector<TruncatedSeries> &F, const AmbientLayout &a)
{
    std::vector<TruncatedSeries> subs = F;
    for (const auto &f : F) {
        subs.push_back(conjugate(f, a.pairing()));
    }
    return subs;
}

int common_order(const std::vector<TruncatedSeries> &v)
{
    int o = TruncatedSeries::kMaxOrder;
    for (const auto &s : v) {
        o = std::min(o, s.order());
    }
    return o;
}

} // namespace

std::vector<TruncatedSeries> compose_ambient(const std::vector<TruncatedSeries> &F, const std::vector<TruncatedSeries> &G)
{
    if (F.size() != G.size() || F.empty()) {
        throw Error("maps of different dimensions cannot be composed");
    }
    const AmbientLayout a{static_cast<int>(G.size())};
    const auto subs = with_conjugates(G, a);
    std::vector<TruncatedSeries> out;
    for (const auto &f : F) {
        out.push_back(compose(f, subs));
    }
    return out;
}

DenseMatrix<CScalar> jacobian_at_zero(const std::vector<TruncatedSeries> &F)
{
    const int N = static_cast<int>(F.size());
    DenseMatrix<CScalar> J(u(N), std::vector<CScalar>(u(N)));
    for (int k = 0; k < N; ++k) {
        for (int l = 0; l < N; ++l) {
            J[u(k)][u(l)] = F[u(k)].coeff(MultiIndex::unit(F[u(k)].nvars(), l));
        }
    }
    return J;
}

CRMap make_map(const TruncatedSeries &rho_source, const TruncatedSeries &rho_target, int N,
               std::vector<TruncatedSeries> components)
{
    const AmbientLayout a{N};
    if (static_cast<int>(components.size()) != N) {
        throw Error("a map into C^" + std::to_string(N) + " needs " + std::to_string(N) + " components");
    }
    for (const auto &c : components) {
        if (c.nvars() != a.nvars()) {
            throw Error("map components must use the ambient variables");
        }
        if (!is_holomorphic(c, a)) {
            throw Error("map components must be holomorphic (no conjugated variables)");
        }
    }
    TruncatedSeries rho_t = rho_target;
    std::vector<CScalar> p;
    for (const auto &c : components) {
        p.push_back(c.constant_term());
    }
    if (std::any_of(p.begin(), p.end(), [](const CScalar &c) { return !c.is_zero(); })) {
        if (!rho_target.is_polynomial()) {
            throw Error("F(0) != 0 needs a polynomial target defining function");
        }
        std::vector<CScalar> point = p;
        for (const auto &c : p) {
            point.push_back(c.conj());
        }
        if (!evaluate(rho_target, point).is_zero()) {
            throw Error("F(0) does not lie on the target hypersurface");
        }
        rho_t = recenter(rho_target, point);
        for (int k = 0; k < N; ++k) {
            components[u(k)] -= TruncatedSeries::constant(a.nvars(), components[u(k)].order(), p[u(k)]);
        }
    }
    CRMap m;
    m.source = from_defining(rho_source, N);
    m.target = from_defining(rho_t, N);
    const int order = common_order(components);
    const auto subs = linear_subs(invert(m.source.linear_change), a, order);
    const auto &At = m.target.linear_change;
    for (int k = 0; k < N; ++k) {
        TruncatedSeries c(a.nvars(), order);
        for (int l = 0; l < N; ++l) {
            if (!At[u(k)][u(l)].is_zero()) {
                c += compose(components[u(l)], subs) * At[u(k)][u(l)];
            }
        }
        m.F.push_back(std::move(c));
    }
    return m;
}

IntrinsicMap restrict(const CRMap &map, bool diffeomorphism)
{
    const int N = map.source.N;
    const AmbientLayout a{N};
    const IntrinsicLayout in{N - 1};
    if (diffeomorphism && rank(jacobian_at_zero(map.F), N) < N) {
        throw Error("map is not invertible at 0");
    }
    IntrinsicMap f;
    const auto ambient = with_conjugates(map.F, a);
    f.tangency_residual = restrict_to_graph(compose(map.target.rho, ambient), map.source);
    if (!f.tangency_residual.is_zero()) {
        throw Error("map does not send M into M': tangency residual " + f.tangency_residual.to_string(in.names()));
    }
    std::vector<TruncatedSeries> z;
    for (int j = 0; j < N - 1; ++j) {
        z.push_back(restrict_to_graph(map.F[u(j)], map.source));
    }
    for (int j = 0; j < N - 1; ++j) {
        f.components.push_back(z[u(j)]);
    }
    for (int j = 0; j < N - 1; ++j) {
        f.components.push_back(conjugate(z[u(j)], in.pairing()));
    }
    const auto w = restrict_to_graph(map.F[u(N - 1)], map.source);
    f.components.push_back((w + conjugate(w, in.pairing())) * CScalar(Rational(1, 2)));
    return f;
}

TruncatedSeries pull_back(const TruncatedSeries &g, const IntrinsicMap &f)
{
    return compose(g, f.components);
}

int PushforwardData::order() const
{
    int o = xi.order();
    for (const auto &e : eta) {
        o = std::min(o, e.order());
    }
    for (const auto &row : gamma) {
        o = std::min(o, common_order(row));
    }
    return o;
}

PushforwardData pushforward_data(const IntrinsicMap &f, const Frame &source, const Frame &target)
{
    const int n = source.n;
    if (target.n != n || static_cast<int>(f.components.size()) != 2 * n + 1) {
        throw Error("frames and map have inconsistent dimensions");
    }
    const auto basis = source.basis();
    std::vector<std::vector<TruncatedSeries>> coframe;
    for (const auto &w : target.cobasis()) {
        std::vector<TruncatedSeries> c;
        for (const auto &wi : w.coeffs()) {
            c.push_back(pull_back(wi, f));
        }
        coframe.push_back(std::move(c));
    }
    const int dim = 2 * n + 1;
    SeriesMatrix M(u(dim));
    for (int b = 0; b < dim; ++b) {
        std::vector<TruncatedSeries> Y;
        for (const auto &fi : f.components) {
            Y.push_back(basis[u(b)].apply(fi));
        }
        for (int a = 0; a < dim; ++a) {
            TruncatedSeries s(Y[0].nvars(), std::min(common_order(Y), common_order(coframe[u(a)])));
            for (int i = 0; i < dim; ++i) {
                s += coframe[u(a)][u(i)] * Y[u(i)];
            }
            M[u(a)].push_back(std::move(s));
        }
    }
    const IntrinsicLayout in = source.layout();
    auto require_zero = [&](int a, int b, const char *what) {
        if (!M[u(a)][u(b)].is_zero()) {
            throw Error(std::string("pushforward block ") + what + " is nonzero: the map is not CR");
        }
    };
    auto require_conj = [&](int a, int b, int ca, int cb, const char *what) {
        if (!(M[u(a)][u(b)] == conjugate(M[u(ca)][u(cb)], in.pairing()))) {
            throw Error(std::string("pushforward block ") + what + " is not the conjugate of its partner");
        }
    };
    for (int B = 0; B < n; ++B) {
        require_zero(0, 1 + B, "<theta', f_* L>");
        require_zero(0, 1 + n + B, "<theta', f_* Lbar>");
        require_conj(1 + n + B, 0, 1 + B, 0, "<theta'^Abar, f_* T>");
        for (int A = 0; A < n; ++A) {
            require_zero(1 + A, 1 + n + B, "<theta'^A, f_* Lbar>");
            require_zero(1 + n + A, 1 + B, "<theta'^Abar, f_* L>");
            require_conj(1 + n + A, 1 + n + B, 1 + A, 1 + B, "<theta'^Abar, f_* Lbar>");
        }
    }
    require_conj(0, 0, 0, 0, "xi");
    PushforwardData P;
    P.xi = M[0][0];
    for (int A = 0; A < n; ++A) {
        P.eta.push_back(M[u(1 + A)][0]);
        std::vector<TruncatedSeries> row;
        for (int B = 0; B < n; ++B) {
            row.push_back(M[u(1 + A)][u(1 + B)]);
        }
        P.gamma.push_back(std::move(row));
    }
    return P;
}

SeriesMatrix conjugate_matrix(const SeriesMatrix &m, const IntrinsicLayout &layout)
{
    SeriesMatrix out = m;
    for (auto &row : out) {
        for (auto &e : row) {
            e = conjugate(e, layout.pairing());
        }
    }
    return out;
}

namespace
{

// Target tensors pulled back along f, memoized per index.
class PulledTensor
{
public:
    PulledTensor(const Frame &target, const IntrinsicMap &f) : H_(target), f_(&f) {}

    const TruncatedSeries &h(const IndexTuple &t, int D)
    {
        auto key = std::make_pair(t, D);
        auto it = hd_.find(key);
        if (it == hd_.end()) {
            it = hd_.emplace(key, pull_back(H_.h(t, D), *f_)).first;
        }
        return it->second;
    }
    const TruncatedSeries &h(const IndexTuple &t)
    {
        auto it = ht_.find(t);
        if (it == ht_.end()) {
            it = ht_.emplace(t, pull_back(H_.h(t), *f_)).first;
        }
        return it->second;
    }

private:
    HTensor H_;
    const IntrinsicMap *f_;
    std::map<std::pair<IndexTuple, int>, TruncatedSeries> hd_;
    std::map<IndexTuple, TruncatedSeries> ht_;
};

std::string idx(std::initializer_list<int> v)
{
    std::string s;
    for (int i : v) {
        s += (s.empty() ? "" : ",") + std::to_string(i + 1);
    }
    return s;
}

} // namespace

IdentityReport verify_reflection_base(const PushforwardData &P, const IntrinsicMap &f, const Frame &source,
                                      const Frame &target)
{
    IdentityReport rep;
    rep.name = "reflection";
    const int n = source.n;
    const IntrinsicLayout in = source.layout();
    HTensor H(source);
    PulledTensor Ht(target, f);
    const SeriesMatrix gb = conjugate_matrix(P.gamma, in);
    const auto &g = P.gamma;
    for (int A = 0; A < n; ++A) {
        const auto &LbA = source.Lbar[u(A)];
        for (int B = 0; B < n; ++B) {
            TruncatedSeries rhs(in.nvars(), P.order());
            for (int C = 0; C < n; ++C) {
                for (int D = 0; D < n; ++D) {
                    rhs += g[u(D)][u(B)] * gb[u(C)][u(A)] * Ht.h({C}, D);
                }
            }
            rep.expect_zero("xi h = gamma conj(gamma) h' [A,B=" + idx({A, B}) + "]", P.xi * H.h({A}, B) - rhs);
            for (int E = 0; E < n; ++E) {
                rep.expect_zero("Lbar gamma + eta h [A,B,E=" + idx({A, B, E}) + "]",
                                LbA.apply(g[u(E)][u(B)]) + P.eta[u(E)] * H.h({A}, B));
            }
        }
        TruncatedSeries rhs(in.nvars(), P.order());
        for (int C = 0; C < n; ++C) {
            rhs += P.xi * gb[u(C)][u(A)] * Ht.h({C});
            for (int D = 0; D < n; ++D) {
                rhs += gb[u(C)][u(A)] * P.eta[u(D)] * Ht.h({C}, D);
            }
        }
        rep.expect_zero("Lbar xi [A=" + idx({A}) + "]", LbA.apply(P.xi) + P.xi * H.h({A}) - rhs);
        for (int C = 0; C < n; ++C) {
            rep.expect_zero("Lbar eta [A,C=" + idx({A, C}) + "]", LbA.apply(P.eta[u(C)]) + P.eta[u(C)] * H.h({A}));
            rep.expect_zero("T gamma [A,C=" + idx({A, C}) + "]",
                            source.T.apply(g[u(C)][u(A)]) - source.L[u(A)].apply(P.eta[u(C)]) -
                                P.eta[u(C)] * conjugate(H.h({A}), in.pairing()));
        }
    }
    return rep;
}

IdentityReport verify_reflection_derivatives(const PushforwardData &P, const IntrinsicMap &f, const Frame &source,
                                 const Frame &target, int k)
{
    IdentityReport rep;
    rep.name = "reflection-derivatives";
    const int n = source.n;
    const IntrinsicLayout in = source.layout();
    if (P.order() < k + 2) {
        throw OrderExhausted("pushforward data known through order " + std::to_string(P.order()) + " < k + 2");
    }
    HTensor H(source);
    PulledTensor Ht(target, f);
    const SeriesMatrix gb = conjugate_matrix(P.gamma, in);
    const auto &g = P.gamma;
    for (const auto &tup : HTensor::tuples(n, k)) {
        const std::string tl = tuple_label(tup, true);
        for (int C = 0; C < n; ++C) {
            const auto &LbC = source.Lbar[u(C)];
            // Both identities share the pattern v^H (h'_{tI H} - h'_t h'_{I H}) conj(gamma)^I_C.
            auto shared = [&](const std::vector<TruncatedSeries> &v) {
                TruncatedSeries s(in.nvars(), P.order());
                for (int H_ = 0; H_ < n; ++H_) {
                    for (int I = 0; I < n; ++I) {
                        IndexTuple tI = tup;
                        tI.push_back(I);
                        s += v[u(H_)] * gb[u(I)][u(C)] * (Ht.h(tI, H_) - Ht.h(tup) * Ht.h({I}, H_));
                    }
                }
                return s;
            };
            TruncatedSeries eta_h(in.nvars(), P.order());
            for (int D = 0; D < n; ++D) {
                eta_h += P.eta[u(D)] * Ht.h(tup, D);
            }
            for (int B = 0; B < n; ++B) {
                std::vector<TruncatedSeries> col;
                TruncatedSeries gh(in.nvars(), P.order());
                for (int D = 0; D < n; ++D) {
                    col.push_back(g[u(D)][u(B)]);
                    gh += g[u(D)][u(B)] * Ht.h(tup, D);
                }
                rep.expect_zero("gamma form [t=" + tl + " B,C=" + idx({B, C}) + "]",
                                LbC.apply(gh) - shared(col) + eta_h * H.h({C}, B));
            }
            rep.expect_zero("eta form [t=" + tl + " C=" + idx({C}) + "]",
                            LbC.apply(eta_h) - shared(P.eta) + eta_h * H.h({C}));
        }
    }
    return rep;
}

LeviReconstruction solve_levi_reflection(const TruncatedSeries &xi, const SeriesMatrix &gamma_bar, const IntrinsicMap &f,
                                         const Frame &source, const Frame &target)
{
    const int n = source.n;
    const IntrinsicLayout in = source.layout();
    HTensor H(source);
    PulledTensor Ht(target, f);
    int order = xi.order();
    for (const auto &row : gamma_bar) {
        order = std::min(order, common_order(row));
    }
    // G_{AD} = conj(gamma)^C_A h'_{Cbar D}
    SeriesMatrix G(u(n));
    for (int A = 0; A < n; ++A) {
        for (int D = 0; D < n; ++D) {
            TruncatedSeries s(in.nvars(), order);
            for (int C = 0; C < n; ++C) {
                s += gamma_bar[u(C)][u(A)] * Ht.h({C}, D);
            }
            G[u(A)].push_back(std::move(s));
        }
    }
    DenseMatrix<CScalar> G0(u(n), std::vector<CScalar>(u(n)));
    for (int A = 0; A < n; ++A) {
        for (int D = 0; D < n; ++D) {
            G0[u(A)][u(D)] = G[u(A)][u(D)].constant_term();
        }
    }
    if (rank(G0, n) < n) {
        throw Error("Levi pairing is singular at 0: the reconstruction needs 1-nondegenerate hypersurfaces");
    }
    const SeriesMatrix Gi = invert(G);
    LeviReconstruction r;
    for (int D = 0; D < n; ++D) {
        std::vector<TruncatedSeries> row;
        for (int B = 0; B < n; ++B) {
            TruncatedSeries s(in.nvars(), order);
            for (int A = 0; A < n; ++A) {
                s += Gi[u(D)][u(A)] * xi * H.h({A}, B);
            }
            row.push_back(std::move(s));
        }
        r.gamma.push_back(std::move(row));
    }
    for (int D = 0; D < n; ++D) {
        TruncatedSeries s(in.nvars(), order);
        for (int A = 0; A < n; ++A) {
            TruncatedSeries rhs = source.Lbar[u(A)].apply(xi) + xi * H.h({A});
            for (int C = 0; C < n; ++C) {
                rhs -= xi * gamma_bar[u(C)][u(A)] * Ht.h({C});
            }
            s += Gi[u(D)][u(A)] * rhs;
        }
        r.eta.push_back(std::move(s));
    }
    return r;
}

namespace heisenberg_maps
{

namespace
{

struct Vars {
    AmbientLayout a;
    int order;
    TruncatedSeries z(int j) const { return TruncatedSeries::variable(a.nvars(), order, a.z(j)); }
    TruncatedSeries w() const { return TruncatedSeries::variable(a.nvars(), order, a.w()); }
    TruncatedSeries c(const CScalar &v) const { return TruncatedSeries::constant(a.nvars(), order, v); }
};

CScalar norm2(const std::vector<CScalar> &a)
{
    CScalar s;
    for (const auto &x : a) {
        s += x * x.conj();
    }
    return s;
}

} // namespace

std::vector<TruncatedSeries> translation(int N, int order, const std::vector<CScalar> &a)
{
    const Vars v{{N}, order};
    if (static_cast<int>(a.size()) != N - 1) {
        throw Error("translation vector has the wrong dimension");
    }
    std::vector<TruncatedSeries> F;
    TruncatedSeries w = v.w() + v.c(CScalar::i() * norm2(a));
    for (int j = 0; j < N - 1; ++j) {
        F.push_back(v.z(j) + v.c(a[u(j)]));
        w += v.z(j) * (CScalar(2) * CScalar::i() * a[u(j)].conj());
    }
    F.push_back(std::move(w));
    return F;
}

std::vector<TruncatedSeries> dilation(int N, int order, const Rational &lambda)
{
    if (sgn(lambda) == 0) {
        throw Error("dilation factor must be nonzero");
    }
    const Vars v{{N}, order};
    std::vector<TruncatedSeries> F;
    for (int j = 0; j < N - 1; ++j) {
        F.push_back(v.z(j) * CScalar(lambda));
    }
    F.push_back(v.w() * CScalar(Rational(lambda * lambda)));
    return F;
}

std::vector<TruncatedSeries> rotation(int N, int order, const DenseMatrix<CScalar> &U)
{
    const Vars v{{N}, order};
    const int n = N - 1;
    if (static_cast<int>(U.size()) != n) {
        throw Error("rotation matrix has the wrong size");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            CScalar s;
            for (int k = 0; k < n; ++k) {
                s += U[u(k)][u(i)].conj() * U[u(k)][u(j)];
            }
            if (!(s == CScalar(i == j ? 1 : 0))) {
                throw Error("rotation matrix is not unitary");
            }
        }
    }
    std::vector<TruncatedSeries> F;
    for (int i = 0; i < n; ++i) {
        TruncatedSeries s(v.a.nvars(), order);
        for (int j = 0; j < n; ++j) {
            s += v.z(j) * U[u(i)][u(j)];
        }
        F.push_back(std::move(s));
    }
    F.push_back(v.w());
    return F;
}

std::vector<TruncatedSeries> isotropy(int N, int order, const std::vector<CScalar> &a)
{
    const Vars v{{N}, order};
    if (static_cast<int>(a.size()) != N - 1) {
        throw Error("isotropy vector has the wrong dimension");
    }
    TruncatedSeries delta = v.c(CScalar(1)) - v.w() * (CScalar::i() * norm2(a));
    for (int j = 0; j < N - 1; ++j) {
        delta -= v.z(j) * (CScalar(2) * CScalar::i() * a[u(j)].conj());
    }
    const TruncatedSeries inv = invert_unit(delta);
    std::vector<TruncatedSeries> F;
    for (int j = 0; j < N - 1; ++j) {
        F.push_back((v.z(j) + v.w() * a[u(j)]) * inv);
    }
    F.push_back(v.w() * inv);
    return F;
}

std::vector<TruncatedSeries> vertical_isotropy(int N, int order, const Rational &r)
{
    const Vars v{{N}, order};
    const TruncatedSeries inv = invert_unit(v.c(CScalar(1)) - v.w() * CScalar(r));
    std::vector<TruncatedSeries> F;
    for (int j = 0; j < N - 1; ++j) {
        F.push_back(v.z(j) * inv);
    }
    F.push_back(v.w() * inv);
    return F;
}

} // namespace heisenberg_maps

} // namespace crjet
