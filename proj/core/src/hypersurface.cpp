#include <crjet/hypersurface.hpp>

#include <algorithm>

namespace crjet
{

std::vector<std::string> AmbientLayout::names() const
{
    std::vector<std::string> v;
    for (int j = 0; j < N - 1; ++j) {
        v.push_back("z" + std::to_string(j + 1));
    }
    v.emplace_back("w");
    for (int j = 0; j < N - 1; ++j) {
        v.push_back("conj(z" + std::to_string(j + 1) + ")");
    }
    v.emplace_back("conj(w)");
    return v;
}

std::vector<std::string> IntrinsicLayout::names() const
{
    std::vector<std::string> v;
    for (int j = 0; j < n; ++j) {
        v.push_back("z" + std::to_string(j + 1));
    }
    for (int j = 0; j < n; ++j) {
        v.push_back("conj(z" + std::to_string(j + 1) + ")");
    }
    v.emplace_back("s");
    return v;
}

namespace
{

DenseMatrix<CScalar> identity(int n)
{
    DenseMatrix<CScalar> m(static_cast<std::size_t>(n), std::vector<CScalar>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = CScalar(1);
    }
    return m;
}

// rho(A^{-1} Z') for a holomorphic linear change A.
TruncatedSeries apply_linear_change(const TruncatedSeries &rho, const DenseMatrix<CScalar> &A, const AmbientLayout &amb)
{
    const auto inv = invert(A);
    std::vector<TruncatedSeries> subs;
    subs.reserve(static_cast<std::size_t>(amb.nvars()));
    for (int k = 0; k < amb.N; ++k) {
        TruncatedSeries s(amb.nvars(), rho.order());
        for (int l = 0; l < amb.N; ++l) {
            s += TruncatedSeries::variable(amb.nvars(), rho.order(), amb.holo(l)) * inv[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
        }
        subs.push_back(std::move(s));
    }
    for (int k = 0; k < amb.N; ++k) {
        subs.push_back(conjugate(subs[static_cast<std::size_t>(k)], amb.pairing()));
    }
    return compose(rho, subs);
}

std::vector<TruncatedSeries> graph_substitution(const TruncatedSeries &phi, int N)
{
    const AmbientLayout amb{N};
    const IntrinsicLayout in{N - 1};
    const int nv = in.nvars();
    const int order = phi.order();
    std::vector<TruncatedSeries> subs(static_cast<std::size_t>(amb.nvars()));
    for (int j = 0; j < in.n; ++j) {
        subs[static_cast<std::size_t>(amb.z(j))] = TruncatedSeries::variable(nv, order, in.z(j));
        subs[static_cast<std::size_t>(amb.zbar(j))] = TruncatedSeries::variable(nv, order, in.zbar(j));
    }
    const auto s = TruncatedSeries::variable(nv, order, in.s());
    subs[static_cast<std::size_t>(amb.w())] = s + phi * CScalar::i();
    subs[static_cast<std::size_t>(amb.wbar())] = s - phi * CScalar::i();
    return subs;
}

} // namespace

TruncatedSeries restrict_to_graph(const TruncatedSeries &ambient, const Hypersurface &M)
{
    return compose(ambient, graph_substitution(M.phi, M.N));
}

Hypersurface from_defining(const TruncatedSeries &rho_in, int N)
{
    if (N < 2) {
        throw Error("hypersurfaces need N >= 2");
    }
    const AmbientLayout amb{N};
    if (rho_in.nvars() != amb.nvars()) {
        throw Error("defining function must use the ambient variables of C^" + std::to_string(N));
    }
    if (rho_in.order() < 1) {
        throw OrderExhausted("defining function must be known through order 1");
    }
    if (!(conjugate(rho_in, amb.pairing()) == rho_in)) {
        throw Error("defining function is not real-valued");
    }
    if (!rho_in.constant_term().is_zero()) {
        throw Error("rho(0) != 0: the origin is not on the hypersurface");
    }

    auto gradient = [&](const TruncatedSeries &r) {
        std::vector<CScalar> g;
        for (int k = 0; k < N; ++k) {
            g.push_back(r.coeff(MultiIndex::unit(amb.nvars(), amb.holo(k))));
        }
        return g;
    };
    auto grad = gradient(rho_in);
    if (std::all_of(grad.begin(), grad.end(), [](const CScalar &c) { return c.is_zero(); })) {
        throw Error("d rho(0) = 0: not a hypersurface point");
    }

    Hypersurface M;
    M.N = N;
    M.linear_change = identity(N);
    M.rho = rho_in;
    // d rho / dt at 0 with w = s + i t equals i (rho_w - rho_wb)(0) = -2 Im rho_w(0).
    if (sgn(grad[static_cast<std::size_t>(N - 1)].im()) == 0) {
        int best = 0;
        for (int k = 1; k < N; ++k) {
            if (grad[static_cast<std::size_t>(k)].norm2() > grad[static_cast<std::size_t>(best)].norm2()) {
                best = k;
            }
        }
        DenseMatrix<CScalar> A(static_cast<std::size_t>(N), std::vector<CScalar>(static_cast<std::size_t>(N)));
        for (int k = 0; k < N; ++k) {
            int src = (k == N - 1) ? best : (k == best ? N - 1 : k);
            A[static_cast<std::size_t>(k)][static_cast<std::size_t>(src)] = CScalar(1);
        }
        // New w' = lambda * Z_best with rho_{w'}(0) = i.
        const CScalar c = grad[static_cast<std::size_t>(best)];
        const CScalar lambda = -(CScalar::i() * c);
        for (auto &e : A[static_cast<std::size_t>(N - 1)]) {
            e *= lambda;
        }
        M.linear_change = A;
        M.rho = apply_linear_change(rho_in, A, amb);
    }

    const int order = M.rho.order();
    const IntrinsicLayout in{N - 1};
    const TruncatedSeries rho_t =
        (derive(M.rho, amb.w()) - derive(M.rho, amb.wbar())) * CScalar::i();

    TruncatedSeries phi(in.nvars(), order);
    int steps = 0;
    while ((1 << steps) < order + 1) {
        ++steps;
    }
    for (int k = 0; k < steps; ++k) {
        const auto subs = graph_substitution(phi, N);
        const TruncatedSeries g = compose(M.rho, subs);
        // g has no constant term, so the unknown top coefficient of the
        // derivative only reaches degrees above the order.
        const TruncatedSeries dg = compose(rho_t, subs).with_order(order);
        phi = phi - g * invert_unit(dg);
    }
    M.phi = phi;
    // A polynomial rho often has a polynomial graph function; accept phi as
    // exact only when the residual vanishes identically.
    if (M.rho.is_polynomial() && phi.max_degree() < order) {
        const TruncatedSeries cand = phi.as_polynomial();
        const int deg = M.rho.max_degree() * std::max(1, cand.max_degree());
        if (deg <= TruncatedSeries::kMaxOrder) {
            const auto residual = compose(M.rho.with_order(deg), graph_substitution(cand.with_order(deg), N));
            if (residual.is_polynomial() && residual.is_zero()) {
                M.phi = cand;
            }
        }
    }
    return M;
}

Hypersurface from_graph(const TruncatedSeries &phi, int N)
{
    const AmbientLayout amb{N};
    const IntrinsicLayout in{N - 1};
    if (phi.nvars() != in.nvars()) {
        throw Error("graph function must use the intrinsic variables (z, conj(z), s)");
    }
    const int order = phi.order();
    std::vector<TruncatedSeries> subs;
    for (int j = 0; j < in.n; ++j) {
        subs.push_back(TruncatedSeries::variable(amb.nvars(), order, amb.z(j)));
    }
    for (int j = 0; j < in.n; ++j) {
        subs.push_back(TruncatedSeries::variable(amb.nvars(), order, amb.zbar(j)));
    }
    const auto w = TruncatedSeries::variable(amb.nvars(), order, amb.w());
    const auto wb = TruncatedSeries::variable(amb.nvars(), order, amb.wbar());
    subs.push_back((w + wb) * CScalar(Rational(1, 2)));
    const TruncatedSeries im_w = (w - wb) * CScalar(Rational(0), Rational(-1, 2));
    return from_defining(im_w - compose(phi, subs), N);
}

TruncatedSeries graph_residual(const Hypersurface &M)
{
    return restrict_to_graph(M.rho, M);
}

// VectorField

VectorField::VectorField(std::vector<TruncatedSeries> coeffs) : coeffs_(std::move(coeffs))
{
    for (const auto &c : coeffs_) {
        if (c.nvars() != static_cast<int>(coeffs_.size())) {
            throw Error("vector field coefficients must live on the same coordinates");
        }
    }
}

int VectorField::order() const
{
    int o = TruncatedSeries::kMaxOrder;
    for (const auto &c : coeffs_) {
        o = std::min(o, c.order());
    }
    return o;
}

TruncatedSeries VectorField::apply(const TruncatedSeries &f) const
{
    if (f.nvars() != dim()) {
        throw Error("vector field and function live on different coordinates");
    }
    int order = f.order() - 1;
    for (const auto &c : coeffs_) {
        order = std::min(order, c.order());
    }
    if (order < 0) {
        throw OrderExhausted("order exhausted applying a vector field");
    }
    TruncatedSeries out(dim(), order);
    for (int i = 0; i < dim(); ++i) {
        const auto &c = coeffs_[static_cast<std::size_t>(i)];
        if (c.is_zero()) {
            continue;
        }
        out += c.truncated(order) * derive(f, i).truncated(order);
    }
    return out;
}

VectorField VectorField::conjugate(const VariablePairing &pairing) const
{
    std::vector<TruncatedSeries> out(coeffs_.size());
    for (int i = 0; i < dim(); ++i) {
        out[static_cast<std::size_t>(pairing(i))] = crjet::conjugate(coeffs_[static_cast<std::size_t>(i)], pairing);
    }
    return VectorField(std::move(out));
}

std::vector<CScalar> VectorField::value_at_zero() const
{
    std::vector<CScalar> v;
    for (const auto &c : coeffs_) {
        v.push_back(c.constant_term());
    }
    return v;
}

VectorField &VectorField::operator+=(const VectorField &o)
{
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += o.coeffs_.at(i);
    }
    return *this;
}

VectorField &VectorField::operator-=(const VectorField &o)
{
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= o.coeffs_.at(i);
    }
    return *this;
}

VectorField operator*(const TruncatedSeries &f, const VectorField &X)
{
    std::vector<TruncatedSeries> out;
    for (const auto &c : X.coeffs_) {
        out.push_back(f * c);
    }
    return VectorField(std::move(out));
}

VectorField operator*(const CScalar &c, const VectorField &X)
{
    std::vector<TruncatedSeries> out;
    for (const auto &x : X.coeffs_) {
        out.push_back(x * c);
    }
    return VectorField(std::move(out));
}

VectorField bracket(const VectorField &X, const VectorField &Y)
{
    if (X.dim() != Y.dim()) {
        throw Error("bracket of vector fields on different coordinates");
    }
    std::vector<TruncatedSeries> out;
    out.reserve(static_cast<std::size_t>(X.dim()));
    for (int i = 0; i < X.dim(); ++i) {
        out.push_back(X.apply(Y[i]) - Y.apply(X[i]));
    }
    return VectorField(std::move(out));
}

// OneForm

OneForm::OneForm(std::vector<TruncatedSeries> coeffs) : coeffs_(std::move(coeffs))
{
    for (const auto &c : coeffs_) {
        if (c.nvars() != static_cast<int>(coeffs_.size())) {
            throw Error("form coefficients must live on the same coordinates");
        }
    }
}

TruncatedSeries OneForm::pair(const VectorField &X) const
{
    if (X.dim() != dim()) {
        throw Error("pairing of a form and a field on different coordinates");
    }
    int order = TruncatedSeries::kMaxOrder;
    for (int i = 0; i < dim(); ++i) {
        order = std::min({order, coeffs_[static_cast<std::size_t>(i)].order(), X[i].order()});
    }
    TruncatedSeries out(dim(), order);
    for (int i = 0; i < dim(); ++i) {
        out += coeffs_[static_cast<std::size_t>(i)] * X[i];
    }
    return out;
}

OneForm OneForm::conjugate(const VariablePairing &pairing) const
{
    std::vector<TruncatedSeries> out(coeffs_.size());
    for (int i = 0; i < dim(); ++i) {
        out[static_cast<std::size_t>(pairing(i))] = crjet::conjugate(coeffs_[static_cast<std::size_t>(i)], pairing);
    }
    return OneForm(std::move(out));
}

OneForm &OneForm::operator+=(const OneForm &o)
{
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += o.coeffs_.at(i);
    }
    return *this;
}

OneForm operator*(const TruncatedSeries &f, const OneForm &w)
{
    std::vector<TruncatedSeries> out;
    for (const auto &c : w.coeffs_) {
        out.push_back(f * c);
    }
    return OneForm(std::move(out));
}

OneForm operator*(const CScalar &c, const OneForm &w)
{
    std::vector<TruncatedSeries> out;
    for (const auto &x : w.coeffs_) {
        out.push_back(x * c);
    }
    return OneForm(std::move(out));
}

TruncatedSeries exterior_derivative(const OneForm &omega, const VectorField &X, const VectorField &Y)
{
    return X.apply(omega.pair(Y)) - Y.apply(omega.pair(X)) - omega.pair(bracket(X, Y));
}

OneForm contract_exterior_derivative(const VectorField &X, const OneForm &omega)
{
    const int d = omega.dim();
    if (X.dim() != d) {
        throw Error("contraction of a form and a field on different coordinates");
    }
    // d omega = sum_{j,i} d_j w_i dx_j ^ dx_i, so (X _| d omega)_i = X^j (d_j w_i - d_i w_j).
    std::vector<std::vector<TruncatedSeries>> partial(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            partial[static_cast<std::size_t>(i)].push_back(derive(omega[i], j));
        }
    }
    std::vector<TruncatedSeries> out;
    for (int i = 0; i < d; ++i) {
        int order = TruncatedSeries::kMaxOrder;
        for (int j = 0; j < d; ++j) {
            order = std::min({order, X[j].order(), partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].order(),
                              partial[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].order()});
        }
        TruncatedSeries c(d, order);
        for (int j = 0; j < d; ++j) {
            if (X[j].is_zero() || i == j) {
                continue;
            }
            c += X[j] * (partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                         partial[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        }
        out.push_back(std::move(c));
    }
    return OneForm(std::move(out));
}

// Frame

int Frame::order() const
{
    int o = T.order();
    for (const auto &X : L) {
        o = std::min(o, X.order());
    }
    return o;
}

std::vector<VectorField> Frame::basis() const
{
    std::vector<VectorField> b{T};
    b.insert(b.end(), L.begin(), L.end());
    b.insert(b.end(), Lbar.begin(), Lbar.end());
    return b;
}

std::vector<OneForm> Frame::cobasis() const
{
    std::vector<OneForm> b{theta};
    b.insert(b.end(), thetaA.begin(), thetaA.end());
    b.insert(b.end(), thetaAbar.begin(), thetaAbar.end());
    return b;
}

namespace
{

// Dual coframe of a basis by inverting the component matrix.
void fill_coframe(Frame &F)
{
    const auto basis = F.basis();
    const int d = static_cast<int>(basis.size());
    SeriesMatrix Et(static_cast<std::size_t>(d));
    // Et(i, b) = component i of basis vector b.
    for (int i = 0; i < d; ++i) {
        for (int b = 0; b < d; ++b) {
            Et[static_cast<std::size_t>(i)].push_back(basis[static_cast<std::size_t>(b)][i]);
        }
    }
    const auto inv = invert(Et);
    std::vector<OneForm> forms;
    for (int a = 0; a < d; ++a) {
        forms.emplace_back(inv[static_cast<std::size_t>(a)]);
    }
    F.theta = forms[0];
    F.thetaA.assign(forms.begin() + 1, forms.begin() + 1 + F.n);
    F.thetaAbar.assign(forms.begin() + 1 + F.n, forms.end());
}

} // namespace

Frame build_frame(const Hypersurface &M)
{
    const IntrinsicLayout in = M.intrinsic();
    const int nv = in.nvars();
    const int order = M.phi.order() - 1;
    if (order < 0) {
        throw OrderExhausted("graph function must be known through order 1");
    }
    const auto unit = [&](int var) {
        std::vector<TruncatedSeries> c(static_cast<std::size_t>(nv), TruncatedSeries(nv, order));
        c[static_cast<std::size_t>(var)] = TruncatedSeries::constant(nv, order, CScalar(1));
        return c;
    };

    // Lbar_j (s + i phi) = 0  =>  a_j = -i phi_{zb_j} / (1 + i phi_s).
    const TruncatedSeries denom =
        TruncatedSeries::constant(nv, order, CScalar(1)) + derive(M.phi, in.s()) * CScalar::i();
    const TruncatedSeries inv = invert_unit(denom);

    Frame F;
    F.n = in.n;
    F.T = VectorField(unit(in.s()));
    for (int j = 0; j < in.n; ++j) {
        auto c = unit(in.zbar(j));
        c[static_cast<std::size_t>(in.s())] = -(derive(M.phi, in.zbar(j)) * inv * CScalar::i());
        F.Lbar.emplace_back(std::move(c));
    }
    for (int j = 0; j < in.n; ++j) {
        F.L.push_back(F.Lbar[static_cast<std::size_t>(j)].conjugate(in.pairing()));
    }
    fill_coframe(F);
    return F;
}

Frame change_cr_basis(const Frame &F, const DenseMatrix<CScalar> &P)
{
    const int n = F.n;
    const auto pairing = F.layout().pairing();
    const auto Pinv = invert(P);
    Frame G;
    G.n = n;
    G.T = F.T;
    G.theta = F.theta;
    for (int A = 0; A < n; ++A) {
        VectorField X = P[0][static_cast<std::size_t>(A)] * F.L[0];
        OneForm w = Pinv[static_cast<std::size_t>(A)][0] * F.thetaA[0];
        for (int B = 1; B < n; ++B) {
            X += P[static_cast<std::size_t>(B)][static_cast<std::size_t>(A)] * F.L[static_cast<std::size_t>(B)];
            w += Pinv[static_cast<std::size_t>(A)][static_cast<std::size_t>(B)] * F.thetaA[static_cast<std::size_t>(B)];
        }
        G.L.push_back(X);
        G.thetaA.push_back(w);
    }
    for (int A = 0; A < n; ++A) {
        G.Lbar.push_back(G.L[static_cast<std::size_t>(A)].conjugate(pairing));
        G.thetaAbar.push_back(G.thetaA[static_cast<std::size_t>(A)].conjugate(pairing));
    }
    return G;
}

DenseMatrix<CScalar> adapted_basis_change(int n, const std::vector<std::vector<std::vector<CScalar>>> &subspaces)
{
    // Walk from the smallest subspace up, prepending the vectors that extend
    // the span at each level.
    std::vector<std::vector<CScalar>> chosen;
    RowReducer<CScalar> span(n);
    std::vector<std::vector<std::vector<CScalar>>> levels = subspaces;
    std::vector<std::vector<CScalar>> whole;
    for (int i = 0; i < n; ++i) {
        std::vector<CScalar> e(static_cast<std::size_t>(n));
        e[static_cast<std::size_t>(i)] = CScalar(1);
        whole.push_back(std::move(e));
    }
    levels.insert(levels.begin(), whole);
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        std::vector<std::vector<CScalar>> added;
        for (const auto &v : *it) {
            if (static_cast<int>(v.size()) != n) {
                throw Error("subspace vector has the wrong dimension");
            }
            if (span.add_dense_row(v)) {
                added.push_back(v);
            }
        }
        chosen.insert(chosen.begin(), added.begin(), added.end());
    }
    if (static_cast<int>(chosen.size()) != n) {
        throw Error("filtration is inconsistent with the frame dimension");
    }
    DenseMatrix<CScalar> P(static_cast<std::size_t>(n), std::vector<CScalar>(static_cast<std::size_t>(n)));
    for (int col = 0; col < n; ++col) {
        for (int row = 0; row < n; ++row) {
            P[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = chosen[static_cast<std::size_t>(col)][static_cast<std::size_t>(row)];
        }
    }
    return P;
}

std::vector<StructureFunction> structure_functions(const Frame &F)
{
    std::vector<StructureFunction> out;
    const int n = F.n;
    auto idx = [](int A) { return std::to_string(A + 1); };
    for (int C = 0; C < n; ++C) {
        const auto &tc = F.thetaA[static_cast<std::size_t>(C)];
        for (int A = 0; A < n; ++A) {
            for (int B = 0; B < n; ++B) {
                out.push_back({"R^" + idx(C) + "_{" + idx(A) + "bar " + idx(B) + "}",
                               exterior_derivative(tc, F.Lbar[static_cast<std::size_t>(A)], F.L[static_cast<std::size_t>(B)])});
                out.push_back({"R^" + idx(C) + "_{" + idx(A) + " " + idx(B) + "}",
                               exterior_derivative(tc, F.L[static_cast<std::size_t>(A)], F.L[static_cast<std::size_t>(B)])});
            }
            out.push_back({"R^" + idx(C) + "_{" + idx(A) + "bar}",
                           exterior_derivative(tc, F.Lbar[static_cast<std::size_t>(A)], F.T)});
            out.push_back({"R^" + idx(C) + "_{" + idx(A) + "}", exterior_derivative(tc, F.T, F.L[static_cast<std::size_t>(A)])});
        }
    }
    return out;
}

std::vector<StructureFunction> duality_defects(const Frame &F)
{
    std::vector<StructureFunction> out;
    const auto basis = F.basis();
    const auto cobasis = F.cobasis();
    for (std::size_t a = 0; a < cobasis.size(); ++a) {
        for (std::size_t b = 0; b < basis.size(); ++b) {
            TruncatedSeries v = cobasis[a].pair(basis[b]);
            if (a == b) {
                v -= TruncatedSeries::constant(v.nvars(), v.order(), CScalar(1));
            }
            out.push_back({"<cobasis " + std::to_string(a) + ", basis " + std::to_string(b) + ">", std::move(v)});
        }
    }
    return out;
}

} // namespace crjet
