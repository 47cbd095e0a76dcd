#include <crjet/invariants.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <thread>

#include <crjet/linalg.hpp>

namespace crjet
{

std::string tuple_label(const IndexTuple &t, bool barred)
{
    std::string s;
    for (int a : t) {
        s += std::to_string(a + 1);
        if (barred) {
            s += "b";
        }
    }
    return s;
}

std::string Bounded::to_string() const
{
    if (value) {
        return std::to_string(*value);
    }
    return "∞@" + bound_name;
}

OneForm lie_chain(const Frame &F, const IndexTuple &abar)
{
    OneForm w = F.theta;
    for (int a : abar) {
        w = contract_exterior_derivative(F.Lbar.at(static_cast<std::size_t>(a)), w);
    }
    return w;
}

// HTensor

HTensor::HTensor(const Frame &F) : frame_(&F) {}

const OneForm &HTensor::chain(const IndexTuple &abar)
{
    auto it = chains_.find(abar);
    if (it != chains_.end()) {
        return it->second;
    }
    OneForm w;
    if (abar.empty()) {
        w = frame_->theta;
    } else {
        const IndexTuple prefix(abar.begin(), abar.end() - 1);
        const OneForm &prev = chain(prefix);
        w = contract_exterior_derivative(frame_->Lbar.at(static_cast<std::size_t>(abar.back())), prev);
    }
    return chains_.emplace(abar, std::move(w)).first->second;
}

const TruncatedSeries &HTensor::h(const IndexTuple &abar, int D)
{
    auto key = std::make_pair(abar, D);
    auto it = hd_.find(key);
    if (it != hd_.end()) {
        return it->second;
    }
    auto v = chain(abar).pair(frame_->L.at(static_cast<std::size_t>(D)));
    return hd_.emplace(std::move(key), std::move(v)).first->second;
}

const TruncatedSeries &HTensor::h(const IndexTuple &abar)
{
    auto it = ht_.find(abar);
    if (it != ht_.end()) {
        return it->second;
    }
    auto v = chain(abar).pair(frame_->T);
    return ht_.emplace(abar, std::move(v)).first->second;
}

std::vector<IndexTuple> HTensor::tuples(int n, int k)
{
    std::vector<IndexTuple> out;
    IndexTuple t(static_cast<std::size_t>(k), 0);
    while (true) {
        out.push_back(t);
        int pos = k - 1;
        while (pos >= 0 && t[static_cast<std::size_t>(pos)] == n - 1) {
            t[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) {
            return out;
        }
        ++t[static_cast<std::size_t>(pos)];
    }
}

namespace
{

// Nondecreasing tuples of length k: multisets.
std::vector<IndexTuple> multisets(int n, int k)
{
    std::vector<IndexTuple> out;
    for (auto &t : HTensor::tuples(n, k)) {
        if (std::is_sorted(t.begin(), t.end())) {
            out.push_back(t);
        }
    }
    return out;
}

VectorField nested_bracket(const Frame &F, const IndexTuple &abar, int D)
{
    VectorField X = F.L.at(static_cast<std::size_t>(D));
    for (int a : abar) {
        X = bracket(F.Lbar.at(static_cast<std::size_t>(a)), X);
    }
    return X;
}

std::vector<CScalar> values_at_zero(const std::vector<TruncatedSeries> &v)
{
    std::vector<CScalar> out;
    for (const auto &s : v) {
        out.push_back(s.constant_term());
    }
    return out;
}

int min_order(std::initializer_list<int> orders)
{
    return *std::min_element(orders.begin(), orders.end());
}

} // namespace

void IdentityReport::expect_zero(const std::string &label, const TruncatedSeries &residual)
{
    ++checked;
    order = checked == 1 ? residual.order() : std::min(order, residual.order());
    if (!residual.is_zero()) {
        violations.push_back({label, residual.to_string()});
    }
}

void IdentityReport::expect_equal(const std::string &label, const CScalar &a, const CScalar &b)
{
    ++checked;
    if (!(a == b)) {
        violations.push_back({label, (a - b).to_string()});
    }
}

CScalar nested_bracket_value(const Frame &F, const IndexTuple &abar, int D)
{
    return F.theta.pair(nested_bracket(F, abar, D)).constant_term();
}

ExtrinsicReport extrinsic_k0(const Hypersurface &M, int kmax)
{
    const AmbientLayout a = M.ambient();
    const int N = M.N;
    const int n = N - 1;
    const auto &rho = M.rho;
    if (kmax > rho.order() - 1) {
        throw OrderExhausted("order " + std::to_string(rho.order()) + " too small for kmax " + std::to_string(kmax));
    }
    std::vector<TruncatedSeries> grad;
    for (int k = 0; k < N; ++k) {
        grad.push_back(derive(rho, a.holo(k)));
    }
    const auto rho_wb = derive(rho, a.wbar());
    if (rho_wb.constant_term().is_zero()) {
        throw Error("rho_wbar(0) = 0: defining function is not normalized");
    }
    const auto inv = invert_unit(rho_wb);
    std::vector<TruncatedSeries> coef;
    for (int j = 0; j < n; ++j) {
        coef.push_back(-(derive(rho, a.zbar(j)) * inv));
    }
    auto apply = [&](int j, const TruncatedSeries &f) {
        return derive(f, a.zbar(j)) + coef[static_cast<std::size_t>(j)] * derive(f, a.wbar());
    };

    ExtrinsicReport rep;
    rep.k0 = {std::nullopt, "kmax", kmax};
    RowReducer<CScalar> span(N);
    // Level k holds Lbar^alpha rho_Z for nondecreasing alpha of length k.
    std::map<IndexTuple, std::vector<TruncatedSeries>> level{{IndexTuple{}, grad}};
    span.add_dense_row(values_at_zero(grad));
    rep.span_dims.push_back(span.rank());
    if (span.rank() == N) {
        rep.k0.value = 0;
        return rep;
    }
    for (int k = 1; k <= kmax; ++k) {
        std::map<IndexTuple, std::vector<TruncatedSeries>> next;
        for (const auto &[alpha, vec] : level) {
            const int first = alpha.empty() ? 0 : alpha.back();
            for (int j = first; j < n; ++j) {
                IndexTuple beta = alpha;
                beta.push_back(j);
                std::vector<TruncatedSeries> out;
                for (const auto &f : vec) {
                    out.push_back(apply(j, f));
                }
                span.add_dense_row(values_at_zero(out));
                next.emplace(std::move(beta), std::move(out));
            }
        }
        level = std::move(next);
        rep.span_dims.push_back(span.rank());
        if (span.rank() == N) {
            rep.k0.value = k;
            break;
        }
    }
    return rep;
}

FiltrationBounds FiltrationBounds::defaults(int N)
{
    FiltrationBounds b;
    b.kmax = N - 1;
    b.lmax = b.kmax + 1;
    b.typemax = b.kmax + 1;
    return b;
}

FiltrationReport intrinsic_filtration(const Frame &F, const FiltrationBounds &bounds)
{
    const int n = F.n;
    HTensor H(F);
    FiltrationReport rep;
    rep.n = n;
    rep.k0 = {std::nullopt, "kmax", bounds.kmax};
    rep.ell0 = {std::nullopt, "lmax", bounds.lmax};
    rep.ell1 = {std::nullopt, "lmax", bounds.lmax};
    rep.type = {std::nullopt, "typemax", bounds.typemax};

    std::vector<std::vector<CScalar>> standard;
    for (int i = 0; i < n; ++i) {
        std::vector<CScalar> e(static_cast<std::size_t>(n));
        e[static_cast<std::size_t>(i)] = CScalar(1);
        standard.push_back(std::move(e));
    }
    rep.Ek_dims.push_back(1);
    rep.Fk_dims.push_back(n);
    rep.rk.push_back(0);
    rep.Fk_bases.push_back(standard);

    RowReducer<CScalar> rows(n);
    auto h_row = [&](const IndexTuple &t) {
        std::vector<CScalar> r;
        for (int B = 0; B < n; ++B) {
            r.push_back(H.h(t, B).constant_term());
        }
        return r;
    };
    for (int k = 1; k <= bounds.kmax; ++k) {
        for (const auto &t : HTensor::tuples(n, k)) {
            rows.add_dense_row(h_row(t));
        }
        if (k == 1) {
            rep.levi_rank = rows.rank();
        }
        rep.Ek_dims.push_back(1 + rows.rank());
        rep.Fk_dims.push_back(n - rows.rank());
        rep.rk.push_back(rows.rank());
        rep.Fk_bases.push_back(rows.nullspace());
        if (rows.rank() == n) {
            rep.k0.value = k;
            break;
        }
    }
    if (bounds.kmax < 1) {
        RowReducer<CScalar> levi(n);
        for (const auto &t : HTensor::tuples(n, 1)) {
            levi.add_dense_row(h_row(t));
        }
        rep.levi_rank = levi.rank();
    }

    for (int l = 1; l <= bounds.lmax && !rep.ell0.finite(); ++l) {
        for (const auto &t : HTensor::tuples(n, l)) {
            for (int D = 0; D < n; ++D) {
                if (!H.h(t, D).constant_term().is_zero()) {
                    rep.ell0.value = l;
                    rep.ell0_witness = std::make_pair(t, D);
                    break;
                }
            }
            if (rep.ell0.finite()) {
                break;
            }
        }
    }

    // Nested brackets share prefixes; extend level by level.
    std::map<std::pair<IndexTuple, int>, VectorField> nested;
    for (int D = 0; D < n; ++D) {
        nested.emplace(std::make_pair(IndexTuple{}, D), F.L[static_cast<std::size_t>(D)]);
    }
    for (int l = 1; l <= bounds.lmax && !rep.ell1.finite(); ++l) {
        std::map<std::pair<IndexTuple, int>, VectorField> next;
        for (const auto &[key, X] : nested) {
            for (int A = 0; A < n; ++A) {
                IndexTuple t = key.first;
                t.push_back(A);
                VectorField Y = bracket(F.Lbar[static_cast<std::size_t>(A)], X);
                if (!rep.ell1.finite() && !F.theta.pair(Y).constant_term().is_zero()) {
                    rep.ell1.value = l;
                }
                next.emplace(std::make_pair(std::move(t), key.second), std::move(Y));
            }
        }
        nested = std::move(next);
    }

    // Breadth-first commutators [X_m, C_{m-1}].
    const int dim = 2 * n + 1;
    RowReducer<CScalar> span(dim);
    std::vector<VectorField> gens;
    for (int A = 0; A < n; ++A) {
        gens.push_back(F.L[static_cast<std::size_t>(A)]);
    }
    for (int A = 0; A < n; ++A) {
        gens.push_back(F.Lbar[static_cast<std::size_t>(A)]);
    }
    for (const auto &g : gens) {
        span.add_dense_row(g.value_at_zero());
    }
    if (span.rank() == dim) {
        rep.type.value = 1;
    }
    std::vector<VectorField> current = gens;
    for (int m = 2; m <= bounds.typemax && !rep.type.finite(); ++m) {
        std::vector<VectorField> next;
        for (const auto &X : gens) {
            for (const auto &C : current) {
                VectorField Y = bracket(X, C);
                bool zero = std::all_of(Y.coeffs().begin(), Y.coeffs().end(), [](const auto &c) { return c.is_zero(); });
                if (zero) {
                    continue;
                }
                bool seen = false;
                for (const auto &Z : next) {
                    if (Z.coeffs() == Y.coeffs() || (-1 * Z).coeffs() == Y.coeffs()) {
                        seen = true;
                        break;
                    }
                }
                if (seen) {
                    continue;
                }
                span.add_dense_row(Y.value_at_zero());
                next.push_back(std::move(Y));
            }
        }
        if (span.rank() == dim) {
            rep.type.value = m;
        }
        current = std::move(next);
    }
    return rep;
}

Frame adapt_frame(const Frame &F, const FiltrationReport &report)
{
    if (report.n != F.n) {
        throw Error("filtration is inconsistent with the frame dimension");
    }
    std::vector<std::vector<std::vector<CScalar>>> subspaces(report.Fk_bases.begin() + 1, report.Fk_bases.end());
    return change_cr_basis(F, adapted_basis_change(F.n, subspaces));
}

IdentityReport verify_frame(const Frame &F)
{
    IdentityReport rep;
    rep.name = "frame";
    for (const auto &d : duality_defects(F)) {
        rep.expect_zero(d.label, d.value);
    }
    for (const auto &s : structure_functions(F)) {
        rep.expect_zero(s.label, s.value);
    }
    return rep;
}

IdentityReport verify_h_recursion(const Frame &F, int k)
{
    IdentityReport rep;
    rep.name = "h-recursion";
    const int n = F.n;
    HTensor H(F);
    // R^B_{Cbar D}
    std::map<std::tuple<int, int, int>, TruncatedSeries> R;
    for (int B = 0; B < n; ++B) {
        for (int C = 0; C < n; ++C) {
            for (int D = 0; D < n; ++D) {
                R.emplace(std::make_tuple(B, C, D),
                          exterior_derivative(F.thetaA[static_cast<std::size_t>(B)], F.Lbar[static_cast<std::size_t>(C)],
                                              F.L[static_cast<std::size_t>(D)]));
            }
        }
    }
    for (int kk = 0; kk <= k; ++kk) {
        for (const auto &t : HTensor::tuples(n, kk)) {
            for (int C = 0; C < n; ++C) {
                IndexTuple tc = t;
                tc.push_back(C);
                for (int D = 0; D < n; ++D) {
                    TruncatedSeries rhs = F.Lbar[static_cast<std::size_t>(C)].apply(H.h(t, D)) + H.h(t) * H.h({C}, D);
                    for (int B = 0; B < n; ++B) {
                        rhs += H.h(t, B) * R.at(std::make_tuple(B, C, D));
                    }
                    const auto &lhs = H.h(tc, D);
                    const int o = min_order({lhs.order(), rhs.order()});
                    rep.expect_zero("h_{" + tuple_label(tc, true) + " " + std::to_string(D + 1) + "}",
                               lhs.truncated(o) - rhs.truncated(o));
                }
            }
        }
    }
    return rep;
}

IdentityReport verify_h_shift(const Frame &F, const Bounded &ell0)
{
    IdentityReport rep;
    rep.name = "h-shift";
    if (!ell0.finite() || *ell0.value < 2) {
        rep.vacuous = true;
        rep.note = ell0.finite() ? "ell0 = " + ell0.to_string() + ": no r >= 2 with r + j <= ell0"
                                 : "ell0 = " + ell0.to_string() + ": no finite range to check";
        return rep;
    }
    const int l0 = *ell0.value;
    const int n = F.n;
    HTensor H(F);
    auto apply_chain = [&](const IndexTuple &C, TruncatedSeries f) {
        // L_C1bar ... L_Cjbar f: the rightmost operator acts first.
        for (auto it = C.rbegin(); it != C.rend(); ++it) {
            f = F.Lbar[static_cast<std::size_t>(*it)].apply(f);
        }
        return f;
    };
    for (int r = 2; r <= l0; ++r) {
        for (int j = 0; r + j <= l0; ++j) {
            for (const auto &A : HTensor::tuples(n, r)) {
                const IndexTuple head(A.begin(), A.end() - 1);
                for (const auto &C : HTensor::tuples(n, j)) {
                    for (int D = 0; D < n; ++D) {
                        const auto lhs = apply_chain(C, H.h(A, D)).constant_term();
                        const auto rhs =
                            apply_chain(C, F.Lbar[static_cast<std::size_t>(A.back())].apply(H.h(head, D))).constant_term();
                        rep.expect_equal(
                                    "r=" + std::to_string(r) + " C=" + tuple_label(C, true) + " h_{" + tuple_label(A, true) +
                                        " " + std::to_string(D + 1) + "}",
                                    lhs, rhs);
                    }
                }
            }
        }
    }
    return rep;
}

IdentityReport verify_bracket_values(const Frame &F, const FiltrationReport &report, int lmax)
{
    IdentityReport rep;
    rep.name = "bracket-values";
    const int n = F.n;
    HTensor H(F);
    const int R = report.ell0.finite() ? *report.ell0.value : lmax;
    if (!report.ell0.finite()) {
        rep.note = "ell0 infinite up to lmax; both sides checked to vanish for r <= " + std::to_string(lmax);
    }
    for (int r = 1; r <= R; ++r) {
        for (const auto &A : HTensor::tuples(n, r)) {
            for (int D = 0; D < n; ++D) {
                rep.expect_equal( "r=" + std::to_string(r) + " " + tuple_label(A, true) + " " + std::to_string(D + 1),
                            nested_bracket_value(F, A, D), -H.h(A, D).constant_term());
            }
        }
    }
    ++rep.checked;
    if ((report.ell0.finite() || report.ell1.finite()) && !(report.ell0 == report.ell1)) {
        rep.violations.push_back({"ell0 = ell1", report.ell0.to_string() + " vs " + report.ell1.to_string()});
    }
    return rep;
}

std::vector<ScanResult> nondegeneracy_scan(const Hypersurface &M, const std::vector<ScanPoint> &points, int k,
                                           int threads)
{
    if (!M.rho.is_polynomial()) {
        throw Error("scan needs a polynomial defining function");
    }
    if (!M.phi.is_polynomial()) {
        throw Error("scan needs a polynomial graph function");
    }
    const int n = M.n();
    const AmbientLayout a = M.ambient();
    std::vector<ScanResult> out(points.size());
    auto work = [&](std::size_t idx) {
        const auto &p = points[idx];
        if (static_cast<int>(p.z.size()) != n) {
            throw Error("scan point has the wrong dimension");
        }
        std::vector<CScalar> intrinsic;
        for (const auto &z : p.z) {
            intrinsic.push_back(z);
        }
        for (const auto &z : p.z) {
            intrinsic.push_back(z.conj());
        }
        intrinsic.emplace_back(p.s);
        const CScalar t = evaluate(M.phi, intrinsic);
        std::vector<CScalar> amb(static_cast<std::size_t>(a.nvars()));
        for (int j = 0; j < n; ++j) {
            amb[static_cast<std::size_t>(a.z(j))] = p.z[static_cast<std::size_t>(j)];
            amb[static_cast<std::size_t>(a.zbar(j))] = p.z[static_cast<std::size_t>(j)].conj();
        }
        const CScalar w = CScalar(p.s) + CScalar::i() * t;
        amb[static_cast<std::size_t>(a.w())] = w;
        amb[static_cast<std::size_t>(a.wbar())] = w.conj();
        const auto Mp = from_defining(recenter(M.rho, amb), M.N);
        ScanResult r;
        r.point = p;
        r.t = t.re();
        r.k0 = extrinsic_k0(Mp, k).k0;
        r.nondegenerate = r.k0.finite();
        out[idx] = std::move(r);
    };
    const std::size_t nthreads = static_cast<std::size_t>(std::max(1, threads));
    if (nthreads == 1 || points.size() < 2) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            work(i);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = next++; i < points.size(); i = next++) {
                    work(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

// Commutator certificates for one barred field

namespace
{

std::vector<MultiIndex> monomials_up_to(int nvars, int degree)
{
    std::vector<MultiIndex> out;
    std::vector<int> e(static_cast<std::size_t>(nvars), 0);
    std::function<void(int, int)> rec = [&](int v, int left) {
        if (v == nvars) {
            out.emplace_back(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[static_cast<std::size_t>(v)] = k;
            rec(v + 1, left - k);
        }
        e[static_cast<std::size_t>(v)] = 0;
    };
    rec(0, degree);
    std::sort(out.begin(), out.end(), [](const MultiIndex &x, const MultiIndex &y) {
        return x.total() != y.total() ? x.total() < y.total() : x < y;
    });
    return out;
}

/// Series coefficients c_g (jets through `degree`) with sum_g c_g * G_g = R.
std::optional<std::vector<TruncatedSeries>> solve_combination(const std::vector<DiffOperator> &gens, const DiffOperator &R,
                                                               int degree)
{
    const int nv = R.nvars();
    const auto mons = monomials_up_to(nv, degree);
    std::map<MultiIndex, int> mon_index;
    for (std::size_t i = 0; i < mons.size(); ++i) {
        mon_index.emplace(mons[i], static_cast<int>(i));
    }
    const int nm = static_cast<int>(mons.size());
    const int ncols = static_cast<int>(gens.size()) * nm + 1;
    std::map<std::pair<MultiIndex, int>, std::map<int, CScalar>> rows;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        for (const auto &[beta, c] : gens[g].terms()) {
            for (const auto &t : c.terms()) {
                const MultiIndex e = c.exponents_of(t);
                if (e.total() > degree) {
                    continue;
                }
                for (int mu = 0; mu < nm; ++mu) {
                    if (mons[static_cast<std::size_t>(mu)].total() + e.total() > degree) {
                        break;
                    }
                    const int nu = mon_index.at(mons[static_cast<std::size_t>(mu)] + e);
                    rows[{beta, nu}][static_cast<int>(g) * nm + mu] += t.coeff;
                }
            }
        }
    }
    for (const auto &[beta, c] : R.terms()) {
        for (const auto &t : c.terms()) {
            const MultiIndex e = c.exponents_of(t);
            if (e.total() > degree) {
                continue;
            }
            rows[{beta, mon_index.at(e)}][ncols - 1] += t.coeff;
        }
    }
    RowReducer<CScalar> red(ncols);
    for (auto &[key, entries] : rows) {
        SparseRow<CScalar> row;
        for (auto &[col, v] : entries) {
            if (!v.is_zero()) {
                row.emplace_back(col, v);
            }
        }
        red.add_row(std::move(row));
    }
    const auto sol = red.solve_augmented();
    if (!sol) {
        return std::nullopt;
    }
    std::vector<TruncatedSeries> out;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        TruncatedSeries s(nv, degree);
        for (int mu = 0; mu < nm; ++mu) {
            const auto &v = (*sol)[g * static_cast<std::size_t>(nm) + static_cast<std::size_t>(mu)];
            if (!v.is_zero()) {
                s += TruncatedSeries::monomial(nv, degree, mons[static_cast<std::size_t>(mu)], v);
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

DiffOperator product(const std::vector<DiffOperator> &L, const IndexTuple &E, int nvars, int order)
{
    DiffOperator P = DiffOperator::identity(nvars, order);
    for (auto it = E.rbegin(); it != E.rend(); ++it) {
        P = L[static_cast<std::size_t>(*it)] * P;
    }
    return P;
}

std::string op_label(const IndexTuple &E, bool withT)
{
    std::string s = E.empty() ? "" : "L^{" + tuple_label(E, false) + "}";
    if (withT) {
        s += s.empty() ? "T" : " T";
    }
    return s.empty() ? "1" : s;
}

void certify(CommutatorCertificate &cert, const std::vector<DiffOperator> &gens, const std::vector<std::string> &labels,
             const DiffOperator &base, const DiffOperator &target, int check_degree)
{
    const DiffOperator R = target - base;
    int degree = std::min(R.order(), check_degree);
    for (const auto &g : gens) {
        degree = std::min(degree, g.order());
    }
    if (degree < 0) {
        throw OrderExhausted("order exhausted building the commutator certificate");
    }
    const auto sol = solve_combination(gens, R, degree);
    cert.checked_degree = check_degree;
    if (!sol) {
        cert.verified = false;
        cert.mismatch = "linear system inconsistent";
        return;
    }
    DiffOperator combo = base;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        cert.coefficients.emplace_back(labels[g], (*sol)[g]);
        combo += (*sol)[g] * gens[g];
    }
    cert.mismatch = compare_on_monomials(combo, target, check_degree);
    cert.verified = cert.mismatch.empty();
}

} // namespace

CommutatorReport commutator_certificates(const Frame &F, const IndexTuple &E, int Fbar, int check_degree)
{
    const int n = F.n;
    const int m = static_cast<int>(E.size());
    if (m < 1) {
        throw Error("commutator certificate needs m >= 1");
    }
    for (int e : E) {
        if (e < 0 || e >= n) {
            throw Error("index out of range in E");
        }
    }
    if (Fbar < 0 || Fbar >= n) {
        throw Error("index out of range for Fbar");
    }
    HTensor H(F);
    const TruncatedSeries &h1 = H.h({Fbar}, 0);
    if (h1.constant_term().is_zero()) {
        throw Error("h_{Fbar 1}(0) = 0: the k = 1 certificate needs ell0 = 1 realized by L_1");
    }
    const int nv = F.layout().nvars();
    const int order = F.order();
    std::vector<DiffOperator> L;
    for (const auto &X : F.L) {
        L.push_back(DiffOperator::from_field(X));
    }
    const DiffOperator Lf = DiffOperator::from_field(F.Lbar[static_cast<std::size_t>(Fbar)]);
    const DiffOperator T = DiffOperator::from_field(F.T);
    const std::string fl = std::to_string(Fbar + 1) + "b";

    CommutatorReport rep;
    {
        auto &cert = rep.commutator_form;
        const DiffOperator C = commutator(product(L, E, nv, order), Lf);
        DiffOperator target(nv, order);
        std::string tl;
        for (int l = 0; l < m; ++l) {
            IndexTuple rest = E;
            rest.erase(rest.begin() + l);
            target += H.h({Fbar}, E[static_cast<std::size_t>(l)]) * (product(L, rest, nv, order) * T);
            tl += (l ? " + " : "") + std::string("h_{") + fl + " " + std::to_string(E[static_cast<std::size_t>(l)] + 1) +
                  "} " + op_label(rest, true);
        }
        cert.target = tl;
        cert.base = "[" + op_label(E, false) + ", L_{" + fl + "}]";
        std::vector<DiffOperator> gens;
        std::vector<std::string> labels;
        for (int s = 0; s <= m - 2; ++s) {
            for (const auto &K : multisets(n, s)) {
                gens.push_back(product(L, K, nv, order) * T);
                labels.push_back("c_{" + (K.empty() ? std::string("0") : tuple_label(K, false)) + "} " + op_label(K, true));
            }
        }
        certify(cert, gens, labels, C, target, check_degree);
    }
    {
        auto &cert = rep.weighted_form;
        IndexTuple J(E.begin(), E.end() - 1);
        std::sort(J.begin(), J.end());
        const int ones = static_cast<int>(std::count(J.begin(), J.end(), 0));
        const int p = 1 + static_cast<int>(J.size()) - ones + 1;
        cert.weight = p;
        const DiffOperator target = pow(h1, p) * (product(L, J, nv, order) * T);
        cert.target = "(h_{" + fl + " 1})^" + std::to_string(p) + " " + op_label(J, true);
        cert.base = "0";
        std::vector<DiffOperator> gens;
        std::vector<std::string> labels;
        for (int s = 1; s <= m; ++s) {
            for (const auto &K : multisets(n, s)) {
                const DiffOperator P = product(L, K, nv, order);
                gens.push_back(P);
                labels.push_back("b_0^{" + tuple_label(K, false) + "} " + op_label(K, false));
                gens.push_back(commutator(P, Lf));
                labels.push_back("b_1^{" + tuple_label(K, false) + "} [" + op_label(K, false) + ", L_{" + fl + "}]");
            }
        }
        certify(cert, gens, labels, DiffOperator(nv, order), target, check_degree);
    }
    return rep;
}

} // namespace crjet
