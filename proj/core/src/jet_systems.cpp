#include <crjet/jet_systems.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crjet
{

namespace
{

std::size_t u(int i) { return static_cast<std::size_t>(i); }

Rational factorial(const MultiIndex &beta)
{
    Rational r(1);
    for (int v = 0; v < beta.nvars(); ++v) {
        for (int t = 2; t <= beta[v]; ++t) {
            r *= t;
        }
    }
    return r;
}

MultiIndex bump(const MultiIndex &beta, int var)
{
    return beta + MultiIndex::unit(beta.nvars(), var);
}

bool leq(const MultiIndex &a, const MultiIndex &b)
{
    for (int v = 0; v < a.nvars(); ++v) {
        if (a[v] > b[v]) {
            return false;
        }
    }
    return true;
}

MultiIndex minus(const MultiIndex &a, const MultiIndex &b)
{
    std::vector<int> e(a.exponents());
    for (int v = 0; v < a.nvars(); ++v) {
        e[u(v)] -= b[v];
    }
    return MultiIndex(std::move(e));
}

std::vector<MultiIndex> of_degree(int q, int d)
{
    std::vector<MultiIndex> out;
    for (const auto &b : jet_multi_indices(q, d)) {
        if (b.total() == d) {
            out.push_back(b);
        }
    }
    return out;
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

Expr var_node(const std::string &name)
{
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Var;
    n->name = name;
    return n;
}

Expr substitute(const Expr &e, const std::function<std::optional<Expr>(const ExprNode &)> &fn)
{
    if (auto r = fn(*e)) {
        return *r;
    }
    if (e->args.empty()) {
        return e;
    }
    auto n = std::make_shared<ExprNode>(*e);
    for (auto &a : n->args) {
        a = substitute(a, fn);
    }
    return n;
}

// Index of x_a in "xa", or -1.
int axis_of(const std::string &name, int q)
{
    if (name.size() < 2 || name[0] != 'x') {
        return -1;
    }
    for (std::size_t c = 1; c < name.size(); ++c) {
        if (!std::isdigit(static_cast<unsigned char>(name[c]))) {
            return -1;
        }
    }
    const int a = std::stoi(name.substr(1));
    return (a >= 1 && a <= q) ? a - 1 : -1;
}

int component_of(const std::string &name, int m)
{
    if (name.size() < 2 || name[0] != 'f') {
        return -1;
    }
    for (std::size_t c = 1; c < name.size(); ++c) {
        if (!std::isdigit(static_cast<unsigned char>(name[c]))) {
            return -1;
        }
    }
    const int i = std::stoi(name.substr(1));
    return (i >= 1 && i <= m) ? i - 1 : -1;
}

} // namespace

std::vector<MultiIndex> jet_multi_indices(int q, int k)
{
    std::vector<MultiIndex> out;
    std::vector<int> e(u(q), 0);
    std::function<void(int, int)> rec = [&](int v, int left) {
        if (v == q) {
            out.emplace_back(e);
            return;
        }
        for (int t = 0; t <= left; ++t) {
            e[u(v)] = t;
            rec(v + 1, left - t);
        }
        e[u(v)] = 0;
    };
    rec(0, k);
    std::sort(out.begin(), out.end(), [](const MultiIndex &a, const MultiIndex &b) {
        if (a.total() != b.total()) {
            return a.total() < b.total();
        }
        return b.exponents() < a.exponents();
    });
    return out;
}

JetVector::JetVector(int q, int m, int k) : q_(q), m_(m), k_(k)
{
    if (q < 1 || m < 1 || k < 0) {
        throw Error("jets need q >= 1, m >= 1, k >= 0");
    }
    for (int i = 0; i < m; ++i) {
        for (const auto &b : jet_multi_indices(q, k)) {
            values_.emplace(JetKey{i, b}, Rational(0));
        }
    }
}

const Rational &JetVector::at(int i, const MultiIndex &beta) const
{
    auto it = values_.find({i, beta});
    if (it == values_.end()) {
        throw Error("jet coordinate " + jet_reference_name(i, beta) + " outside the jet");
    }
    return it->second;
}

void JetVector::set(int i, const MultiIndex &beta, Rational v)
{
    auto it = values_.find({i, beta});
    if (it == values_.end()) {
        throw Error("jet coordinate " + jet_reference_name(i, beta) + " outside the jet");
    }
    v.canonicalize();
    it->second = std::move(v);
}

std::vector<JetKey> JetVector::keys() const
{
    std::vector<JetKey> out;
    const auto betas = jet_multi_indices(q_, k_);
    for (int i = 0; i < m_; ++i) {
        for (const auto &b : betas) {
            out.emplace_back(i, b);
        }
    }
    return out;
}

JetVector JetVector::from_series(const std::vector<TruncatedSeries> &f, int k)
{
    if (f.empty()) {
        throw Error("no components");
    }
    JetVector J(f[0].nvars(), static_cast<int>(f.size()), k);
    for (int i = 0; i < J.m_; ++i) {
        if (f[u(i)].order() < k) {
            throw OrderExhausted("series known only through order " + std::to_string(f[u(i)].order()));
        }
        for (const auto &b : jet_multi_indices(J.q_, k)) {
            const CScalar c = f[u(i)].coeff(b);
            if (!c.is_real()) {
                throw Error("jets are real: complex coefficient in component " + std::to_string(i + 1));
            }
            J.set(i, b, c.re() * factorial(b));
        }
    }
    return J;
}

std::vector<TruncatedSeries> JetVector::to_series() const
{
    std::vector<TruncatedSeries> out;
    for (int i = 0; i < m_; ++i) {
        TruncatedSeries s(q_, k_);
        for (const auto &b : jet_multi_indices(q_, k_)) {
            const Rational &v = at(i, b);
            if (sgn(v) != 0) {
                s += TruncatedSeries::monomial(q_, k_, b, CScalar(Rational(v / factorial(b))));
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

JetVector JetVector::truncated(int k) const
{
    if (k > k_) {
        throw Error("cannot extend a jet by truncation");
    }
    JetVector J(q_, m_, k);
    for (const auto &[i, b] : J.keys()) {
        J.set(i, b, at(i, b));
    }
    return J;
}

std::string jet_reference_name(int i, const MultiIndex &beta)
{
    if (beta.total() == 0) {
        return "f" + std::to_string(i + 1);
    }
    std::string s = "d(f" + std::to_string(i + 1);
    for (int v = 0; v < beta.nvars(); ++v) {
        for (int e = 0; e < beta[v]; ++e) {
            s += ", x" + std::to_string(v + 1);
        }
    }
    return s + ")";
}

std::optional<JetKey> jet_reference(const ExprNode &node, int q, int m)
{
    if (node.kind == ExprNode::Kind::Var) {
        const int i = component_of(node.name, m);
        if (i < 0) {
            return std::nullopt;
        }
        return JetKey{i, MultiIndex::zero(q)};
    }
    if (node.kind != ExprNode::Kind::Call || node.name != "d") {
        return std::nullopt;
    }
    if (node.args.size() < 2 || node.args[0]->kind != ExprNode::Kind::Var) {
        throw ParseError(node.line, node.col, "d() takes a component f1..fm and at least one axis x1..xq");
    }
    const int i = component_of(node.args[0]->name, m);
    if (i < 0) {
        throw ParseError(node.args[0]->line, node.args[0]->col, "unknown component '" + node.args[0]->name + "'");
    }
    MultiIndex beta = MultiIndex::zero(q);
    for (std::size_t a = 1; a < node.args.size(); ++a) {
        const auto &arg = node.args[a];
        const int axis = arg->kind == ExprNode::Kind::Var ? axis_of(arg->name, q) : -1;
        if (axis < 0) {
            throw ParseError(arg->line, arg->col, "expected an axis x1..x" + std::to_string(q));
        }
        beta = bump(beta, axis);
    }
    return JetKey{i, beta};
}

void CompleteSystem::validate() const
{
    if (q < 1 || m < 1 || k < 0) {
        throw Error("systems need q >= 1, m >= 1, k >= 0");
    }
    if (static_cast<int>(box.size()) != q) {
        throw Error("box must give one interval per axis");
    }
    for (const auto &[lo, hi] : box) {
        if (!(lo <= 0 && 0 <= hi)) {
            throw Error("box must contain the origin");
        }
    }
    for (int j = 0; j < m; ++j) {
        for (const auto &a : of_degree(q, k + 1)) {
            if (!rhs.count({j, a})) {
                throw Error("missing right-hand side for " + jet_reference_name(j, a));
            }
        }
    }
    for (const auto &[key, e] : rhs) {
        if (key.second.total() != k + 1 || key.first < 0 || key.first >= m) {
            throw Error("right-hand side " + jet_reference_name(key.first, key.second) + " has the wrong order");
        }
        std::function<void(const Expr &)> check = [&](const Expr &x) {
            if (auto ref = jet_reference(*x, q, m)) {
                if (ref->second.total() > k) {
                    throw ParseError(x->line, x->col, "right-hand sides may use derivatives of order <= " + std::to_string(k));
                }
                return;
            }
            if (x->kind == ExprNode::Kind::Var && axis_of(x->name, q) < 0) {
                throw ParseError(x->line, x->col, "unknown identifier '" + x->name + "'");
            }
            if (x->kind == ExprNode::Kind::Imag) {
                throw ParseError(x->line, x->col, "systems are real");
            }
            for (const auto &a : x->args) {
                check(a);
            }
        };
        check(e);
    }
}

CompleteSystem reduce_to_first_order(const CompleteSystem &S)
{
    S.validate();
    if (S.k == 0) {
        return S;
    }
    const auto keys = JetVector(S.q, S.m, S.k).keys();
    std::map<JetKey, int> index;
    for (std::size_t c = 0; c < keys.size(); ++c) {
        index.emplace(keys[c], static_cast<int>(c));
    }
    auto name = [](int c) { return "f" + std::to_string(c + 1); };
    CompleteSystem R;
    R.q = S.q;
    R.m = static_cast<int>(keys.size());
    R.k = 0;
    R.box = S.box;
    for (std::size_t c = 0; c < keys.size(); ++c) {
        const auto &[i, beta] = keys[c];
        for (int l = 0; l < S.q; ++l) {
            const MultiIndex next = bump(beta, l);
            Expr e;
            if (beta.total() < S.k) {
                e = var_node(name(index.at({i, next})));
            } else {
                e = substitute(S.rhs.at({i, next}), [&](const ExprNode &n) -> std::optional<Expr> {
                    if (auto ref = jet_reference(n, S.q, S.m)) {
                        return var_node(name(index.at(*ref)));
                    }
                    return std::nullopt;
                });
            }
            R.rhs.emplace(JetKey{static_cast<int>(c), MultiIndex::unit(S.q, l)}, std::move(e));
        }
    }
    return R;
}

JetVector reduce_jet(const JetVector &jet, const CompleteSystem &S)
{
    if (jet.q() != S.q || jet.m() != S.m || jet.k() < S.k) {
        throw Error("initial jet does not match the system (need q, m equal and order >= k)");
    }
    const JetVector J = jet.truncated(S.k);
    const auto keys = J.keys();
    JetVector R(S.q, static_cast<int>(keys.size()), 0);
    for (std::size_t c = 0; c < keys.size(); ++c) {
        R.set(static_cast<int>(c), MultiIndex::zero(S.q), J.at(keys[c].first, keys[c].second));
    }
    return R;
}

Grid Grid::uniform(int q, double lo, double hi, int points)
{
    if (points < 2) {
        throw Error("grids need at least two points per axis");
    }
    Grid g;
    std::vector<double> axis;
    for (int p = 0; p < points; ++p) {
        axis.push_back(lo + (hi - lo) * p / (points - 1));
    }
    g.axes.assign(u(q), axis);
    return g;
}

std::size_t Grid::size() const
{
    std::size_t s = 1;
    for (const auto &a : axes) {
        s *= a.size();
    }
    return s;
}

std::vector<double> Grid::point(std::size_t index) const
{
    std::vector<double> x(axes.size());
    for (std::size_t l = axes.size(); l-- > 0;) {
        x[l] = axes[l][index % axes[l].size()];
        index /= axes[l].size();
    }
    return x;
}

namespace
{

std::string location(const std::vector<double> &x)
{
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (std::size_t l = 0; l < x.size(); ++l) {
        os << (l ? ", " : "") << x[l];
    }
    os << ")";
    return os.str();
}

struct FirstOrder {
    int q;
    int m;
    // field[l][c]: d u_c / d x_l
    std::vector<std::vector<RealFunction>> field;
};

FirstOrder compile(const CompleteSystem &R)
{
    FirstOrder F{R.q, R.m, {}};
    auto slot = [&](const ExprNode &n) -> int {
        if (auto ref = jet_reference(n, R.q, R.m)) {
            return ref->first;
        }
        if (n.kind == ExprNode::Kind::Var) {
            const int a = axis_of(n.name, R.q);
            return a < 0 ? -1 : R.m + a;
        }
        return -1;
    };
    for (int l = 0; l < R.q; ++l) {
        std::vector<RealFunction> row;
        for (int c = 0; c < R.m; ++c) {
            row.push_back(compile_real(R.rhs.at({c, MultiIndex::unit(R.q, l)}), slot));
        }
        F.field.push_back(std::move(row));
    }
    return F;
}

void derivative(const FirstOrder &F, int l, const std::vector<double> &x, const std::vector<double> &state,
                std::vector<double> &out, std::vector<double> &buf)
{
    std::copy(state.begin(), state.end(), buf.begin());
    std::copy(x.begin(), x.end(), buf.begin() + F.m);
    for (int c = 0; c < F.m; ++c) {
        out[u(c)] = F.field[u(l)][u(c)](buf.data());
    }
}

// March u along axis l from x[l] to target with at most step-sized RK4 steps.
void march(const FirstOrder &F, int l, std::vector<double> &x, std::vector<double> &state, double target, double step)
{
    const double dist = target - x[u(l)];
    if (dist == 0) {
        return;
    }
    const long n = std::max(1L, static_cast<long>(std::ceil(std::fabs(dist) / step - 1e-9)));
    const double h = dist / static_cast<double>(n);
    const double x0 = x[u(l)];
    const std::size_t m = state.size();
    std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m), buf(m + x.size());
    for (long s = 0; s < n; ++s) {
        const double t = x0 + h * static_cast<double>(s);
        x[u(l)] = t;
        derivative(F, l, x, state, k1, buf);
        for (std::size_t c = 0; c < m; ++c) {
            tmp[c] = state[c] + 0.5 * h * k1[c];
        }
        x[u(l)] = t + 0.5 * h;
        derivative(F, l, x, tmp, k2, buf);
        for (std::size_t c = 0; c < m; ++c) {
            tmp[c] = state[c] + 0.5 * h * k2[c];
        }
        derivative(F, l, x, tmp, k3, buf);
        for (std::size_t c = 0; c < m; ++c) {
            tmp[c] = state[c] + h * k3[c];
        }
        x[u(l)] = x0 + h * static_cast<double>(s + 1);
        derivative(F, l, x, tmp, k4, buf);
        for (std::size_t c = 0; c < m; ++c) {
            state[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            if (!std::isfinite(state[c])) {
                throw Error("non-finite value at " + location(x));
            }
        }
    }
    x[u(l)] = target;
}

} // namespace

ReconstructionResult integrate(const CompleteSystem &S, const JetVector &lambda0, const Grid &grid, double step)
{
    if (!(step > 0)) {
        throw Error("step must be positive");
    }
    const CompleteSystem R = reduce_to_first_order(S);
    const JetVector u0 = reduce_jet(lambda0, S);
    if (static_cast<int>(grid.axes.size()) != S.q) {
        throw Error("grid dimension differs from q");
    }
    for (int l = 0; l < S.q; ++l) {
        for (double t : grid.axes[u(l)]) {
            if (t < S.box[u(l)].first || t > S.box[u(l)].second) {
                std::vector<double> x(u(S.q), 0.0);
                x[u(l)] = t;
                throw Error("grid leaves the box of the right-hand side on axis x" + std::to_string(l + 1) + " at " +
                            location(x));
            }
        }
    }
    const FirstOrder F = compile(R);
    std::vector<double> state;
    for (int c = 0; c < R.m; ++c) {
        state.push_back(u0.at(c, MultiIndex::zero(S.q)).get_d());
    }
    std::vector<std::pair<std::vector<double>, std::vector<double>>> current{{std::vector<double>(u(S.q), 0.0), state}};
    for (int l = 0; l < S.q; ++l) {
        std::vector<std::pair<std::vector<double>, std::vector<double>>> next;
        const auto &targets = grid.axes[u(l)];
        // Order of visits: nonnegative targets ascending, then negative ones descending.
        std::vector<std::size_t> order(targets.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ta = targets[a], tb = targets[b];
            if ((ta >= 0) != (tb >= 0)) {
                return ta >= 0;
            }
            return ta >= 0 ? ta < tb : ta > tb;
        });
        for (const auto &[x0, st0] : current) {
            std::vector<std::vector<double>> reached(targets.size());
            std::vector<double> x = x0, st = st0;
            bool negative = false;
            for (std::size_t i : order) {
                if (!negative && targets[i] < 0) {
                    negative = true;
                    x = x0;
                    st = st0;
                }
                march(F, l, x, st, targets[i], step);
                reached[i] = st;
            }
            for (std::size_t i = 0; i < targets.size(); ++i) {
                std::vector<double> xp = x0;
                xp[u(l)] = targets[i];
                next.emplace_back(std::move(xp), std::move(reached[i]));
            }
        }
        current = std::move(next);
    }
    ReconstructionResult r;
    r.grid = grid;
    r.step = step;
    const int nb = static_cast<int>(jet_multi_indices(S.q, S.k).size());
    for (const auto &[x, st] : current) {
        std::vector<double> v;
        for (int j = 0; j < S.m; ++j) {
            v.push_back(st[u(j * nb)]);
        }
        r.values.push_back(std::move(v));
    }
    return r;
}

double max_deviation(const ReconstructionResult &r,
                     const std::function<std::vector<double>(const std::vector<double> &)> &reference)
{
    double err = 0;
    for (std::size_t p = 0; p < r.values.size(); ++p) {
        const auto ref = reference(r.grid.point(p));
        for (std::size_t j = 0; j < ref.size(); ++j) {
            err = std::max(err, std::fabs(ref[j] - r.values[p][j]));
        }
    }
    return err;
}

TaylorResult taylor_propagate(const CompleteSystem &S, const JetVector &lambda0, int target_order)
{
    S.validate();
    if (lambda0.q() != S.q || lambda0.m() != S.m || lambda0.k() < S.k) {
        throw Error("initial jet does not match the system");
    }
    if (target_order < S.k) {
        throw Error("target order below the system order");
    }
    TaylorResult res;
    JetVector J = lambda0.truncated(S.k);
    for (int r = S.k; r < target_order; ++r) {
        const auto F = J.to_series();
        SeriesContext ctx;
        ctx.nvars = S.q;
        ctx.order = r;
        ctx.variable = [&](const std::string &name) -> std::optional<TruncatedSeries> {
            const int a = axis_of(name, S.q);
            if (a >= 0) {
                return TruncatedSeries::variable(S.q, r, a);
            }
            const int i = component_of(name, S.m);
            if (i >= 0) {
                return F[u(i)];
            }
            return std::nullopt;
        };
        ctx.call = [&](const ExprNode &n) -> std::optional<TruncatedSeries> {
            if (auto ref = jet_reference(n, S.q, S.m)) {
                return derive_multi(F[u(ref->first)], ref->second);
            }
            return std::nullopt;
        };
        std::map<JetKey, TruncatedSeries> R;
        for (const auto &[key, e] : S.rhs) {
            R.emplace(key, to_series(e, ctx));
        }
        JetVector next(S.q, S.m, r + 1);
        for (const auto &[i, b] : J.keys()) {
            next.set(i, b, J.at(i, b));
        }
        for (int j = 0; j < S.m; ++j) {
            for (const auto &g : of_degree(S.q, r + 1)) {
                std::optional<Rational> value;
                for (const auto &a : of_degree(S.q, S.k + 1)) {
                    if (!leq(a, g)) {
                        continue;
                    }
                    const MultiIndex rest = minus(g, a);
                    const CScalar c = R.at({j, a}).coeff(rest);
                    if (!c.is_real()) {
                        throw Error("complex value while propagating a real system");
                    }
                    Rational v = c.re() * factorial(rest);
                    v.canonicalize();
                    if (!value) {
                        value = v;
                        continue;
                    }
                    ++res.consistency_checks;
                    if (*value != v) {
                        throw Error("system is not integrable at this jet: " + jet_reference_name(j, g) + " is " +
                                    to_string(*value) + " along one path and " + to_string(v) + " along another");
                    }
                }
                next.set(j, g, *value);
            }
        }
        J = std::move(next);
    }
    res.jet = std::move(J);
    return res;
}

std::vector<TruncatedSeries> ambient_jet(const std::vector<TruncatedSeries> &F, int k)
{
    std::vector<TruncatedSeries> out;
    for (const auto &f : F) {
        if (f.order() < k) {
            throw OrderExhausted("map known only through order " + std::to_string(f.order()));
        }
        out.push_back(f.truncated(k));
    }
    return out;
}

InjectivityReport jet_injectivity_demo(const std::vector<FamilyMember> &family, int jet_order, int full_order)
{
    InjectivityReport rep;
    rep.jet_order = jet_order;
    rep.full_order = full_order;
    std::vector<std::vector<TruncatedSeries>> jets, maps;
    for (const auto &m : family) {
        jets.push_back(ambient_jet(m.components, jet_order));
        maps.push_back(ambient_jet(m.components, full_order));
    }
    for (std::size_t a = 0; a < family.size(); ++a) {
        for (std::size_t b = a + 1; b < family.size(); ++b) {
            ++rep.pairs;
            const bool same_params = family[a].parameters == family[b].parameters;
            const bool same_jet = jets[a] == jets[b];
            const std::string pair = family[a].label + " / " + family[b].label;
            if (!same_params) {
                ++rep.distinct_parameter_pairs;
            }
            if (same_jet) {
                ++rep.equal_jet_pairs;
                if (maps[a] == maps[b]) {
                    ++rep.equal_jet_equal_map_pairs;
                } else {
                    rep.counterexamples.push_back(pair + ": equal jets but different maps");
                }
                if (!same_params) {
                    rep.counterexamples.push_back(pair + ": distinct parameters with equal jets");
                }
            } else {
                ++rep.distinct_jet_pairs;
                if (same_params) {
                    rep.counterexamples.push_back(pair + ": equal parameters with different jets");
                }
            }
        }
    }
    return rep;
}

} // namespace crjet
