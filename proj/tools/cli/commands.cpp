#include "commands.hpp"

#include <cstdlib>
#include <sstream>

#include <crjet/aut_dim.hpp>
#include <crjet/invariants.hpp>
#include <crjet/mappings.hpp>

namespace crjet::cli
{

using nlohmann::json;

namespace
{

std::size_t u(int i) { return static_cast<std::size_t>(i); }

json bounded(const Bounded &b)
{
    if (b.finite()) {
        return *b.value;
    }
    return b.to_string();
}

json identity_json(const IdentityReport &r)
{
    json v = json::array();
    for (const auto &x : r.violations) {
        v.push_back({{"label", x.label}, {"residual", x.residual}});
    }
    return {{"name", r.name},   {"vacuous", r.vacuous}, {"note", r.note},        {"checked", r.checked},
            {"order", r.order}, {"violations", v},      {"passed", r.passed()}};
}

json certificate_json(const CommutatorCertificate &c, const std::vector<std::string> &names)
{
    json coeffs = json::object();
    for (const auto &[label, s] : c.coefficients) {
        coeffs[label] = s.to_string(names);
    }
    return {{"target", c.target},
            {"base", c.base},
            {"weight", c.weight},
            {"coefficients", coeffs},
            {"checked_degree", c.checked_degree},
            {"verified", c.verified},
            {"mismatch", c.mismatch}};
}

std::vector<std::string> axis_names(int q)
{
    std::vector<std::string> v;
    for (int a = 1; a <= q; ++a) {
        v.push_back("x" + std::to_string(a));
    }
    return v;
}

json header(const std::string &command)
{
    return {{"schema_version", kSchemaVersion}, {"command", command}};
}

struct Analysis {
    int N = 0;
    int order = 0;
    FiltrationBounds bounds;
    Hypersurface M;
    Frame F;
};

Analysis prepare(const InputDocument &doc, std::optional<int> kmax, std::optional<int> order_flag)
{
    if (doc.kind != "hypersurface") {
        throw Error("expected a hypersurface document, got " + doc.kind);
    }
    Analysis a;
    a.N = integer(doc, "N", 0);
    a.bounds = FiltrationBounds::defaults(a.N);
    if (kmax) {
        if (*kmax < 1) {
            throw Error("kmax must be positive");
        }
        a.bounds.kmax = *kmax;
        a.bounds.lmax = a.bounds.typemax = *kmax + 1;
    }
    a.order = resolve_order(order_flag, document_order(doc), 2 * (a.bounds.kmax + 2));
    const auto in = hypersurface_input(doc, a.order);
    a.M = from_defining(in.rho, in.N);
    a.F = build_frame(a.M);
    return a;
}

std::vector<ScanPoint> grid_points(int n, const ScanGrid &g)
{
    std::vector<Rational> axis;
    for (int p = 0; p < g.points; ++p) {
        Rational x = g.lo + (g.hi - g.lo) * make_rational(p, g.points - 1);
        x.canonicalize();
        axis.push_back(x);
    }
    // Re z_1, Im z_1, ..., Re z_n, Im z_n; the last coordinate varies fastest.
    std::vector<ScanPoint> out;
    std::vector<int> idx(u(2 * n), 0);
    while (true) {
        ScanPoint p;
        for (int j = 0; j < n; ++j) {
            p.z.emplace_back(axis[u(idx[u(2 * j)])], axis[u(idx[u(2 * j + 1)])]);
        }
        p.s = 0;
        out.push_back(std::move(p));
        int k = 2 * n - 1;
        while (k >= 0 && ++idx[u(k)] == g.points) {
            idx[u(k)] = 0;
            --k;
        }
        if (k < 0) {
            return out;
        }
    }
}

json scan_json(const Hypersurface &M, const ScanGrid &g, int kmax, int threads)
{
    const auto results = nondegeneracy_scan(M, grid_points(M.N - 1, g), kmax, threads);
    json pts = json::array();
    int nondeg = 0;
    for (const auto &r : results) {
        json z = json::array();
        for (const auto &c : r.point.z) {
            z.push_back(c.to_string());
        }
        pts.push_back({{"z", z}, {"s", to_string(r.point.s)}, {"t", to_string(r.t)}, {"k0", bounded(r.k0)},
                       {"nondegenerate", r.nondegenerate}});
        nondeg += r.nondegenerate ? 1 : 0;
    }
    return {{"grid", {{"lo", to_string(g.lo)}, {"hi", to_string(g.hi)}, {"points", g.points}}},
            {"kmax", kmax},
            {"samples", pts},
            {"nondegenerate_count", nondeg},
            {"sample_count", static_cast<int>(results.size())}};
}

void render(std::ostringstream &os, const json &j, int indent)
{
    const std::string pad(u(indent), ' ');
    auto scalar = [](const json &v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    auto inline_array = [&](const json &a) {
        std::string s = "[";
        for (std::size_t i = 0; i < a.size(); ++i) {
            s += (i ? ", " : "") + scalar(a[i]);
        }
        return s + "]";
    };
    for (const auto &[key, v] : j.items()) {
        if (v.is_object()) {
            if (v.empty()) {
                os << pad << key << ": {}\n";
                continue;
            }
            os << pad << key << ":\n";
            render(os, v, indent + 2);
        } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const json &x) { return x.is_structured() || x.is_string(); })) {
            os << pad << key << ":\n";
            for (const auto &x : v) {
                if (x.is_object()) {
                    os << pad << "  -\n";
                    render(os, x, indent + 4);
                } else {
                    os << pad << "  - " << (x.is_array() ? inline_array(x) : scalar(x)) << "\n";
                }
            }
        } else if (v.is_array()) {
            os << pad << key << ": " << inline_array(v) << "\n";
        } else {
            os << pad << key << ": " << scalar(v) << "\n";
        }
    }
}

std::string canonical_identity(const std::string &name)
{
    if (name == "l1.13") {
        return "h-recursion";
    }
    if (name == "l1.18") {
        return "h-shift";
    }
    if (name == "p1.24") {
        return "bracket-values";
    }
    if (name == "p3.18k1") {
        return "commutator";
    }
    return name;
}

bool same(const TruncatedSeries &a, const TruncatedSeries &b)
{
    const int o = std::min(a.order(), b.order());
    return a.truncated(o) == b.truncated(o);
}

} // namespace

std::string render_text(const json &j)
{
    std::ostringstream os;
    render(os, j, 0);
    return os.str();
}

std::string render_json(const json &j)
{
    return j.dump(2) + "\n";
}

int resolve_order(std::optional<int> flag, int document, int fallback)
{
    int order = fallback;
    if (flag) {
        order = *flag;
    } else if (document > 0) {
        order = document;
    } else if (const char *env = std::getenv("CRJET_ORDER"); env && *env) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0') {
            throw Error(std::string("CRJET_ORDER is not an integer: ") + env);
        }
        order = static_cast<int>(v);
    }
    if (order < 1 || order > TruncatedSeries::kMaxOrder) {
        throw Error("truncation order must be between 1 and " + std::to_string(TruncatedSeries::kMaxOrder));
    }
    return order;
}

ScanGrid ScanGrid::parse(const std::string &text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ',')) {
        parts.push_back(p);
    }
    if (parts.size() != 3) {
        throw Error("grid must be lo,hi,points");
    }
    ScanGrid g;
    g.lo = parse_rational(parts[0]);
    g.hi = parse_rational(parts[1]);
    try {
        g.points = std::stoi(parts[2]);
    } catch (const std::exception &) {
        throw Error("grid point count must be an integer");
    }
    if (g.points < 2 || g.points > 1000 || !(g.lo < g.hi)) {
        throw Error("grid needs lo < hi and 2 <= points <= 1000");
    }
    return g;
}

Report analyze(const InputDocument &doc, const AnalyzeOptions &opt)
{
    const Analysis a = prepare(doc, opt.kmax, opt.order);
    const auto ext = extrinsic_k0(a.M, a.bounds.kmax);
    const auto rep = intrinsic_filtration(a.F, a.bounds);
    Report r;
    r.body = header("analyze");
    r.body["input"] = {{"N", a.N}, {"order", a.order}, {"kmax", a.bounds.kmax}, {"lmax", a.bounds.lmax},
                       {"typemax", a.bounds.typemax}};
    r.body["extrinsic"] = {{"k0", bounded(ext.k0)}, {"span_dims", ext.span_dims}};
    json witness = nullptr;
    if (rep.ell0_witness) {
        witness = {{"tuple", tuple_label(rep.ell0_witness->first, true)}, {"D", rep.ell0_witness->second + 1}};
    }
    r.body["intrinsic"] = {{"Ek_dims", rep.Ek_dims}, {"Fk_dims", rep.Fk_dims}, {"rk", rep.rk},
                           {"k0", bounded(rep.k0)},  {"levi_rank", rep.levi_rank},
                           {"ell0", bounded(rep.ell0)}, {"ell0_witness", witness},
                           {"ell1", bounded(rep.ell1)}, {"type", bounded(rep.type)}};
    const bool k0_agree = ext.k0 == rep.k0;
    const bool ell_agree = rep.ell0 == rep.ell1;
    r.body["checks"] = {{"k0_extrinsic_equals_intrinsic", k0_agree}, {"ell0_equals_ell1", ell_agree}};
    r.passed = k0_agree && ell_agree;
    if (opt.scan) {
        r.body["scan"] = scan_json(a.M, *opt.scan, a.bounds.kmax, opt.threads);
    }
    r.body["passed"] = r.passed;
    return r;
}

Report verify(const InputDocument &doc, const VerifyOptions &opt)
{
    const std::string id = canonical_identity(opt.identity);
    const Analysis a = prepare(doc, opt.kmax, opt.order);
    Report r;
    r.body = header("verify");
    r.body["input"] = {{"N", a.N}, {"order", a.order}, {"kmax", a.bounds.kmax}};
    r.body["identity"] = id;
    if (id == "frame") {
        const auto rep = verify_frame(a.F);
        r.body["report"] = identity_json(rep);
        r.passed = rep.passed();
    } else if (id == "h-recursion") {
        const auto rep = verify_h_recursion(a.F, a.bounds.lmax);
        r.body["report"] = identity_json(rep);
        r.passed = rep.passed();
    } else if (id == "h-shift" || id == "bracket-values") {
        const auto filt = intrinsic_filtration(a.F, a.bounds);
        const auto rep =
            id == "h-shift" ? verify_h_shift(a.F, filt.ell0) : verify_bracket_values(a.F, filt, a.bounds.lmax);
        r.body["report"] = identity_json(rep);
        r.body["ell0"] = bounded(filt.ell0);
        r.passed = rep.passed();
    } else if (id == "commutator") {
        IndexTuple E;
        for (int e : opt.E) {
            if (e < 1 || e > a.F.n) {
                throw Error("index " + std::to_string(e) + " outside 1.." + std::to_string(a.F.n));
            }
            E.push_back(e - 1);
        }
        if (opt.F < 1 || opt.F > a.F.n) {
            throw Error("index " + std::to_string(opt.F) + " outside 1.." + std::to_string(a.F.n));
        }
        const auto rep = commutator_certificates(a.F, E, opt.F - 1, opt.check_degree);
        const auto names = a.F.layout().names();
        r.body["report"] = {{"commutator_form", certificate_json(rep.commutator_form, names)},
                            {"weighted_form", certificate_json(rep.weighted_form, names)}};
        r.passed = rep.commutator_form.verified && rep.weighted_form.verified;
    } else {
        throw Error("unknown identity '" + opt.identity +
                    "' (frame, h-recursion, h-shift, bracket-values, commutator)");
    }
    r.body["passed"] = r.passed;
    return r;
}

Report reflect(const InputDocument &source, const InputDocument &target, const InputDocument &map,
               const ReflectOptions &opt)
{
    if (source.kind != "hypersurface" || target.kind != "hypersurface" || map.kind != "map") {
        throw Error("reflect needs two hypersurface documents and a map document");
    }
    const int N = integer(source, "N", 0);
    if (integer(target, "N", 0) != N || map_dimension(map) != N) {
        throw Error("source, target and map must share N");
    }
    const int order = resolve_order(opt.order, document_order(map), 2 * (N + 1));
    const auto src = hypersurface_input(source, order);
    const auto tgt = hypersurface_input(target, order);
    const CRMap m = make_map(src.rho, tgt.rho, N, map_input(map, order));
    const IntrinsicMap f = restrict(m);
    const Frame S = build_frame(m.source);
    const Frame T = build_frame(m.target);
    const PushforwardData P = pushforward_data(f, S, T);
    Report r;
    r.body = header("reflect");
    const auto names = S.layout().names();
    json gamma0 = json::array();
    for (const auto &row : P.gamma) {
        json jr = json::array();
        for (const auto &g : row) {
            jr.push_back(g.constant_term().to_string());
        }
        gamma0.push_back(jr);
    }
    r.body["input"] = {{"N", N}, {"order", order}};
    r.body["pushforward"] = {{"order", P.order()}, {"xi_at_0", P.xi.constant_term().to_string()}, {"gamma_at_0", gamma0}};
    json reports = json::array();
    bool ok = true;
    const auto base = verify_reflection_base(P, f, S, T);
    reports.push_back(identity_json(base));
    ok = ok && base.passed();
    const int depth = opt.depth.value_or(std::min(2, P.order() - 2));
    for (int k = 0; k <= depth; ++k) {
        const auto rep = verify_reflection_derivatives(P, f, S, T, k);
        json jr = identity_json(rep);
        jr["depth"] = k;
        reports.push_back(jr);
        ok = ok && rep.passed();
    }
    r.body["identities"] = reports;
    try {
        const auto lr = solve_levi_reflection(P.xi, conjugate_matrix(P.gamma, S.layout()), f, S, T);
        bool gamma_ok = true, eta_ok = true;
        for (int A = 0; A < S.n; ++A) {
            for (int B = 0; B < S.n; ++B) {
                gamma_ok = gamma_ok && same(lr.gamma[u(A)][u(B)], P.gamma[u(A)][u(B)]);
            }
            eta_ok = eta_ok && same(lr.eta[u(A)], P.eta[u(A)]);
        }
        r.body["levi_reconstruction"] = {{"available", true}, {"gamma_matches", gamma_ok}, {"eta_matches", eta_ok}};
        ok = ok && gamma_ok && eta_ok;
    } catch (const Error &e) {
        r.body["levi_reconstruction"] = {{"available", false}, {"note", e.what()}};
    }
    r.passed = ok;
    r.body["passed"] = ok;
    return r;
}

Report reconstruct(const InputDocument &system, const InputDocument &jet, const ReconstructOptions &opt)
{
    if (system.kind != "system" || jet.kind != "jet") {
        throw Error("reconstruct needs a system document and a jet document");
    }
    const CompleteSystem S = system_input(system);
    const JetVector J = jet_input(jet);
    Grid grid;
    if (opt.grid) {
        grid = Grid::uniform(S.q, opt.grid->lo.get_d(), opt.grid->hi.get_d(), opt.grid->points);
    } else {
        for (int l = 0; l < S.q; ++l) {
            grid.axes.push_back(Grid::uniform(1, S.box[u(l)].first, S.box[u(l)].second, 5).axes[0]);
        }
    }
    Report r;
    r.body = header("reconstruct");
    r.body["input"] = {{"q", S.q}, {"m", S.m}, {"k", S.k}, {"step", opt.step}};
    const auto R = reduce_to_first_order(S);
    r.body["first_order_components"] = R.m;
    const auto res = integrate(S, J, grid, opt.step);
    json samples = json::array();
    for (std::size_t p = 0; p < res.values.size(); ++p) {
        samples.push_back({{"x", grid.point(p)}, {"f", res.values[p]}});
    }
    r.body["grid"] = {{"axes", grid.axes}, {"samples", samples}};
    const int target = opt.taylor_order.value_or(S.k + 3);
    try {
        const auto T = taylor_propagate(S, J, target);
        json comps = json::object();
        const auto names = axis_names(S.q);
        const auto series = T.jet.to_series();
        for (int j = 0; j < S.m; ++j) {
            comps["f" + std::to_string(j + 1)] = series[u(j)].to_string(names);
        }
        r.body["taylor"] = {{"available", true}, {"order", target}, {"consistency_checks", T.consistency_checks},
                            {"components", comps}};
    } catch (const ParseError &e) {
        r.body["taylor"] = {{"available", false}, {"note", e.what()}};
    } catch (const Error &e) {
        r.body["taylor"] = {{"available", true}, {"integrable", false}, {"note", e.what()}};
        r.passed = false;
    }
    r.body["passed"] = r.passed;
    return r;
}

Report aut(const InputDocument &doc, const AutOptions &opt)
{
    if (doc.kind != "hypersurface") {
        throw Error("expected a hypersurface document, got " + doc.kind);
    }
    const int N = integer(doc, "N", 0);
    const FiltrationBounds b = FiltrationBounds::defaults(N);
    const int order = resolve_order(opt.order, document_order(doc), std::max(2 * (b.kmax + 2), opt.degree + 6));
    const auto in = hypersurface_input(doc, order);
    const Hypersurface M = from_defining(in.rho, N);
    const auto sys = infinitesimal_aut_dim(M, opt.degree, order);
    const mpz_class bound = aut_bound(N);
    const auto ext = extrinsic_k0(M, std::min(b.kmax, order - 1));
    Report r;
    r.body = header("aut");
    json basis = json::array();
    for (const auto &Y : sys.basis) {
        basis.push_back(Y.to_string());
    }
    const bool within = sys.solution_dim <= bound;
    r.body["input"] = {{"N", N}, {"order", order}, {"degree", opt.degree}};
    r.body["tangency"] = {{"condition", sys.condition},   {"degree_kind", sys.degree_kind},
                          {"unknowns", sys.unknowns},     {"equations", sys.equations},
                          {"solution_dim", sys.solution_dim}, {"checked_through", sys.checked_through},
                          {"basis_verified", sys.basis_verified}, {"basis", basis}};
    r.body["bound"] = {{"value", bound.get_si()},
                       {"k0", bounded(ext.k0)},
                       {"applies", ext.k0.finite()},
                       {"satisfied", within}};
    r.passed = sys.basis_verified && (!ext.k0.finite() || within);
    if (opt.holomorphic_degeneracy) {
        const auto h = holomorphic_degeneracy_test(M, opt.degree, order);
        r.body["holomorphic_degeneracy"] = {{"condition", h.condition},
                                            {"unknowns", h.unknowns},
                                            {"solution_dim", h.solution_dim},
                                            {"basis_verified", h.basis_verified},
                                            {"degenerate_evidence", h.solution_dim > 0}};
        r.passed = r.passed && h.basis_verified;
    }
    r.body["passed"] = r.passed;
    return r;
}

Report scan(const InputDocument &doc, const ScanOptions &opt)
{
    const Analysis a = prepare(doc, opt.kmax, opt.order);
    Report r;
    r.body = header("scan");
    r.body["input"] = {{"N", a.N}, {"order", a.order}};
    r.body["scan"] = scan_json(a.M, opt.grid, a.bounds.kmax, opt.threads);
    r.body["passed"] = true;
    return r;
}

} // namespace crjet::cli
