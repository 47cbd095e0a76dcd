// Prints one PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <crjet/aut_dim.hpp>
#include <crjet/invariants.hpp>
#include <crjet/jet_systems.hpp>
#include <crjet/mappings.hpp>
#include <crjet/models.hpp>

#include "cli/commands.hpp"

using namespace crjet;
using namespace crjet::cli;
using nlohmann::json;
namespace hm = crjet::heisenberg_maps;

namespace
{

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &what)
    {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

InputDocument doc(const std::string &text) { return parse_document(text); }

const char *kHeis2 = "kind = hypersurface\nN = 2\nrho = Im(w) - z1*conj(z1)\n";
const char *kHeis3 = "kind = hypersurface\nN = 3\nrho = Im(w) - z1*conj(z1) - z2*conj(z2)\n";
const char *kM3 = "kind = hypersurface\nN = 3\nrho = Im(w) - z1*conj(z1) - 1/2*(z1^2*conj(z2) + conj(z1)^2*z2)\n";
const char *kM2 = "kind = hypersurface\nN = 2\nrho = Im(w) - (z1*conj(z1))^2\n";
const char *kTube = "kind = hypersurface\nN = 3\nrho = Im(w) - z1*conj(z1)\n";

Outcome heisenberg()
{
    Outcome o;
    for (const auto &[text, n] : {std::pair{kHeis2, 1}, std::pair{kHeis3, 2}}) {
        const auto r = analyze(doc(text), {});
        const json &in = r.body["intrinsic"];
        const std::string tag = "N = " + std::to_string(n + 1) + ": ";
        o.require(r.body["extrinsic"]["k0"] == 1, tag + "extrinsic k0 " + r.body["extrinsic"]["k0"].dump());
        o.require(in["k0"] == 1, tag + "intrinsic k0 " + in["k0"].dump());
        o.require(in["ell0"] == 1 && in["ell1"] == 1, tag + "ell0/ell1 " + in["ell0"].dump() + "/" + in["ell1"].dump());
        o.require(in["type"] == 2, tag + "type " + in["type"].dump());
        o.require(in["levi_rank"] == n, tag + "levi rank " + in["levi_rank"].dump());
        o.require(r.passed, tag + "cross checks");
    }
    return o;
}

Outcome m3()
{
    Outcome o;
    const auto r = analyze(doc(kM3), {});
    const json &in = r.body["intrinsic"];
    o.require(r.body["extrinsic"]["k0"] == 2 && in["k0"] == 2, "k0 " + r.body["extrinsic"]["k0"].dump() + "/" + in["k0"].dump());
    o.require(in["Ek_dims"].size() >= 3 && in["Ek_dims"][1] == 2 && in["Ek_dims"][2] == 3, "E_k dims " + in["Ek_dims"].dump());
    o.require(r.body["extrinsic"]["span_dims"] == in["Ek_dims"], "extrinsic spans differ from E_k dims");
    o.require(r.passed, "cross checks");
    return o;
}

Outcome m2()
{
    Outcome o;
    AnalyzeOptions opt;
    opt.kmax = 6;
    const auto r = analyze(doc(kM2), opt);
    const json &in = r.body["intrinsic"];
    o.require(r.body["extrinsic"]["k0"] == "∞@kmax" && in["k0"] == "∞@kmax", "k0 " + in["k0"].dump());
    o.require(in["ell0"] == "∞@lmax" && in["ell1"] == "∞@lmax", "ell0/ell1 " + in["ell0"].dump() + "/" + in["ell1"].dump());
    o.require(in["type"] == 4, "type " + in["type"].dump());
    o.require(r.passed, "cross checks");
    return o;
}

Outcome identity_suites()
{
    Outcome o;
    const int order = 6;
    std::vector<std::pair<std::string, Hypersurface>> models{
        {"heisenberg2", from_defining(models::heisenberg_rho(2, order), 2)},
        {"m3", from_defining(models::m3_rho(order), 3)},
        {"m2", from_defining(models::m2_rho(order), 2)}};
    // Half of the random models have no quadratic part so the h-shift suite is not vacuous.
    for (int seed = 1; seed <= 20; ++seed) {
        const int N = seed % 2 == 0 ? 2 : 3;
        const int min_degree = seed > 10 ? 3 : 2;
        models.emplace_back("random " + std::to_string(seed),
                            models::random_hypersurface(static_cast<std::uint64_t>(seed), N, order, 4, min_degree));
    }
    int checks = 0, nonvacuous_shift = 0;
    for (const auto &[name, M] : models) {
        const Frame F = build_frame(M);
        const auto bounds = FiltrationBounds::defaults(M.N);
        const auto filt = intrinsic_filtration(F, bounds);
        for (const auto &rep : {verify_frame(F), verify_h_recursion(F, 2), verify_h_shift(F, filt.ell0),
                                verify_bracket_values(F, filt, bounds.lmax)}) {
            o.require(rep.passed(), name + " " + rep.name + ": " +
                                        (rep.violations.empty() ? "" : rep.violations[0].label + " = " + rep.violations[0].residual));
            checks += rep.checked;
            if (rep.name == "h-shift" && !rep.vacuous) {
                ++nonvacuous_shift;
            }
        }
    }
    o.require(nonvacuous_shift >= 5, "h-shift suite vacuous on all but " + std::to_string(nonvacuous_shift) + " models");
    if (o.ok) {
        o.detail = std::to_string(models.size()) + " models, " + std::to_string(checks) + " exact checks, " +
                   std::to_string(nonvacuous_shift) + " non-vacuous h-shift suites";
    }
    return o;
}

Outcome reflection()
{
    Outcome o;
    const int order = 6;
    const CScalar I = CScalar::i();
    const DenseMatrix<CScalar> rot3{{CScalar(Rational(3, 5)), -(CScalar(Rational(4, 5)) * I)},
                                    {CScalar(Rational(4, 5)), CScalar(Rational(3, 5)) * I}};
    const auto rot2 = hm::rotation(2, order, {{CScalar(Rational(3, 5), Rational(4, 5))}});
    std::vector<std::tuple<std::string, int, std::vector<TruncatedSeries>>> maps{
        {"tau 1/2", 2, hm::translation(2, order, {CScalar(Rational(1, 2))})},
        {"tau i/3", 2, hm::translation(2, order, {CScalar(Rational(0), Rational(1, 3))})},
        {"dilation 2", 2, hm::dilation(2, order, Rational(2))},
        {"dilation 1/2", 2, hm::dilation(2, order, Rational(1, 2))},
        {"rotation", 2, rot2},
        {"rotation o tau 1/2", 2, compose_ambient(rot2, hm::translation(2, order, {CScalar(Rational(1, 2))}))},
        {"dilation 2 o tau i/3", 2,
         compose_ambient(hm::dilation(2, order, Rational(2)), hm::translation(2, order, {CScalar(Rational(0), Rational(1, 3))}))},
        {"rotation C3", 3, hm::rotation(3, order, rot3)},
        {"dilation 1/2 o rotation o tau C3", 3,
         compose_ambient(hm::dilation(3, order, Rational(1, 2)),
                         compose_ambient(hm::rotation(3, order, rot3),
                                         hm::translation(3, order, {CScalar(Rational(1, 2)), CScalar(Rational(0), Rational(1, 3))})))},
    };
    int checks = 0;
    for (const auto &[name, N, F] : maps) {
        const auto rho = models::heisenberg_rho(N, order);
        const CRMap m = make_map(rho, rho, N, F);
        const IntrinsicMap f = restrict(m);
        const Frame S = build_frame(m.source), T = build_frame(m.target);
        const auto P = pushforward_data(f, S, T);
        std::vector<IdentityReport> reps{verify_reflection_base(P, f, S, T)};
        for (int k = 0; k <= 2; ++k) {
            reps.push_back(verify_reflection_derivatives(P, f, S, T, k));
        }
        for (const auto &r : reps) {
            o.require(r.passed(), name + " " + r.name);
            checks += r.checked;
        }
        const auto lr = solve_levi_reflection(P.xi, conjugate_matrix(P.gamma, S.layout()), f, S, T);
        for (int A = 0; A < S.n; ++A) {
            for (int B = 0; B < S.n; ++B) {
                const auto &x = lr.gamma[static_cast<std::size_t>(A)][static_cast<std::size_t>(B)];
                const auto &y = P.gamma[static_cast<std::size_t>(A)][static_cast<std::size_t>(B)];
                const int oo = std::min(x.order(), y.order());
                o.require(x.truncated(oo) == y.truncated(oo), name + ": gamma reconstruction");
            }
            const auto &x = lr.eta[static_cast<std::size_t>(A)];
            const auto &y = P.eta[static_cast<std::size_t>(A)];
            const int oo = std::min(x.order(), y.order());
            o.require(x.truncated(oo) == y.truncated(oo), name + ": eta reconstruction");
        }
    }
    if (o.ok) {
        o.detail = std::to_string(maps.size()) + " maps, " + std::to_string(checks) + " exact checks";
    }
    return o;
}

Outcome commutators()
{
    Outcome o;
    const Frame F = build_frame(from_defining(models::heisenberg_rho(2, 10), 2));
    for (int m : {2, 3}) {
        const auto rep = commutator_certificates(F, IndexTuple(static_cast<std::size_t>(m), 0), 0, 5);
        for (const auto *c : {&rep.commutator_form, &rep.weighted_form}) {
            o.require(c->verified && c->checked_degree == 5,
                      "m = " + std::to_string(m) + " " + c->target + ": " + c->mismatch + " (degree " +
                          std::to_string(c->checked_degree) + ")");
        }
    }
    return o;
}

CompleteSystem system(int q, int k, const std::vector<std::pair<JetKey, std::string>> &rhs)
{
    CompleteSystem S;
    S.q = q;
    S.m = 1;
    S.k = k;
    S.box.assign(static_cast<std::size_t>(q), {0.0, 1.0});
    for (const auto &[key, text] : rhs) {
        S.rhs.emplace(key, parse_expression(text));
    }
    S.validate();
    return S;
}

Outcome integrator()
{
    Outcome o;
    const double step = 1e-4;
    auto mi = [](std::vector<int> e) { return MultiIndex(std::move(e)); };
    const auto exp1 = system(1, 0, {{{0, mi({1})}, "f1"}});
    const auto lin = system(1, 1, {{{0, mi({2})}, "0"}});
    const auto exp2 = system(2, 0, {{{0, mi({1, 0})}, "f1"}, {{0, mi({0, 1})}, "2*f1"}});
    JetVector j1(1, 1, 0), jl(1, 1, 1), j2(2, 1, 0);
    j1.set(0, mi({0}), Rational(1));
    jl.set(0, mi({0}), Rational(1));
    jl.set(0, mi({1}), Rational(2));
    j2.set(0, mi({0, 0}), Rational(1));
    double worst = 0;
    const auto r1 = integrate(exp1, j1, Grid::uniform(1, 0, 1, 11), step);
    worst = std::max(worst, max_deviation(r1, [](const std::vector<double> &x) { return std::vector<double>{std::exp(x[0])}; }));
    const auto rl = integrate(lin, jl, Grid::uniform(1, 0, 1, 11), step);
    worst = std::max(worst, max_deviation(rl, [](const std::vector<double> &x) { return std::vector<double>{1 + 2 * x[0]}; }));
    const auto r2 = integrate(exp2, j2, Grid::uniform(2, 0, 1, 11), step);
    worst = std::max(worst, max_deviation(r2, [](const std::vector<double> &x) {
                         return std::vector<double>{std::exp(x[0] + 2 * x[1])};
                     }));
    o.require(worst <= 1e-8, "max error " + std::to_string(worst));
    // Convergence under step halving at x = 1.
    Grid end;
    end.axes = {{1.0}};
    auto err = [&](double h) { return std::fabs(integrate(exp1, j1, end, h).values[0][0] - std::exp(1.0)); };
    const double e1 = err(0.1), e2 = err(0.05), e3 = err(0.025);
    const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
    o.require(std::fabs(p1 - 4) <= 0.2 && std::fabs(p2 - 4) <= 0.2,
              "observed orders " + std::to_string(p1) + ", " + std::to_string(p2));
    // Uniqueness: the same 1-jet reached through the exact solution's Taylor data.
    const int o6 = 6;
    const auto x = TruncatedSeries::variable(1, o6, 0);
    const auto same_jet = JetVector::from_series({TruncatedSeries::constant(1, o6, CScalar(1)) + x * CScalar(2)}, 1);
    const auto ru = integrate(lin, same_jet, Grid::uniform(1, 0, 1, 11), step);
    double diff = 0;
    for (std::size_t p = 0; p < ru.values.size(); ++p) {
        diff = std::max(diff, std::fabs(ru.values[p][0] - rl.values[p][0]));
    }
    o.require(same_jet == jl, "jets differ");
    o.require(diff <= 1e-8, "equal jets, grids differ by " + std::to_string(diff));
    if (o.ok) {
        std::ostringstream os;
        os.precision(3);
        os << "max error " << worst << ", orders " << p1 << " and " << p2;
        o.detail = os.str();
    }
    return o;
}

Outcome injectivity()
{
    Outcome o;
    const int order = 8;
    std::mt19937_64 rng(20261016);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto small = [&] {
        int den = pick(1, 4);
        return make_rational(pick(-3, 3), den);
    };
    const std::vector<CScalar> phases{CScalar(1), CScalar::i(), CScalar(Rational(3, 5), Rational(4, 5)),
                                      CScalar(Rational(5, 13), Rational(-12, 13)), CScalar(-1)};
    const std::vector<Rational> scales{Rational(1), Rational(2), Rational(3), Rational(1, 2), Rational(2, 3)};
    std::vector<FamilyMember> fam;
    // The identity twice, through two constructions with the same parameters.
    fam.push_back({"identity", {CScalar(1), CScalar(1), CScalar(0), CScalar(0)}, hm::dilation(2, order, Rational(1))});
    fam.push_back({"iso(0)", {CScalar(1), CScalar(1), CScalar(0), CScalar(0)}, hm::isotropy(2, order, {CScalar(0)})});
    // dilation(lambda) o rotation(u) o isotropy(a) o vertical(r)
    while (fam.size() < 10) {
        const Rational lambda = scales[static_cast<std::size_t>(pick(0, 4))];
        const CScalar u = phases[static_cast<std::size_t>(pick(0, 4))];
        const CScalar a(small(), small());
        const Rational r = small();
        std::vector<CScalar> params{CScalar(lambda), u, a, CScalar(r)};
        if (std::any_of(fam.begin(), fam.end(), [&](const FamilyMember &m) { return m.parameters == params; })) {
            continue;
        }
        const auto F = compose_ambient(
            hm::dilation(2, order, lambda),
            compose_ambient(hm::rotation(2, order, {{u}}),
                            compose_ambient(hm::isotropy(2, order, {a}), hm::vertical_isotropy(2, order, r))));
        fam.push_back({"member " + std::to_string(fam.size()), params, F});
    }
    const auto rho = models::heisenberg_rho(2, order);
    for (const auto &m : fam) {
        try {
            restrict(make_map(rho, rho, 2, m.components));
        } catch (const Error &e) {
            o.require(false, m.label + " is not an automorphism: " + e.what());
        }
    }
    const auto rep = jet_injectivity_demo(fam, 2, order);
    o.require(rep.passed(), rep.counterexamples.empty() ? "" : rep.counterexamples[0]);
    o.require(rep.equal_jet_pairs == 1 && rep.equal_jet_equal_map_pairs == 1, "expected exactly the identity pair to share a 2-jet");
    o.require(rep.distinct_parameter_pairs == 44 && rep.distinct_jet_pairs == 44, "pair counts");
    if (o.ok) {
        o.detail = "10 members, 44 distinct 2-jet pairs, 1 equal pair equal through order 8";
    }
    return o;
}

Outcome aut_dims()
{
    Outcome o;
    o.require(aut_bound(2) == 30 && aut_bound(3) == 630, "bounds " + aut_bound(2).get_str() + ", " + aut_bound(3).get_str());
    AutOptions a;
    a.degree = 2;
    const auto r = aut(doc(kHeis2), a);
    o.require(r.body["tangency"]["solution_dim"] == 8, "Heisenberg dimension " + r.body["tangency"]["solution_dim"].dump());
    o.require(r.body["bound"]["satisfied"] == true && r.passed, "bound or basis check");
    const auto tube = from_defining(models::tube_c3_rho(8), 3);
    std::vector<int> dims;
    for (int d = 1; d <= 3; ++d) {
        const auto sys = infinitesimal_aut_dim(tube, d, 8);
        o.require(sys.basis_verified, "tube basis d = " + std::to_string(d));
        dims.push_back(sys.solution_dim);
    }
    o.require(dims[0] < dims[1] && dims[1] < dims[2],
              "tube dims " + std::to_string(dims[0]) + ", " + std::to_string(dims[1]) + ", " + std::to_string(dims[2]));
    if (o.ok) {
        o.detail = "Heisenberg 8 <= 30; tube " + std::to_string(dims[0]) + " < " + std::to_string(dims[1]) + " < " +
                   std::to_string(dims[2]);
    }
    return o;
}

Outcome determinism()
{
    Outcome o;
    auto all_reports = [&](int threads) {
        std::string out;
        for (const char *text : {kHeis2, kHeis3, kM3, kM2}) {
            AnalyzeOptions a;
            a.scan = ScanGrid::parse("-1/2,1/2,3");
            a.threads = threads;
            out += render_text(analyze(doc(text), a).body) + render_json(analyze(doc(text), a).body);
            for (const char *id : {"frame", "h-recursion", "h-shift", "bracket-values"}) {
                VerifyOptions v;
                v.identity = id;
                out += render_json(verify(doc(text), v).body);
            }
        }
        ScanOptions s;
        s.grid = ScanGrid::parse("-1,1,4");
        s.threads = threads;
        out += render_json(scan(doc(kM2), s).body);
        AutOptions au;
        out += render_json(aut(doc(kTube), au).body);
        const auto map = doc("kind = map\nN = 2\nz1 = (z1 + 1/2*w)/(1 - i*z1 - i/4*w)\nw = w/(1 - i*z1 - i/4*w)\n");
        out += render_json(reflect(doc(kHeis2), doc(kHeis2), map, {}).body);
        const auto sys = doc("kind = system\nq = 2\nm = 1\nk = 0\nbox = 0, 1\nd(f1, x1) = f1\nd(f1, x2) = 2*f1\n");
        const auto jet = doc("kind = jet\nq = 2\nm = 1\nk = 0\nf1 = 1\n");
        out += render_json(reconstruct(sys, jet, {}).body);
        return out;
    };
    const std::string a = all_reports(1), b = all_reports(1), c = all_reports(4);
    o.require(a == b, "two runs differ");
    o.require(a == c, "1 and 4 threads differ");
    if (o.ok) {
        o.detail = std::to_string(a.size()) + " bytes identical across runs and thread counts";
    }
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Heisenberg C2/C3 invariants", heisenberg},
        {"M3 k0 and E_k dimensions", m3},
        {"M2 infinite markers and type 4", m2},
        {"identity suites on named and 20 random models", identity_suites},
        {"reflection identities and Levi reconstruction", reflection},
        {"commutator certificates m = 2, 3", commutators},
        {"RK4 integrator accuracy, order, uniqueness", integrator},
        {"2-jet injectivity on a Heisenberg automorphism family", injectivity},
        {"dimension bound and tangency systems", aut_dims},
        {"byte-identical reports", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.ok ? 0 : 1;
        std::printf("%s %zu: %s%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.empty() ? "" : " | ", o.detail.c_str());
    }
    return failed == 0 ? 0 : 1;
}
