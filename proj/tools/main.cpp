#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

using namespace crjet;
using namespace crjet::cli;

namespace
{

struct Output {
    bool json = false;
};

int emit(const Report &r, const Output &out)
{
    std::cout << (out.json ? render_json(r.body) : render_text(r.body));
    return r.passed ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Finite jet determination toolkit for real hypersurfaces"};
    app.require_subcommand(1);
    Output out;
    app.add_flag("--json", out.json, "Emit JSON instead of text");

    std::string file, file2, file3;
    std::optional<int> kmax, order, depth, taylor;
    std::string scan_grid, grid;
    int threads = 1;

    auto *an = app.add_subcommand("analyze", "Filtration invariants of a hypersurface");
    an->add_option("file", file, "Hypersurface document")->required();
    an->add_option("--kmax", kmax, "Depth bound for k0 (default N - 1)");
    an->add_option("--order", order, "Truncation order (default 2 (kmax + 2))");
    an->add_option("--scan", scan_grid, "Nondegeneracy scan grid lo,hi,points over Re z, Im z");
    an->add_option("--threads", threads, "Workers for the scan")->check(CLI::Range(1, 64));

    VerifyOptions vo;
    std::string E = "1,1";
    auto *ve = app.add_subcommand("verify", "Check an identity suite; all residuals must vanish");
    ve->add_option("file", file, "Hypersurface document")->required();
    ve->add_option("--identity", vo.identity,
                   "frame | h-recursion | h-shift | bracket-values | commutator (aliases l1.13, l1.18, p1.24, p3.18k1)")
        ->required();
    ve->add_option("--kmax", kmax, "Depth bound");
    ve->add_option("--order", order, "Truncation order");
    ve->add_option("--E", E, "Commutator: unbarred indices, comma separated, 1-based");
    ve->add_option("--F", vo.F, "Commutator: barred index, 1-based");
    ve->add_option("--check-degree", vo.check_degree, "Commutator: monomial degree for the operator comparison");

    auto *re = app.add_subcommand("reflect", "Reflection identities for a map between hypersurfaces");
    re->add_option("source", file, "Source hypersurface document")->required();
    re->add_option("target", file2, "Target hypersurface document")->required();
    re->add_option("map", file3, "Map document")->required();
    re->add_option("--order", order, "Truncation order");
    re->add_option("--depth", depth, "Highest tuple length for differentiated identities");

    ReconstructOptions ro;
    auto *rc = app.add_subcommand("reconstruct", "Integrate a complete system from a jet");
    rc->add_option("system", file, "System document")->required();
    rc->add_option("jet", file2, "Jet document")->required();
    rc->add_option("--grid", grid, "Grid lo,hi,points per axis (default: the system box, 5 points)");
    rc->add_option("--step", ro.step, "RK4 step")->check(CLI::PositiveNumber);
    rc->add_option("--taylor", taylor, "Exact Taylor propagation order (default k + 3)");

    AutOptions ao;
    auto *au = app.add_subcommand("aut", "Infinitesimal automorphisms versus the dimension bound");
    au->add_option("file", file, "Hypersurface document")->required();
    au->add_option("--degree", ao.degree, "Weighted degree bound d")->check(CLI::Range(0, 12));
    au->add_option("--order", order, "Truncation order (default max(2 (N + 1), d + 6))");
    au->add_flag("--holomorphic-degeneracy", ao.holomorphic_degeneracy, "Also search tangent holomorphic fields");

    auto *sc = app.add_subcommand("scan", "Finite nondegeneracy at sample points of M");
    sc->add_option("file", file, "Hypersurface document")->required();
    sc->add_option("--grid", scan_grid, "lo,hi,points over Re z, Im z")->required();
    sc->add_option("--kmax", kmax, "Depth bound");
    sc->add_option("--order", order, "Truncation order");
    sc->add_option("--threads", threads, "Workers")->check(CLI::Range(1, 64));

    for (auto *s : {an, ve, re, rc, au, sc}) {
        s->fallthrough();
    }
    CLI11_PARSE(app, argc, argv);

    std::string current = file;
    try {
        if (an->parsed()) {
            AnalyzeOptions o{kmax, order, std::nullopt, threads};
            if (!scan_grid.empty()) {
                o.scan = ScanGrid::parse(scan_grid);
            }
            return emit(analyze(read_document(file), o), out);
        }
        if (ve->parsed()) {
            vo.kmax = kmax;
            vo.order = order;
            vo.E.clear();
            std::stringstream ss(E);
            for (std::string p; std::getline(ss, p, ',');) {
                vo.E.push_back(std::stoi(p));
            }
            return emit(verify(read_document(file), vo), out);
        }
        if (re->parsed()) {
            const auto s = read_document(file);
            current = file2;
            const auto t = read_document(file2);
            current = file3;
            const auto m = read_document(file3);
            current.clear();
            return emit(reflect(s, t, m, ReflectOptions{order, depth}), out);
        }
        if (rc->parsed()) {
            const auto s = read_document(file);
            current = file2;
            const auto j = read_document(file2);
            current.clear();
            if (!grid.empty()) {
                ro.grid = ScanGrid::parse(grid);
            }
            ro.taylor_order = taylor;
            return emit(reconstruct(s, j, ro), out);
        }
        if (au->parsed()) {
            ao.order = order;
            return emit(aut(read_document(file), ao), out);
        }
        if (sc->parsed()) {
            return emit(scan(read_document(file), ScanOptions{ScanGrid::parse(scan_grid), kmax, order, threads}), out);
        }
    } catch (const ParseError &e) {
        std::cerr << (current.empty() ? "" : current + ":") << e.line() << ":" << e.col() << ": " << e.message() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
