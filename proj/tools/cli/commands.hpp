#ifndef CRJET_CLI_COMMANDS_HPP
#define CRJET_CLI_COMMANDS_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "document.hpp"

namespace crjet::cli
{

inline constexpr int kSchemaVersion = 1;

/// Key-sorted report tree; `passed` drives the exit code.
struct Report {
    nlohmann::json body;
    bool passed = true;
};

/// Indented "key: value" text, keys sorted, same content as the JSON form.
std::string render_text(const nlohmann::json &j);
std::string render_json(const nlohmann::json &j);

/// Truncation order: explicit flag, then the document, then CRJET_ORDER, then fallback.
int resolve_order(std::optional<int> flag, int document, int fallback);

/// Sample grid lo, hi, points for each real coordinate.
struct ScanGrid {
    Rational lo;
    Rational hi;
    int points = 0;

    static ScanGrid parse(const std::string &text);
};

struct AnalyzeOptions {
    std::optional<int> kmax;
    std::optional<int> order;
    std::optional<ScanGrid> scan;
    int threads = 1;
};
Report analyze(const InputDocument &doc, const AnalyzeOptions &opt);

struct VerifyOptions {
    /// frame, h-recursion, h-shift, bracket-values, commutator, or the short
    /// aliases l1.13, l1.18, p1.24, p3.18k1.
    std::string identity;
    std::optional<int> kmax;
    std::optional<int> order;
    /// 1-based frame indices for the commutator certificates.
    std::vector<int> E{1, 1};
    int F = 1;
    int check_degree = 5;
};
Report verify(const InputDocument &doc, const VerifyOptions &opt);

struct ReflectOptions {
    std::optional<int> order;
    /// Highest tuple length for the differentiated identities; default min(2, order - 4).
    std::optional<int> depth;
};
Report reflect(const InputDocument &source, const InputDocument &target, const InputDocument &map,
               const ReflectOptions &opt);

struct ReconstructOptions {
    /// Defaults to the system box with 5 points per axis.
    std::optional<ScanGrid> grid;
    double step = 1e-3;
    /// Exact Taylor propagation target; default k + 3.
    std::optional<int> taylor_order;
};
Report reconstruct(const InputDocument &system, const InputDocument &jet, const ReconstructOptions &opt);

struct AutOptions {
    int degree = 2;
    std::optional<int> order;
    bool holomorphic_degeneracy = false;
};
Report aut(const InputDocument &doc, const AutOptions &opt);

struct ScanOptions {
    ScanGrid grid;
    std::optional<int> kmax;
    std::optional<int> order;
    int threads = 1;
};
Report scan(const InputDocument &doc, const ScanOptions &opt);

} // namespace crjet::cli

#endif
