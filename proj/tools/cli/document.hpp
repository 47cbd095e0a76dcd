#ifndef CRJET_CLI_DOCUMENT_HPP
#define CRJET_CLI_DOCUMENT_HPP

#include <string>
#include <string_view>
#include <vector>

#include <crjet/expr.hpp>
#include <crjet/jet_systems.hpp>

namespace crjet::cli
{

/// One "key = e1, e2, ..." line.
struct Declaration {
    std::string key;
    std::vector<Expr> values;
    int line = 0;
    int col = 0;
};

/// A parsed definition file. Documents are line based:
///
///   # comment
///   kind = hypersurface
///   N = 2
///   rho = Im(w) - z1*conj(z1)
///
/// Kinds and keys:
///   hypersurface  N, order?, and either rho or random (a seed) with degree?
///   map           N, order?, one component per target coordinate z1..zn, w
///   system        q, m, k, box = lo, hi, d(fj, xa, ...) for every |alpha| = k + 1
///   jet           q, m, k, fj and d(fj, xa, ...) for every |beta| <= k
struct InputDocument {
    std::string kind;
    int kind_line = 0;
    std::vector<Declaration> declarations;

    const Declaration *find(std::string_view key) const;
};

/// Parses and validates a document. Errors are ParseError with the position
/// of the offending token.
InputDocument parse_document(std::string_view text);
InputDocument read_document(const std::string &path);

/// Canonical text; parse_document(serialize(d)) serializes identically.
std::string serialize(const InputDocument &doc);

/// Integer declaration, or fallback when absent.
int integer(const InputDocument &doc, std::string_view key, int fallback);

struct HypersurfaceInput {
    int N = 0;
    /// Defining function in the ambient layout, checked to be real.
    TruncatedSeries rho;
};

/// Evaluates rho (or the seeded random model) at the given truncation order.
HypersurfaceInput hypersurface_input(const InputDocument &doc, int order);
/// Order requested inside the document, or 0.
int document_order(const InputDocument &doc);

/// Components (z1..zn, w) of a holomorphic map in the ambient layout of C^N.
std::vector<TruncatedSeries> map_input(const InputDocument &doc, int order);
int map_dimension(const InputDocument &doc);

CompleteSystem system_input(const InputDocument &doc);
JetVector jet_input(const InputDocument &doc);

} // namespace crjet::cli

#endif
