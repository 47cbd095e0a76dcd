#ifndef CRJET_EXPR_HPP
#define CRJET_EXPR_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <crjet/series.hpp>

namespace crjet
{

/// Syntax error with a 1-based source position.
class ParseError : public Error
{
public:
    ParseError(int line, int col, const std::string &msg);
    int line() const { return line_; }
    int col() const { return col_; }
    const std::string &message() const { return msg_; }

private:
    int line_;
    int col_;
    std::string msg_;
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Number, Imag, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind;
    Rational value;   // Number
    std::string name; // Var, Call
    int exponent = 0; // Pow
    std::vector<Expr> args;
    int line = 1;
    int col = 1;
};

/// Parses + - * / ^ (nonnegative integer exponents), parentheses, calls f(a, b),
/// decimal and integer literals, identifiers and the imaginary unit i.
Expr parse_expression(std::string_view text, int line = 1, int col = 1);

/// Decimal or p/q literal as an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical text; parse_expression(to_string(e)) has the same canonical text.
std::string to_string(const Expr &e);

/// Every call name and variable name used in e.
void collect_names(const Expr &e, std::vector<std::string> &vars, std::vector<std::string> &calls);

struct SeriesContext {
    int nvars = 0;
    int order = 0;
    /// Series for an identifier, or nullopt when unknown.
    std::function<std::optional<TruncatedSeries>(const std::string &)> variable;
    /// Handler for calls other than conj/Re/Im, or nullopt when unknown.
    std::function<std::optional<TruncatedSeries>(const ExprNode &)> call;
    /// Enables conj, Re and Im.
    std::optional<VariablePairing> pairing;
};

/// Exact evaluation; errors carry the offending position.
TruncatedSeries to_series(const Expr &e, const SeriesContext &ctx);

/// Floating-point evaluation over slots; slot() maps a Var or Call node to an
/// index into the argument array, or -1 when the node is not a slot.
using RealFunction = std::function<double(const double *)>;
RealFunction compile_real(const Expr &e, const std::function<int(const ExprNode &)> &slot);

} // namespace crjet

#endif
