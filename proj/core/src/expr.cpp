#include <crjet/expr.hpp>

#include <cctype>
#include <cmath>

namespace crjet
{

ParseError::ParseError(int line, int col, const std::string &msg)
    : Error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg), line_(line), col_(col),
      msg_(msg)
{
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational r = parse_rational(s.substr(0, slash)) / parse_rational(s.substr(slash + 1));
        r.canonicalize();
        return r;
    }
    bool neg = false;
    std::size_t pos = 0;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        neg = s[pos] == '-';
        ++pos;
    }
    std::string digits;
    int decimals = -1;
    for (; pos < s.size(); ++pos) {
        if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
            digits += s[pos];
            if (decimals >= 0) {
                ++decimals;
            }
        } else if (s[pos] == '.' && decimals < 0) {
            decimals = 0;
        } else {
            throw Error("malformed number '" + s + "'");
        }
    }
    if (digits.empty()) {
        throw Error("malformed number '" + s + "'");
    }
    Rational r(mpz_class(digits, 10));
    if (decimals > 0) {
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(decimals));
        r /= Rational(den);
        r.canonicalize();
    }
    return neg ? Rational(-r) : r;
}

namespace
{

using K = ExprNode::Kind;

Expr node(K kind, int line, int col, std::vector<Expr> args = {})
{
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->line = line;
    n->col = col;
    n->args = std::move(args);
    return n;
}

class Parser
{
public:
    Parser(std::string_view text, int line, int col) : s_(text), line_(line), col_(col) {}

    Expr parse()
    {
        skip();
        if (at_end()) {
            fail("empty expression");
        }
        Expr e = expr();
        skip();
        if (!at_end()) {
            fail(std::string("unexpected '") + s_[pos_] + "'");
        }
        return e;
    }

private:
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }

    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(line_, col_, msg); }

    void advance()
    {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
            advance();
        }
    }

    bool accept(char c)
    {
        skip();
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    Expr expr()
    {
        Expr l = term();
        while (true) {
            skip();
            const int line = line_, col = col_;
            if (accept('+')) {
                l = node(K::Add, line, col, {l, term()});
            } else if (accept('-')) {
                l = node(K::Sub, line, col, {l, term()});
            } else {
                return l;
            }
        }
    }

    Expr term()
    {
        Expr l = unary();
        while (true) {
            skip();
            const int line = line_, col = col_;
            if (accept('*')) {
                l = node(K::Mul, line, col, {l, unary()});
            } else if (accept('/')) {
                Expr r = unary();
                if (l->kind == K::Number && r->kind == K::Number) {
                    if (sgn(r->value) == 0) {
                        throw ParseError(line, col, "division by zero");
                    }
                    auto n = std::make_shared<ExprNode>(*l);
                    n->value = l->value / r->value;
                    n->value.canonicalize();
                    l = n;
                } else {
                    l = node(K::Div, line, col, {l, r});
                }
            } else {
                return l;
            }
        }
    }

    Expr unary()
    {
        skip();
        const int line = line_, col = col_;
        if (accept('-')) {
            return node(K::Neg, line, col, {unary()});
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        skip();
        const int line = line_, col = col_;
        if (accept('^')) {
            skip();
            const int eline = line_, ecol = col_;
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                digits += peek();
                advance();
            }
            if (digits.empty()) {
                throw ParseError(eline, ecol, "exponent must be a nonnegative integer literal");
            }
            if (digits.size() > 3) {
                throw ParseError(eline, ecol, "exponent too large");
            }
            auto n = node(K::Pow, line, col, {base});
            std::const_pointer_cast<ExprNode>(n)->exponent = std::stoi(digits);
            return n;
        }
        return base;
    }

    Expr primary()
    {
        skip();
        const int line = line_, col = col_;
        const char c = peek();
        if (c == '(') {
            advance();
            Expr e = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::string lit;
            while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
                lit += peek();
                advance();
            }
            auto n = std::make_shared<ExprNode>();
            n->kind = K::Number;
            n->line = line;
            n->col = col;
            try {
                n->value = parse_rational(lit);
            } catch (const Error &) {
                throw ParseError(line, col, "malformed number '" + lit + "'");
            }
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                id += peek();
                advance();
            }
            if (accept('(')) {
                auto n = std::make_shared<ExprNode>();
                n->kind = K::Call;
                n->name = id;
                n->line = line;
                n->col = col;
                if (!accept(')')) {
                    do {
                        n->args.push_back(expr());
                    } while (accept(','));
                    if (!accept(')')) {
                        fail("expected ')' or ','");
                    }
                }
                return n;
            }
            if (id == "i") {
                return node(K::Imag, line, col);
            }
            auto n = std::make_shared<ExprNode>();
            n->kind = K::Var;
            n->name = id;
            n->line = line;
            n->col = col;
            return n;
        }
        if (at_end()) {
            fail("unexpected end of expression");
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
    int col_;
};

int precedence(const Expr &e)
{
    switch (e->kind) {
    case K::Add:
    case K::Sub:
        return 1;
    case K::Mul:
    case K::Div:
        return 2;
    case K::Number:
        return e->value.get_den() == 1 ? 5 : 2;
    case K::Neg:
        return 3;
    case K::Pow:
        return 4;
    default:
        return 5;
    }
}

std::string wrap(const Expr &e, bool parens)
{
    return parens ? "(" + to_string(e) + ")" : to_string(e);
}

[[noreturn]] void fail_at(const ExprNode &n, const std::string &msg) { throw ParseError(n.line, n.col, msg); }

} // namespace

Expr parse_expression(std::string_view text, int line, int col)
{
    return Parser(text, line, col).parse();
}

std::string to_string(const Expr &e)
{
    const int p = precedence(e);
    switch (e->kind) {
    case K::Number:
        return e->value.get_str();
    case K::Imag:
        return "i";
    case K::Var:
        return e->name;
    case K::Neg:
        return "-" + wrap(e->args[0], precedence(e->args[0]) < 3);
    case K::Pow:
        return wrap(e->args[0], precedence(e->args[0]) <= 4) + "^" + std::to_string(e->exponent);
    case K::Call: {
        std::string s = e->name + "(";
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            s += (i ? ", " : "") + to_string(e->args[i]);
        }
        return s + ")";
    }
    default: {
        const char *op = e->kind == K::Add ? " + " : e->kind == K::Sub ? " - " : e->kind == K::Mul ? "*" : "/";
        return wrap(e->args[0], precedence(e->args[0]) < p) + op + wrap(e->args[1], precedence(e->args[1]) <= p);
    }
    }
}

void collect_names(const Expr &e, std::vector<std::string> &vars, std::vector<std::string> &calls)
{
    if (e->kind == K::Var) {
        vars.push_back(e->name);
    } else if (e->kind == K::Call) {
        calls.push_back(e->name);
    }
    for (const auto &a : e->args) {
        collect_names(a, vars, calls);
    }
}

TruncatedSeries to_series(const Expr &e, const SeriesContext &ctx)
{
    auto constant = [&](const CScalar &c) { return TruncatedSeries::constant(ctx.nvars, ctx.order, c); };
    switch (e->kind) {
    case K::Number:
        return constant(CScalar(e->value));
    case K::Imag:
        return constant(CScalar::i());
    case K::Var: {
        auto v = ctx.variable ? ctx.variable(e->name) : std::nullopt;
        if (!v) {
            fail_at(*e, "unknown identifier '" + e->name + "'");
        }
        return *v;
    }
    case K::Neg:
        return -to_series(e->args[0], ctx);
    case K::Add:
        return to_series(e->args[0], ctx) + to_series(e->args[1], ctx);
    case K::Sub:
        return to_series(e->args[0], ctx) - to_series(e->args[1], ctx);
    case K::Mul:
        return to_series(e->args[0], ctx) * to_series(e->args[1], ctx);
    case K::Div: {
        const auto num = to_series(e->args[0], ctx);
        const auto den = to_series(e->args[1], ctx);
        if (den.constant_term().is_zero()) {
            fail_at(*e, "denominator vanishes at the origin");
        }
        if (den.is_polynomial() && den.max_degree() == 0) {
            return num * den.constant_term().inverse();
        }
        return num * invert_unit(den);
    }
    case K::Pow:
        return pow(to_series(e->args[0], ctx), e->exponent);
    case K::Call: {
        if (e->name == "conj" || e->name == "Re" || e->name == "Im") {
            if (!ctx.pairing) {
                fail_at(*e, e->name + "() is not allowed here");
            }
            if (e->args.size() != 1) {
                fail_at(*e, e->name + "() takes one argument");
            }
            const auto a = to_series(e->args[0], ctx);
            const auto c = conjugate(a, *ctx.pairing);
            if (e->name == "conj") {
                return c;
            }
            if (e->name == "Re") {
                return (a + c) * CScalar(Rational(1, 2));
            }
            return (a - c) * CScalar(Rational(0), Rational(-1, 2));
        }
        auto v = ctx.call ? ctx.call(*e) : std::nullopt;
        if (!v) {
            fail_at(*e, "unknown function '" + e->name + "'");
        }
        return *v;
    }
    }
    fail_at(*e, "malformed expression");
}

RealFunction compile_real(const Expr &e, const std::function<int(const ExprNode &)> &slot)
{
    switch (e->kind) {
    case K::Number: {
        const double v = e->value.get_d();
        return [v](const double *) { return v; };
    }
    case K::Imag:
        fail_at(*e, "imaginary unit in a real expression");
    case K::Var: {
        const int k = slot(*e);
        if (k < 0) {
            fail_at(*e, "unknown identifier '" + e->name + "'");
        }
        return [k](const double *x) { return x[k]; };
    }
    case K::Neg: {
        auto a = compile_real(e->args[0], slot);
        return [a](const double *x) { return -a(x); };
    }
    case K::Pow: {
        auto a = compile_real(e->args[0], slot);
        const int n = e->exponent;
        return [a, n](const double *x) {
            const double b = a(x);
            double r = 1.0;
            for (int k = 0; k < n; ++k) {
                r *= b;
            }
            return r;
        };
    }
    case K::Call: {
        const int k = slot(*e);
        if (k >= 0) {
            return [k](const double *x) { return x[k]; };
        }
        if (e->args.size() == 1 && (e->name == "exp" || e->name == "sin" || e->name == "cos")) {
            auto a = compile_real(e->args[0], slot);
            if (e->name == "exp") {
                return [a](const double *x) { return std::exp(a(x)); };
            }
            if (e->name == "sin") {
                return [a](const double *x) { return std::sin(a(x)); };
            }
            return [a](const double *x) { return std::cos(a(x)); };
        }
        fail_at(*e, "unknown function '" + e->name + "'");
    }
    default: {
        auto a = compile_real(e->args[0], slot);
        auto b = compile_real(e->args[1], slot);
        switch (e->kind) {
        case K::Add:
            return [a, b](const double *x) { return a(x) + b(x); };
        case K::Sub:
            return [a, b](const double *x) { return a(x) - b(x); };
        case K::Mul:
            return [a, b](const double *x) { return a(x) * b(x); };
        default:
            return [a, b](const double *x) { return a(x) / b(x); };
        }
    }
    }
}

} // namespace crjet
