#include "document.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <crjet/hypersurface.hpp>
#include <crjet/models.hpp>

namespace crjet::cli
{

namespace
{

using K = ExprNode::Kind;

std::string trim(std::string_view s, int &offset)
{
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) {
        ++b;
    }
    std::size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) {
        --e;
    }
    offset += static_cast<int>(b);
    return std::string(s.substr(b, e - b));
}

// Positions of top-level occurrences of c (outside parentheses).
std::vector<std::size_t> top_level(std::string_view s, char c)
{
    std::vector<std::size_t> out;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            --depth;
        } else if (s[i] == c && depth == 0) {
            out.push_back(i);
        }
    }
    return out;
}

[[noreturn]] void fail(int line, int col, const std::string &msg) { throw ParseError(line, col, msg); }

const std::set<std::string> kKinds{"hypersurface", "map", "system", "jet"};

bool is_identifier(const std::string &s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

int integer_value(const Declaration &d)
{
    if (d.values.size() != 1) {
        fail(d.line, d.col, d.key + " takes one value");
    }
    const auto &e = d.values[0];
    if (e->kind != K::Number || e->value.get_den() != 1 || !e->value.get_num().fits_sint_p()) {
        fail(e->line, e->col, d.key + " must be an integer");
    }
    return static_cast<int>(e->value.get_num().get_si());
}

const Declaration &require(const InputDocument &doc, std::string_view key)
{
    const auto *d = doc.find(key);
    if (!d) {
        fail(doc.kind_line, 1, "missing declaration '" + std::string(key) + "'");
    }
    return *d;
}

const Expr &single(const Declaration &d)
{
    if (d.values.size() != 1) {
        fail(d.line, d.col, d.key + " takes one expression");
    }
    return d.values[0];
}

// Variables z1..zn, w of C^N in the ambient layout.
std::optional<TruncatedSeries> ambient_variable(const std::string &name, int N, int order)
{
    const AmbientLayout amb{N};
    if (name == "w") {
        return TruncatedSeries::variable(amb.nvars(), order, amb.w());
    }
    if (name.size() > 1 && name[0] == 'z' && std::all_of(name.begin() + 1, name.end(), ::isdigit) && name[1] != '0') {
        const int j = std::stoi(name.substr(1));
        if (j >= 1 && j <= N - 1) {
            return TruncatedSeries::variable(amb.nvars(), order, amb.z(j - 1));
        }
    }
    return std::nullopt;
}

void check_dimension(const Declaration &d, int N)
{
    if (N < 2 || N > 6) {
        fail(d.values[0]->line, d.values[0]->col, "N must be between 2 and 6");
    }
}

void forbid_conjugation(const Expr &e)
{
    if (e->kind == K::Call && (e->name == "conj" || e->name == "Re" || e->name == "Im")) {
        fail(e->line, e->col, e->name + "() is not allowed in a holomorphic map");
    }
    for (const auto &a : e->args) {
        forbid_conjugation(a);
    }
}

std::vector<std::string> map_keys(int N)
{
    std::vector<std::string> keys;
    for (int j = 1; j < N; ++j) {
        keys.push_back("z" + std::to_string(j));
    }
    keys.emplace_back("w");
    return keys;
}

// Allowed keys and semantic checks per kind.
void validate(const InputDocument &doc)
{
    std::set<std::string> allowed;
    if (doc.kind == "hypersurface") {
        allowed = {"N", "order", "rho", "random", "degree"};
    } else if (doc.kind == "map") {
        allowed = {"N", "order"};
        const auto *n = doc.find("N");
        if (n) {
            for (const auto &k : map_keys(integer_value(*n))) {
                allowed.insert(k);
            }
        }
    } else {
        allowed = {"q", "m", "k"};
        if (doc.kind == "system") {
            allowed.insert("box");
        }
    }
    for (const auto &d : doc.declarations) {
        const bool jet_key = (doc.kind == "system" || doc.kind == "jet") && !allowed.count(d.key);
        if (!allowed.count(d.key) && !jet_key) {
            fail(d.line, d.col, "unknown key '" + d.key + "' in a " + doc.kind + " document");
        }
    }
    if (doc.kind == "hypersurface") {
        const int N = integer_value(require(doc, "N"));
        check_dimension(require(doc, "N"), N);
        const bool has_rho = doc.find("rho") != nullptr;
        const bool has_random = doc.find("random") != nullptr;
        if (has_rho == has_random) {
            fail(doc.kind_line, 1, "a hypersurface needs exactly one of rho and random");
        }
        if (doc.find("degree") && !has_random) {
            fail(doc.find("degree")->line, doc.find("degree")->col, "degree only applies to random models");
        }
        hypersurface_input(doc, std::max(document_order(doc), 8));
    } else if (doc.kind == "map") {
        check_dimension(require(doc, "N"), integer_value(require(doc, "N")));
        map_input(doc, std::max(document_order(doc), 4));
    } else if (doc.kind == "system") {
        system_input(doc);
    } else {
        jet_input(doc);
    }
}

std::string render_value(const Declaration &d)
{
    std::string s;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        s += (i ? ", " : "") + to_string(d.values[i]);
    }
    return s;
}

int order_for(const InputDocument &doc, const std::string &key)
{
    const auto *d = doc.find(key);
    return d ? integer_value(*d) : -1;
}

// Resolves a system or jet key written as fj or d(fj, xa, ...).
JetKey key_of(const Declaration &d, int q, int m)
{
    const Expr e = parse_expression(d.key, d.line, d.col);
    const auto ref = jet_reference(*e, q, m);
    if (!ref) {
        fail(d.line, d.col, "expected a jet reference fj or d(fj, xa, ...), got '" + d.key + "'");
    }
    return *ref;
}

void check_sizes(const InputDocument &doc, int &q, int &m, int &k)
{
    q = integer_value(require(doc, "q"));
    m = integer_value(require(doc, "m"));
    k = integer_value(require(doc, "k"));
    if (q < 1 || q > 8 || m < 1 || m > 16 || k < 0 || k > 8) {
        fail(require(doc, "q").line, 1, "need 1 <= q <= 8, 1 <= m <= 16, 0 <= k <= 8");
    }
}

} // namespace

const Declaration *InputDocument::find(std::string_view key) const
{
    for (const auto &d : declarations) {
        if (d.key == key) {
            return &d;
        }
    }
    return nullptr;
}

InputDocument parse_document(std::string_view text)
{
    InputDocument doc;
    std::set<std::string> seen;
    int line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = std::min(text.find('\n', pos), text.size());
        std::string_view raw = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        int offset = 1;
        const std::string body = trim(raw, offset);
        if (body.empty()) {
            if (nl == text.size()) {
                break;
            }
            continue;
        }
        const auto eqs = top_level(body, '=');
        if (eqs.empty()) {
            fail(line, offset, "expected 'key = value'");
        }
        int key_col = offset;
        const std::string key_text = trim(std::string_view(body).substr(0, eqs[0]), key_col);
        if (key_text.empty()) {
            fail(line, offset, "missing key before '='");
        }
        std::string key = key_text;
        if (!is_identifier(key_text)) {
            const Expr k = parse_expression(key_text, line, key_col);
            if (k->kind != K::Call) {
                fail(line, key_col, "malformed key '" + key_text + "'");
            }
            key = to_string(k);
        }
        if (eqs.size() > 1) {
            fail(line, offset + static_cast<int>(eqs[1]), "unexpected '='");
        }
        const std::string_view rhs = std::string_view(body).substr(eqs[0] + 1);
        const int rhs_col = offset + static_cast<int>(eqs[0]) + 1;
        Declaration d{key, {}, line, key_col};
        std::size_t start = 0;
        auto commas = top_level(rhs, ',');
        commas.push_back(rhs.size());
        for (const std::size_t c : commas) {
            int col = rhs_col + static_cast<int>(start);
            const std::string part = trim(rhs.substr(start, c - start), col);
            if (part.empty()) {
                fail(line, col, "empty value");
            }
            d.values.push_back(parse_expression(part, line, col));
            start = c + 1;
        }
        if (doc.kind.empty()) {
            if (key != "kind") {
                fail(line, key_col, "the first declaration must be 'kind = ...'");
            }
            const auto &v = single(d);
            if (v->kind != K::Var || !kKinds.count(v->name)) {
                fail(v->line, v->col, "kind must be one of hypersurface, map, system, jet");
            }
            doc.kind = v->name;
            doc.kind_line = line;
            continue;
        }
        if (!seen.insert(key).second) {
            fail(line, key_col, "duplicate key '" + key + "'");
        }
        doc.declarations.push_back(std::move(d));
        if (nl == text.size()) {
            break;
        }
    }
    if (doc.kind.empty()) {
        fail(line, 1, "empty document");
    }
    validate(doc);
    return doc;
}

InputDocument read_document(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return parse_document(os.str());
}

std::string serialize(const InputDocument &doc)
{
    std::string s = "kind = " + doc.kind + "\n";
    for (const auto &d : doc.declarations) {
        s += d.key + " = " + render_value(d) + "\n";
    }
    return s;
}

int integer(const InputDocument &doc, std::string_view key, int fallback)
{
    const auto *d = doc.find(key);
    return d ? integer_value(*d) : fallback;
}

int document_order(const InputDocument &doc)
{
    const int o = order_for(doc, "order");
    if (o == -1) {
        return 0;
    }
    if (o < 1 || o > TruncatedSeries::kMaxOrder) {
        const auto *d = doc.find("order");
        fail(d->line, d->col, "order must be between 1 and " + std::to_string(TruncatedSeries::kMaxOrder));
    }
    return o;
}

HypersurfaceInput hypersurface_input(const InputDocument &doc, int order)
{
    HypersurfaceInput in;
    in.N = integer_value(require(doc, "N"));
    const AmbientLayout amb{in.N};
    if (const auto *r = doc.find("random")) {
        const int seed = integer_value(*r);
        const int degree = integer(doc, "degree", 4);
        if (seed < 0 || degree < 2 || degree > 8) {
            fail(r->line, r->col, "random needs a nonnegative seed and 2 <= degree <= 8");
        }
        in.rho = models::random_hypersurface(static_cast<std::uint64_t>(seed), in.N, order, degree).rho;
        return in;
    }
    const auto &d = require(doc, "rho");
    const Expr &e = single(d);
    SeriesContext ctx;
    ctx.nvars = amb.nvars();
    ctx.order = order;
    ctx.variable = [&](const std::string &name) { return ambient_variable(name, in.N, order); };
    ctx.pairing = amb.pairing();
    in.rho = to_series(e, ctx);
    if (!(conjugate(in.rho, amb.pairing()) == in.rho)) {
        fail(e->line, e->col, "rho is not real-valued");
    }
    return in;
}

int map_dimension(const InputDocument &doc)
{
    return integer_value(require(doc, "N"));
}

std::vector<TruncatedSeries> map_input(const InputDocument &doc, int order)
{
    const int N = map_dimension(doc);
    const AmbientLayout amb{N};
    SeriesContext ctx;
    ctx.nvars = amb.nvars();
    ctx.order = order;
    ctx.variable = [&](const std::string &name) { return ambient_variable(name, N, order); };
    std::vector<TruncatedSeries> F;
    for (const auto &key : map_keys(N)) {
        const auto &d = require(doc, key);
        const Expr &e = single(d);
        forbid_conjugation(e);
        F.push_back(to_series(e, ctx));
    }
    return F;
}

CompleteSystem system_input(const InputDocument &doc)
{
    CompleteSystem S;
    check_sizes(doc, S.q, S.m, S.k);
    const auto &box = require(doc, "box");
    if (box.values.size() != 2) {
        fail(box.line, box.col, "box takes two values lo, hi");
    }
    SeriesContext num;
    num.nvars = 1;
    num.order = 0;
    auto value = [&](const Expr &e) {
        const auto v = to_series(e, num).constant_term();
        if (!v.is_real()) {
            fail(e->line, e->col, "box bounds must be real");
        }
        return v.re().get_d();
    };
    const double lo = value(box.values[0]), hi = value(box.values[1]);
    S.box.assign(static_cast<std::size_t>(S.q), {lo, hi});
    for (const auto &d : doc.declarations) {
        if (d.key == "q" || d.key == "m" || d.key == "k" || d.key == "box") {
            continue;
        }
        const JetKey key = key_of(d, S.q, S.m);
        if (key.second.total() != S.k + 1) {
            fail(d.line, d.col, "left-hand sides must be derivatives of order k + 1 = " + std::to_string(S.k + 1));
        }
        S.rhs.emplace(key, single(d));
    }
    try {
        S.validate();
    } catch (const ParseError &) {
        throw;
    } catch (const Error &e) {
        fail(doc.kind_line, 1, e.what());
    }
    return S;
}

JetVector jet_input(const InputDocument &doc)
{
    int q = 0, m = 0, k = 0;
    check_sizes(doc, q, m, k);
    JetVector J(q, m, k);
    std::set<JetKey> given;
    SeriesContext num;
    num.nvars = 1;
    num.order = 0;
    for (const auto &d : doc.declarations) {
        if (d.key == "q" || d.key == "m" || d.key == "k") {
            continue;
        }
        const JetKey key = key_of(d, q, m);
        if (key.second.total() > k) {
            fail(d.line, d.col, "jet entry beyond order k = " + std::to_string(k));
        }
        const Expr &e = single(d);
        const CScalar v = to_series(e, num).constant_term();
        if (!v.is_real()) {
            fail(e->line, e->col, "jet values are real");
        }
        J.set(key.first, key.second, v.re());
        given.insert(key);
    }
    for (const auto &key : J.keys()) {
        if (!given.count(key)) {
            fail(doc.kind_line, 1, "missing jet entry " + jet_reference_name(key.first, key.second));
        }
    }
    return J;
}

} // namespace crjet::cli
