#include "junctionlab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <set>

namespace jl {

int Poly::degree() const {
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
        if (std::abs(c[k]) > 0.0) return k;
    return -1;
}

cplx Poly::eval(cplx s) const {
    cplx acc = 0.0;
    for (size_t k = c.size(); k-- > 0;) acc = acc * s + c[k];
    return acc;
}

Poly Poly::derivative() const {
    if (c.size() <= 1) return Poly{{cplx(0.0)}};
    std::vector<cplx> d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * cplx(double(k));
    return Poly{std::move(d)};
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<cplx> r(std::max(c.size(), o.c.size()), cplx(0.0));
    for (size_t k = 0; k < c.size(); ++k) r[k] += c[k];
    for (size_t k = 0; k < o.c.size(); ++k) r[k] += o.c[k];
    return Poly{std::move(r)};
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<cplx> r(std::max(c.size(), o.c.size()), cplx(0.0));
    for (size_t k = 0; k < c.size(); ++k) r[k] += c[k];
    for (size_t k = 0; k < o.c.size(); ++k) r[k] -= o.c[k];
    return Poly{std::move(r)};
}

Poly Poly::operator*(const Poly& o) const {
    if (c.empty() || o.c.empty()) return Poly{{cplx(0.0)}};
    std::vector<cplx> r(c.size() + o.c.size() - 1, cplx(0.0));
    for (size_t a = 0; a < c.size(); ++a)
        for (size_t b = 0; b < o.c.size(); ++b) r[a + b] += c[a] * o.c[b];
    return Poly{std::move(r)};
}

Poly Poly::pow(int n) const {
    if (n < 0) throw parse_error("negative exponent");
    Poly acc = Poly::constant(1.0);
    Poly base = *this;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

bool Poly::operator==(const Poly& o) const {
    int d = degree();
    if (d != o.degree()) return false;
    for (int k = 0; k <= d; ++k)
        if (c[k] != o.c[k]) return false;
    return true;
}

int order_at_zero(const Poly& p, double rel_tol) {
    int d = p.degree();
    if (d < 0) return ORD_INF;
    double mx = 0.0;
    for (int k = 0; k <= d; ++k) mx = std::max(mx, std::abs(p.c[k]));
    for (int k = 0; k <= d; ++k)
        if (std::abs(p.c[k]) > rel_tol * mx) return k;
    return ORD_INF;
}

std::vector<cplx> poly_roots(const Poly& p) {
    int d = p.degree();
    if (d < 1) throw numeric_error("poly_roots needs degree >= 1");
    // monic normalization, dropping an exact-zero head (roots at 0)
    std::vector<cplx> a(p.c.begin(), p.c.begin() + d + 1);
    cplx lead = a[d];
    for (auto& v : a) v /= lead;
    int zeros = 0;
    while (zeros < d && std::abs(a[zeros]) == 0.0) ++zeros;
    std::vector<cplx> roots(zeros, cplx(0.0));
    int n = d - zeros;
    if (n == 0) return roots;
    std::vector<cplx> b(a.begin() + zeros, a.end());
    if (n == 1) {
        roots.push_back(-b[0]);
        return roots;
    }
    double mag = 0.0;
    for (int k = 0; k < n; ++k) mag = std::max(mag, std::abs(b[k]));
    double radius = 1.0 + mag;
    auto evalb = [&](cplx x) {
        cplx acc = 1.0;
        for (int k = n - 1; k >= 0; --k) acc = acc * x + b[k];
        return acc;
    };
    std::vector<cplx> z(n);
    const cplx seed(0.4, 0.9);
    cplx w = seed;
    for (int k = 0; k < n; ++k) {
        z[k] = radius * w;
        w *= seed;
    }
    for (int iter = 0; iter < 600; ++iter) {
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx num = evalb(z[k]);
            cplx den = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != k) den *= (z[k] - z[j]);
            if (std::abs(den) == 0.0) {
                z[k] += cplx(1e-8, 1e-8);
                worst = 1.0;
                continue;
            }
            cplx step = num / den;
            z[k] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[k])));
        }
        if (worst < 1e-14) break;
    }
    // Newton polish against the full-precision coefficients
    Poly q{std::vector<cplx>(b.begin(), b.end())};
    if (q.c.size() < size_t(n + 1)) q.c.resize(n + 1, cplx(0.0));
    q.c[n] = 1.0;
    Poly dq = q.derivative();
    for (int k = 0; k < n; ++k) {
        for (int it = 0; it < 8; ++it) {
            cplx fv = q.eval(z[k]);
            cplx dv = dq.eval(z[k]);
            if (std::abs(dv) < 1e-300) break;
            cplx step = fv / dv;
            z[k] -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(z[k]))) break;
        }
    }
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

std::vector<cplx> cubic_roots(cplx f, cplx g) {
    return poly_roots(Poly{{g, f, cplx(0.0), cplx(1.0)}});
}

namespace {

std::string at_pos(const std::string& text, size_t offset) {
    size_t line = 1, col = 1;
    for (size_t k = 0; k < offset && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", col " + std::to_string(col);
}

struct Node {
    enum Kind { Num, VarS, Name, Add, Sub, Mul, Neg, Pow } kind;
    cplx value{};
    std::string name;
    size_t pos = 0;
    int exponent = 0;
    std::unique_ptr<Node> a, b;
};
using NodePtr = std::unique_ptr<Node>;

NodePtr mk(Node::Kind k) {
    auto n = std::make_unique<Node>();
    n->kind = k;
    return n;
}

struct Lexer {
    const std::string& s;
    size_t i = 0;
    explicit Lexer(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[i]))) {
                ++i;
            } else if (s[i] == '#') {
                while (i < s.size() && s[i] != '\n') ++i;
            } else {
                break;
            }
        }
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool accept(char ch) {
        skip_ws();
        if (i < s.size() && s[i] == ch) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char ch) {
        if (!accept(ch))
            throw parse_error(std::string("expected '") + ch + "' at " + at_pos(s, i));
    }
    std::string ident() {
        skip_ws();
        size_t start = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        if (start == i)
            throw parse_error("expected identifier at " + at_pos(s, i));
        return s.substr(start, i - start);
    }
};

struct Parser {
    Lexer lex;
    explicit Parser(const std::string& text) : lex(text) {}

    NodePtr parse_expr() {
        NodePtr acc = parse_term();
        for (;;) {
            if (lex.accept('+')) {
                auto n = mk(Node::Add);
                n->a = std::move(acc);
                n->b = parse_term();
                acc = std::move(n);
            } else if (lex.accept('-')) {
                auto n = mk(Node::Sub);
                n->a = std::move(acc);
                n->b = parse_term();
                acc = std::move(n);
            } else {
                return acc;
            }
        }
    }
    NodePtr parse_term() {
        NodePtr acc = parse_unary();
        while (lex.accept('*')) {
            auto n = mk(Node::Mul);
            n->a = std::move(acc);
            n->b = parse_unary();
            acc = std::move(n);
        }
        return acc;
    }
    NodePtr parse_unary() {
        if (lex.accept('-')) {
            auto n = mk(Node::Neg);
            n->a = parse_unary();
            return n;
        }
        if (lex.accept('+')) return parse_unary();
        return parse_power();
    }
    NodePtr parse_power() {
        NodePtr base = parse_primary();
        while (lex.accept('^')) {
            lex.skip_ws();
            size_t start = lex.i;
            while (lex.i < lex.s.size() &&
                   std::isdigit(static_cast<unsigned char>(lex.s[lex.i])))
                ++lex.i;
            if (start == lex.i)
                throw parse_error("exponent must be a nonnegative integer at " +
                                  at_pos(lex.s, lex.i));
            int e = std::stoi(lex.s.substr(start, lex.i - start));
            if (e > 1000)
                throw parse_error("exponent too large at " + at_pos(lex.s, start));
            auto n = mk(Node::Pow);
            n->a = std::move(base);
            n->exponent = e;
            base = std::move(n);
        }
        return base;
    }
    NodePtr parse_primary() {
        char ch = lex.peek();
        if (ch == '(') {
            lex.expect('(');
            NodePtr inner = parse_expr();
            lex.expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return parse_number();
        if (!std::isalpha(static_cast<unsigned char>(ch)) && ch != '_')
            throw parse_error(std::string("unexpected character '") + ch + "' at " +
                              at_pos(lex.s, lex.i));
        size_t pos = lex.i;
        std::string name = lex.ident();
        if (name == "s") return mk(Node::VarS);
        if (name == "i") {
            auto n = mk(Node::Num);
            n->value = cplx(0.0, 1.0);
            return n;
        }
        auto n = mk(Node::Name);
        n->name = std::move(name);
        n->pos = pos;
        return n;
    }
    NodePtr parse_number() {
        lex.skip_ws();
        size_t start = lex.i;
        while (lex.i < lex.s.size()) {
            char ch = lex.s[lex.i];
            if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
                ++lex.i;
            } else if ((ch == 'e' || ch == 'E') && lex.i + 1 < lex.s.size()) {
                char nxt = lex.s[lex.i + 1];
                if (std::isdigit(static_cast<unsigned char>(nxt)) || nxt == '+' || nxt == '-') {
                    lex.i += 2;
                    while (lex.i < lex.s.size() &&
                           std::isdigit(static_cast<unsigned char>(lex.s[lex.i])))
                        ++lex.i;
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        std::string digits = lex.s.substr(start, lex.i - start);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            throw parse_error("bad numeric literal '" + digits + "' at " +
                              at_pos(lex.s, start));
        auto n = mk(Node::Num);
        if (lex.i < lex.s.size() && lex.s[lex.i] == 'i') {
            ++lex.i;
            n->value = cplx(0.0, v);
        } else {
            n->value = cplx(v);
        }
        return n;
    }
};

// Lazy, memoized name resolution: definitions may appear in any order, and a
// name bound on the command line shadows its in-file definition.
struct Evaluator {
    const std::string& text;
    const std::map<std::string, NodePtr>& defs;
    const std::map<std::string, cplx>& params;
    std::map<std::string, Poly> memo;
    std::set<std::string> in_progress;
    std::map<std::string, cplx> used;

    Poly resolve(const std::string& name, size_t pos) {
        auto itp = params.find(name);
        if (itp != params.end()) {
            used[name] = itp->second;
            return Poly::constant(itp->second);
        }
        auto itm = memo.find(name);
        if (itm != memo.end()) return itm->second;
        auto itd = defs.find(name);
        if (itd == defs.end())
            throw parse_error("unknown name '" + name + "' at " + at_pos(text, pos));
        if (!in_progress.insert(name).second)
            throw parse_error("circular definition of '" + name + "'");
        Poly v = eval(*itd->second);
        in_progress.erase(name);
        memo[name] = v;
        return v;
    }
    Poly eval(const Node& n) {
        switch (n.kind) {
            case Node::Num: return Poly::constant(n.value);
            case Node::VarS: return Poly::variable();
            case Node::Name: return resolve(n.name, n.pos);
            case Node::Add: return eval(*n.a) + eval(*n.b);
            case Node::Sub: return eval(*n.a) - eval(*n.b);
            case Node::Mul: return eval(*n.a) * eval(*n.b);
            case Node::Neg: return Poly::constant(0.0) - eval(*n.a);
            case Node::Pow: return eval(*n.a).pow(n.exponent);
        }
        throw parse_error("corrupt expression tree");
    }
};

}  // namespace

ParsedModel parse_model(const std::string& text, const std::map<std::string, cplx>& params) {
    for (const char* r : {"s", "i", "f", "g"})
        if (params.count(r))
            throw parse_error(std::string("'") + r + "' cannot be bound as a parameter");
    Parser p(text);
    std::map<std::string, NodePtr> defs;
    while (!p.lex.eof()) {
        size_t pos = p.lex.i;
        std::string name = p.lex.ident();
        p.lex.expect('=');
        NodePtr value = p.parse_expr();
        if (!p.lex.eof()) p.lex.expect(';');  // terminator optional on the last statement
        if (name == "s" || name == "i")
            throw parse_error("cannot assign to '" + name + "' at " + at_pos(text, pos));
        if (defs.count(name))
            throw parse_error("redefinition of '" + name + "' at " + at_pos(text, pos));
        defs[name] = std::move(value);
    }
    if (!defs.count("f") || !defs.count("g"))
        throw parse_error("model must define both f and g");
    Evaluator ev{text, defs, params, {}, {}, {}};
    Poly f = ev.resolve("f", 0);
    Poly g = ev.resolve("g", 0);
    for (const auto& [name, node] : defs) {
        (void)node;
        if (!params.count(name)) ev.resolve(name, 0);  // validate unused definitions too
    }
    return ParsedModel{std::move(f), std::move(g), std::move(ev.used)};
}

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_cplx(cplx v) {
    if (v.imag() == 0.0) return format_double(v.real());
    if (v.real() == 0.0) return format_double(v.imag()) + "i";
    std::string out = "(" + format_double(v.real());
    out += v.imag() < 0 ? " - " : " + ";
    out += format_double(std::abs(v.imag())) + "i)";
    return out;
}

namespace {

std::string poly_text(const Poly& p) {
    int d = p.degree();
    if (d < 0) return "0";
    std::string out;
    bool first = true;
    for (int k = 0; k <= d; ++k) {
        cplx v = p.c[k];
        if (std::abs(v) == 0.0) continue;
        if (!first) out += " + ";
        first = false;
        std::string coeff = format_cplx(v);
        if (k == 0) {
            out += coeff;
        } else {
            std::string svar = k == 1 ? "s" : "s^" + std::to_string(k);
            if (v == cplx(1.0))
                out += svar;
            else
                out += coeff + "*" + svar;
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace

std::string pretty_print(const Poly& f, const Poly& g) {
    return "f = " + poly_text(f) + ";\ng = " + poly_text(g) + ";\n";
}

}  // namespace jl
