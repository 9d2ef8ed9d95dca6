#include "cpr/expr.hpp"

#include "cpr/errors.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace cpr {

namespace {

std::string where(int line, int col) { return "line " + std::to_string(line) + ", column " + std::to_string(col); }

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    ExprNode run() {
        skip();
        if (at_end()) fail("empty expression");
        ExprNode e = expr();
        skip();
        if (!at_end()) fail(std::string("unexpected '") + s_[i_] + "'");
        return e;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;

    bool at_end() const { return i_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[i_]; }
    char peek2() const { return i_ + 1 < s_.size() ? s_[i_ + 1] : '\0'; }

    void advance() {
        if (s_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }
    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(where(line_, col_) + ": " + msg); }

    void expect(char c) {
        skip();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    static bool label_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
    }

    std::string label() {
        skip();
        std::string out;
        while (!at_end() && label_char(peek())) {
            out += peek();
            advance();
        }
        if (out.empty()) fail("expected a label");
        return out;
    }

    ExprNode expr() {
        ExprNode sum;
        sum.kind = ExprNode::Kind::sum;
        sum.line = line_;
        sum.column = col_;
        int sign = 1;
        skip();
        if (peek() == '-' || peek() == '+') {
            sign = peek() == '-' ? -1 : 1;
            advance();
        }
        sum.terms.emplace_back(sign, term());
        for (;;) {
            skip();
            if (peek() != '+' && peek() != '-') break;
            sign = peek() == '-' ? -1 : 1;
            advance();
            sum.terms.emplace_back(sign, term());
        }
        return sum;
    }

    std::optional<Rational> rational() {
        skip();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) return std::nullopt;
        std::string num;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            num += peek();
            advance();
        }
        std::string den = "1";
        if (peek() == '/') {
            advance();
            den.clear();
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                den += peek();
                advance();
            }
            if (den.empty()) fail("expected a denominator");
        }
        Rational r;
        try {
            r = parse_rational(num + "/" + den);
        } catch (const std::exception&) {
            fail("bad rational " + num + "/" + den);
        }
        return r;
    }

    bool factor_starts() {
        skip();
        char c = peek();
        if (c == '(') return true;
        if ((c == 'R' || c == 'Q' || c == 'P') && peek2() == ':') return true;
        if ((c == 'p' || c == 'x' || c == 'y') && peek2() == '(') return true;
        return false;
    }

    ExprNode term() {
        ExprNode t;
        t.kind = ExprNode::Kind::product;
        skip();
        t.line = line_;
        t.column = col_;
        if (auto r = rational()) {
            t.coef = *r;
            skip();
            if (peek() == '*') {
                advance();
                if (!factor_starts()) fail("expected a generator after '*'");
            } else if (!factor_starts()) {
                t.kind = ExprNode::Kind::scalar;
                return t;
            }
        }
        t.factors.push_back(factor());
        for (;;) {
            skip();
            if (peek() != '*') break;
            advance();
            t.factors.push_back(factor());
        }
        return t;
    }

    ExprNode factor() {
        skip();
        int line = line_, col = col_;
        char c = peek();
        if (c == '(') {
            advance();
            ExprNode e = expr();
            expect(')');
            return e;
        }
        ExprNode g;
        g.kind = ExprNode::Kind::generator;
        g.line = line;
        g.column = col;
        if ((c == 'R' || c == 'Q' || c == 'P') && peek2() == ':') {
            g.prefix = c;
            advance();
            advance();
            g.labels.push_back(label());
            return g;
        }
        if ((c == 'p' || c == 'x' || c == 'y') && peek2() == '(') {
            g.prefix = c;
            advance();
            advance();
            g.labels.push_back(label());
            for (;;) {
                skip();
                if (peek() == ')') break;
                if (c == 'p') fail("p(...) takes a single vertex");
                g.labels.push_back(label());
            }
            advance();
            return g;
        }
        if (at_end()) fail("unexpected end of input");
        fail(std::string("unexpected '") + c + "'");
    }
};

template <class T>
T evaluate_node(const ExprNode& e, const std::function<T(const ExprNode&)>& gen, const std::function<T()>& zero,
                const std::function<T(const Rational&, const ExprNode&)>& scalar) {
    switch (e.kind) {
    case ExprNode::Kind::sum: {
        T acc = zero();
        for (const auto& [sign, t] : e.terms) {
            T v = evaluate_node<T>(t, gen, zero, scalar);
            acc = sign < 0 ? acc - v : acc + v;
        }
        return acc;
    }
    case ExprNode::Kind::scalar: return scalar(e.coef, e);
    case ExprNode::Kind::generator: return gen(e);
    case ExprNode::Kind::product: {
        T acc = evaluate_node<T>(e.factors.front(), gen, zero, scalar);
        for (std::size_t k = 1; k < e.factors.size(); ++k) acc = acc * evaluate_node<T>(e.factors[k], gen, zero, scalar);
        return e.coef == 1 ? acc : acc.scaled(e.coef);
    }
    }
    return zero();
}

[[noreturn]] void unknown(const ExprNode& e, const std::string& what) {
    throw UnknownGenerator(where(e.line, e.column) + ": " + what);
}

} // namespace

ExprNode parse_expr(const std::string& text) { return Parser(text).run(); }

ToeplitzElement eval_toeplitz(const ExprNode& root, const RingPtr& ring) {
    const RSystem& sys = ring->system();
    auto index = [&](const std::vector<std::string>& labels, const std::string& l, const ExprNode& e, const char* what) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return i;
        unknown(e, std::string("no ") + what + " named '" + l + "'");
    };
    auto gen = [&](const ExprNode& e) -> ToeplitzElement {
        std::size_t rd = sys.ring.dim(), dq = sys.q.dim(), dp = sys.p.dim();
        switch (e.prefix) {
        case 'R':
        case 'p': return embed(ring, Kind::R, unit_vec(rd, index(sys.ring.labels, e.labels[0], e, "ring basis element")));
        case 'Q': return embed(ring, Kind::Q, unit_vec(dq, index(sys.q.labels, e.labels[0], e, "Q basis element")));
        case 'P': return embed(ring, Kind::P, unit_vec(dp, index(sys.p.labels, e.labels[0], e, "P basis element")));
        default: break;
        }
        if (!sys.graph) unknown(e, "path sugar needs a graph system");
        const FiniteGraph& g = *sys.graph;
        for (std::size_t k = 0; k + 1 < e.labels.size(); ++k) {
            int a = g.edge_index(e.labels[k]), b = g.edge_index(e.labels[k + 1]);
            if (a >= 0 && b >= 0 && g.edges[static_cast<std::size_t>(a)].tgt != g.edges[static_cast<std::size_t>(b)].src)
                throw PathError(where(e.line, e.column) + ": " + e.labels[k] + " " + e.labels[k + 1] + " is not a path");
        }
        std::vector<std::size_t> idx;
        for (const auto& l : e.labels) idx.push_back(index(sys.q.labels, l, e, "edge"));
        ToeplitzElement out = embed(ring, e.prefix == 'x' ? Kind::Q : Kind::P, unit_vec(dq, idx.front()));
        if (e.prefix == 'x') {
            for (std::size_t k = 1; k < idx.size(); ++k) out = out * embed(ring, Kind::Q, unit_vec(dq, idx[k]));
        } else {
            for (std::size_t k = 1; k < idx.size(); ++k) out = embed(ring, Kind::P, unit_vec(dp, idx[k])) * out;
        }
        return out;
    };
    auto zero = [&] { return ToeplitzElement(ring); };
    auto scalar = [&](const Rational& c, const ExprNode& e) {
        if (sgn(c) == 0) return ToeplitzElement(ring);
        if (!sys.ring.unital) unknown(e, "a scalar needs a unital ring");
        return embed(ring, Kind::R, scaled(sys.ring.unit, c));
    };
    return evaluate_node<ToeplitzElement>(root, gen, zero, scalar);
}

LpaElement eval_lpa(const ExprNode& root, const LpaGraphPtr& lg) {
    const FiniteGraph& g = lg->graph();
    auto vertex = [&](const std::string& l, const ExprNode& e) {
        int v = g.vertex_index(l);
        if (v < 0) unknown(e, "no vertex named '" + l + "'");
        return v;
    };
    auto edges = [&](const ExprNode& e) {
        std::vector<int> out;
        for (const auto& l : e.labels) {
            int k = g.edge_index(l);
            if (k < 0) unknown(e, "no edge named '" + l + "'");
            out.push_back(k);
        }
        if (!lg->is_path(out)) throw PathError(where(e.line, e.column) + ": the edges do not form a path");
        return out;
    };
    auto gen = [&](const ExprNode& e) -> LpaElement {
        switch (e.prefix) {
        case 'R':
        case 'p': return lpa_vertex(lg, vertex(e.labels[0], e));
        case 'Q':
        case 'x': return lpa_monomial(lg, edges(e), {});
        case 'P': return lpa_y(lg, edges(e).front());
        case 'y': return lpa_monomial(lg, {}, edges(e));
        default: unknown(e, "unknown generator");
        }
    };
    auto zero = [&] { return LpaElement(lg); };
    auto scalar = [&](const Rational& c, const ExprNode&) {
        LpaElement out(lg);
        for (std::size_t v = 0; v < g.vertices.size(); ++v) out = out + lpa_vertex(lg, static_cast<int>(v)).scaled(c);
        return out;
    };
    return evaluate_node<LpaElement>(root, gen, zero, scalar);
}

ToeplitzElement parse_toeplitz(const std::string& text, const RingPtr& ring) {
    return eval_toeplitz(parse_expr(text), ring);
}

LpaElement parse_lpa(const std::string& text, const LpaGraphPtr& g) { return eval_lpa(parse_expr(text), g); }

std::string toeplitz_to_string(const ToeplitzElement& x) {
    if (x.is_zero()) return "0";
    const ToeplitzRing& ring = *x.ring();
    const RSystem& sys = ring.system();
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, v] : x.components()) {
        const ComponentSpace& cs = ring.component(g);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (sgn(v[i]) == 0) continue;
            Rational a = abs(v[i]);
            if (sgn(v[i]) < 0) os << (first ? "-" : " - ");
            else if (!first) os << " + ";
            first = false;
            if (a != 1) os << a.get_str() << "*";
            auto [qa, pa] = cs.pure[i];
            if (g.m == 0 && g.n == 0) {
                os << "R:" << sys.ring.labels[qa];
                continue;
            }
            std::string sep;
            if (g.m > 0)
                for (int l : ring.tower().space(Side::Q, g.m).words[qa]) {
                    os << sep << "Q:" << sys.q.labels[static_cast<std::size_t>(l)];
                    sep = "*";
                }
            if (g.n > 0)
                for (int l : ring.tower().space(Side::P, g.n).words[pa]) {
                    os << sep << "P:" << sys.p.labels[static_cast<std::size_t>(l)];
                    sep = "*";
                }
        }
    }
    return os.str();
}

} // namespace cpr
