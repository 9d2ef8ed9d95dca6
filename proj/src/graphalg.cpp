#include "cpr/graphalg.hpp"

#include "cpr/errors.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace cpr {

LpaGraphPtr LpaGraph::create(const FiniteGraph& graph) {
    graph.validate();
    if (graph.has_infinite_edges()) throw InfiniteGraph("Leavitt path algebra arithmetic needs finite multiplicities");
    auto out = std::make_shared<LpaGraph>();
    out->g_ = graph.expanded();
    const FiniteGraph& g = out->g_;
    out->out_.resize(g.vertices.size());
    out->special_.assign(g.vertices.size(), -1);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        int s = g.vertex_index(g.edges[e].src), t = g.vertex_index(g.edges[e].tgt);
        out->src_.push_back(s);
        out->tgt_.push_back(t);
        out->out_[static_cast<std::size_t>(s)].push_back(static_cast<int>(e));
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        for (int e : out->out_[v]) {
            int& sp = out->special_[v];
            if (sp < 0 || g.edges[static_cast<std::size_t>(e)].name < g.edges[static_cast<std::size_t>(sp)].name) sp = e;
        }
    return out;
}

bool LpaGraph::is_path(const std::vector<int>& path) const {
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        if (tgt(path[k]) != src(path[k + 1])) return false;
    return true;
}

bool LpaGraph::has_cycle() const {
    // Kahn: a cycle survives repeated removal of vertices without in-edges
    std::size_t n = g_.vertices.size();
    std::vector<int> indeg(n, 0);
    for (int t : tgt_) ++indeg[static_cast<std::size_t>(t)];
    std::vector<int> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push_back(static_cast<int>(v));
    std::size_t removed = 0;
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        ++removed;
        for (int e : out_[static_cast<std::size_t>(v)])
            if (--indeg[static_cast<std::size_t>(tgt(e))] == 0) ready.push_back(tgt(e));
    }
    return removed < n;
}

// ------------------------------------------------------------ elements

void LpaElement::add_term(const LpaMonomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

namespace {

void same_graph(const LpaElement& a, const LpaElement& b) {
    if (a.graph() != b.graph()) throw SystemMismatch("Leavitt elements over different graphs");
}

int right_vertex(const LpaGraph& g, const LpaMonomial& m) { return m.beta.empty() ? m.vertex : g.src(m.beta.front()); }
int left_vertex(const LpaGraph& g, const LpaMonomial& m) { return m.alpha.empty() ? m.vertex : g.src(m.alpha.front()); }

// (alpha beta^*)(gamma delta^*) before any rewriting
std::optional<LpaMonomial> raw_product(const LpaGraph& g, const LpaMonomial& a, const LpaMonomial& b) {
    if (right_vertex(g, a) != left_vertex(g, b)) return std::nullopt;
    std::size_t k = std::min(a.beta.size(), b.alpha.size());
    if (!std::equal(a.beta.begin(), a.beta.begin() + static_cast<std::ptrdiff_t>(k), b.alpha.begin()))
        return std::nullopt;
    LpaMonomial out;
    if (a.beta.size() <= b.alpha.size()) {
        out.alpha = a.alpha;
        out.alpha.insert(out.alpha.end(), b.alpha.begin() + static_cast<std::ptrdiff_t>(k), b.alpha.end());
        out.beta = b.beta;
        out.vertex = b.vertex;
    } else {
        out.alpha = a.alpha;
        out.beta = b.beta;
        out.beta.insert(out.beta.end(), a.beta.begin() + static_cast<std::ptrdiff_t>(k), a.beta.end());
        out.vertex = a.vertex;
    }
    return out;
}

// One rewrite of alpha' e (beta' e)^* with e special at s(e):
//   alpha' beta'^* - sum over the other edges f of s(e) of alpha' f (beta' f)^*
void rewrite(const LpaGraph& g, const LpaMonomial& m, const Rational& c, std::map<LpaMonomial, Rational>& into) {
    auto add = [&](const LpaMonomial& k, const Rational& x) {
        auto [it, fresh] = into.emplace(k, x);
        if (!fresh) {
            it->second += x;
            if (sgn(it->second) == 0) into.erase(it);
        }
    };
    int e = m.alpha.back();
    int w = g.src(e);
    LpaMonomial base{std::vector<int>(m.alpha.begin(), m.alpha.end() - 1),
                     std::vector<int>(m.beta.begin(), m.beta.end() - 1), w};
    add(base, c);
    for (int f : g.emitted(w)) {
        if (f == e) continue;
        LpaMonomial other = base;
        other.alpha.push_back(f);
        other.beta.push_back(f);
        other.vertex = g.tgt(f);
        add(other, -c);
    }
}

} // namespace

bool lpa_is_normal(const LpaGraph& g, const LpaMonomial& m) {
    if (m.alpha.empty() || m.beta.empty()) return true;
    int e = m.alpha.back();
    return !(e == m.beta.back() && g.special(g.src(e)) == e);
}

LpaElement lpa_normalize(const LpaElement& x, Reduction how) {
    const LpaGraph& g = *x.graph();
    std::map<LpaMonomial, Rational> t = x.terms();
    for (;;) {
        auto bad = [&](const auto& kv) { return !lpa_is_normal(g, kv.first); };
        LpaMonomial m;
        Rational c;
        if (how == Reduction::ascending) {
            auto it = std::find_if(t.begin(), t.end(), bad);
            if (it == t.end()) break;
            m = it->first;
            c = it->second;
            t.erase(it);
        } else {
            auto it = std::find_if(t.rbegin(), t.rend(), bad);
            if (it == t.rend()) break;
            m = it->first;
            c = it->second;
            t.erase(std::next(it).base());
        }
        rewrite(g, m, c, t);
    }
    LpaElement out(x.graph());
    for (const auto& [m, c] : t) out.add_term(m, c);
    return out;
}

LpaElement lpa_mul(const LpaElement& a, const LpaElement& b, Reduction how) {
    same_graph(a, b);
    const LpaGraph& g = *a.graph();
    LpaElement acc(a.graph());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            auto m = raw_product(g, ma, mb);
            if (!m) continue;
            if (how == Reduction::descending_eager) {
                LpaElement one(a.graph());
                one.add_term(*m, ca * cb);
                LpaElement red = lpa_normalize(one, how);
                for (const auto& [k, c] : red.terms()) acc.add_term(k, c);
            } else {
                acc.add_term(*m, ca * cb);
            }
        }
    return how == Reduction::ascending ? lpa_normalize(acc, how) : acc;
}

LpaElement LpaElement::operator+(const LpaElement& o) const {
    same_graph(*this, o);
    LpaElement out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

LpaElement LpaElement::operator-(const LpaElement& o) const { return *this + o.scaled(-1); }

LpaElement LpaElement::operator*(const LpaElement& o) const { return lpa_mul(*this, o); }

LpaElement LpaElement::scaled(const Rational& c) const {
    LpaElement out(g_);
    for (const auto& [m, x] : terms_) out.add_term(m, x * c);
    return out;
}

bool LpaElement::operator==(const LpaElement& o) const {
    same_graph(*this, o);
    return lpa_normalize(*this).terms_ == lpa_normalize(o).terms_;
}

LpaElement lpa_vertex(const LpaGraphPtr& g, int v) {
    LpaElement out(g);
    out.add_term(LpaMonomial{{}, {}, v}, 1);
    return out;
}

LpaElement lpa_x(const LpaGraphPtr& g, int e) { return lpa_monomial(g, {e}, {}); }

LpaElement lpa_y(const LpaGraphPtr& g, int e) { return lpa_monomial(g, {}, {e}); }

LpaElement lpa_monomial(const LpaGraphPtr& g, std::vector<int> alpha, std::vector<int> beta) {
    if (!g->is_path(alpha) || !g->is_path(beta)) throw PathError("edges do not compose into a path");
    LpaElement out(g);
    if (alpha.empty() && beta.empty()) throw PathError("an empty monomial needs a vertex");
    int ra = alpha.empty() ? -1 : g->tgt(alpha.back());
    int rb = beta.empty() ? -1 : g->tgt(beta.back());
    if (ra >= 0 && rb >= 0 && ra != rb) return out;
    out.add_term(LpaMonomial{std::move(alpha), std::move(beta), ra >= 0 ? ra : rb}, 1);
    return lpa_normalize(out);
}

// ------------------------------------------------------------ dimensions

namespace {

// all paths of length <= max_len, grouped by range vertex
std::vector<std::vector<std::vector<int>>> paths_by_range(const LpaGraph& g, int max_len) {
    std::size_t n = g.graph().vertices.size();
    std::vector<std::vector<std::vector<int>>> out(n);
    std::vector<std::vector<int>> layer;
    for (std::size_t v = 0; v < n; ++v) out[v].push_back({});
    for (std::size_t e = 0; e < g.graph().edges.size(); ++e) layer.push_back({static_cast<int>(e)});
    for (int len = 1; len <= max_len && !layer.empty(); ++len) {
        std::vector<std::vector<int>> next;
        for (auto& p : layer) {
            out[static_cast<std::size_t>(g.tgt(p.back()))].push_back(p);
            if (len < max_len)
                for (int f : g.emitted(g.tgt(p.back()))) {
                    auto q = p;
                    q.push_back(f);
                    next.push_back(std::move(q));
                }
        }
        layer = std::move(next);
    }
    return out;
}

} // namespace

std::map<std::pair<int, int>, long> lpa_dim_upto(const FiniteGraph& graph, int max_len) {
    auto g = LpaGraph::create(graph);
    auto by_range = paths_by_range(*g, max_len);
    std::map<std::pair<int, int>, long> out;
    for (std::size_t v = 0; v < by_range.size(); ++v)
        for (const auto& a : by_range[v])
            for (const auto& b : by_range[v])
                if (lpa_is_normal(*g, LpaMonomial{a, b, static_cast<int>(v)}))
                    ++out[{static_cast<int>(a.size()), static_cast<int>(b.size())}];
    return out;
}

std::map<int, long> lpa_dim_by_degree(const FiniteGraph& g, int max_len) {
    std::map<int, long> out;
    for (const auto& [k, c] : lpa_dim_upto(g, max_len)) out[k.first - k.second] += c;
    return out;
}

std::optional<long> lpa_dim_total(const FiniteGraph& graph) {
    auto g = LpaGraph::create(graph);
    if (g->has_cycle()) return std::nullopt;
    long total = 0;
    // an acyclic graph has no path longer than the vertex count
    for (const auto& [k, c] : lpa_dim_upto(graph, static_cast<int>(graph.vertices.size()))) total += c;
    return total;
}

std::string lpa_to_string(const LpaElement& x) {
    if (x.is_zero()) return "0";
    const FiniteGraph& g = x.graph()->graph();
    auto path = [&](const std::vector<int>& p) {
        std::string s;
        for (int e : p) s += (s.empty() ? "" : " ") + g.edges[static_cast<std::size_t>(e)].name;
        return s;
    };
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : x.terms()) {
        Rational a = abs(c);
        if (sgn(c) < 0) os << (first ? "-" : " - ");
        else if (!first) os << " + ";
        first = false;
        if (a != 1) os << a.get_str() << "*";
        if (m.alpha.empty() && m.beta.empty()) {
            os << "p(" << g.vertices[static_cast<std::size_t>(m.vertex)] << ")";
            continue;
        }
        if (!m.alpha.empty()) os << "x(" << path(m.alpha) << ")";
        if (!m.alpha.empty() && !m.beta.empty()) os << "*";
        if (!m.beta.empty()) os << "y(" << path(m.beta) << ")";
    }
    return os.str();
}

LpaElement lpa_from_toeplitz(const ToeplitzElement& x, const LpaGraphPtr& g) {
    const ToeplitzRing& ring = *x.ring();
    const RSystem& sys = ring.system();
    const FiniteGraph& lg = g->graph();
    auto edge = [&](Side side, int letter) {
        const auto& labels = side == Side::Q ? sys.q.labels : sys.p.labels;
        int e = lg.edge_index(labels[static_cast<std::size_t>(letter)]);
        if (e < 0) throw SystemMismatch("edge " + labels[static_cast<std::size_t>(letter)] + " is not in the graph");
        return e;
    };
    LpaElement out(g);
    for (const auto& [gr, v] : x.components()) {
        const ComponentSpace& cs = ring.component(gr);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (sgn(v[i]) == 0) continue;
            auto [qa, pa] = cs.pure[i];
            if (gr.m == 0 && gr.n == 0) {
                int vx = lg.vertex_index(sys.ring.labels[qa]);
                if (vx < 0) throw SystemMismatch("vertex " + sys.ring.labels[qa] + " is not in the graph");
                out = out + lpa_vertex(g, vx).scaled(v[i]);
                continue;
            }
            std::vector<int> alpha, beta;
            if (gr.m > 0)
                for (int l : ring.tower().space(Side::Q, gr.m).words[qa]) alpha.push_back(edge(Side::Q, l));
            if (gr.n > 0)
                for (int l : ring.tower().space(Side::P, gr.n).words[pa]) beta.push_back(edge(Side::P, l));
            // S(p_1) ... S(p_n) is (e_n ... e_1)^*
            std::reverse(beta.begin(), beta.end());
            out = out + lpa_monomial(g, alpha, beta).scaled(v[i]);
        }
    }
    return out;
}

// ------------------------------------------------------------ vertex sets

namespace {

// number of edges out of v, nullopt for infinitely many; `filter` selects edges
std::optional<long> emit_count(const FiniteGraph& g, const std::string& v,
                               const std::function<bool(const Edge&)>& filter) {
    long n = 0;
    for (const auto& e : g.edges) {
        if (e.src != v || !filter(e)) continue;
        if (!e.mult) return std::nullopt;
        n += *e.mult;
    }
    return n;
}

} // namespace

bool is_hereditary(const FiniteGraph& g, const VertexSet& h) {
    for (const auto& e : g.edges)
        if (h.count(e.src) && !h.count(e.tgt)) return false;
    return true;
}

bool is_saturated(const FiniteGraph& g, const VertexSet& h) {
    for (const auto& v : g.vertices) {
        if (h.count(v)) continue;
        auto all = emit_count(g, v, [](const Edge&) { return true; });
        if (!all || *all == 0) continue;
        auto escape = emit_count(g, v, [&](const Edge& e) { return !h.count(e.tgt); });
        if (escape && *escape == 0) return false;
    }
    return true;
}

VertexSet hereditary_saturated_closure(const FiniteGraph& g, const VertexSet& seed) {
    VertexSet h = seed;
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& e : g.edges)
            if (h.count(e.src) && h.insert(e.tgt).second) grew = true;
        for (const auto& v : g.vertices) {
            if (h.count(v)) continue;
            auto all = emit_count(g, v, [](const Edge&) { return true; });
            if (!all || *all == 0) continue;
            auto escape = emit_count(g, v, [&](const Edge& e) { return !h.count(e.tgt); });
            if (escape && *escape == 0) grew = h.insert(v).second || grew;
        }
    }
    return h;
}

std::vector<VertexSet> enumerate_hs(const FiniteGraph& g) {
    // Every hereditary saturated set is reached from the closure of the empty
    // set by adding one vertex at a time and closing again.
    std::set<VertexSet> seen;
    std::vector<VertexSet> todo{hereditary_saturated_closure(g, {})};
    seen.insert(todo.front());
    while (!todo.empty()) {
        VertexSet h = std::move(todo.back());
        todo.pop_back();
        for (const auto& v : g.vertices) {
            if (h.count(v)) continue;
            VertexSet bigger = h;
            bigger.insert(v);
            bigger = hereditary_saturated_closure(g, bigger);
            if (seen.insert(bigger).second) todo.push_back(std::move(bigger));
        }
    }
    std::vector<VertexSet> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(), [](const VertexSet& a, const VertexSet& b) { return a.size() < b.size(); });
    return out;
}

VertexSet breaking_vertices(const FiniteGraph& g, const VertexSet& h) {
    VertexSet out;
    for (const auto& v : g.vertices) {
        if (h.count(v)) continue;
        if (emit_count(g, v, [](const Edge&) { return true; })) continue;  // not an infinite emitter
        auto escape = emit_count(g, v, [&](const Edge& e) { return !h.count(e.tgt); });
        if (escape && *escape > 0) out.insert(v);
    }
    return out;
}

std::vector<IdealPair> enumerate_ideal_pairs(const FiniteGraph& g) {
    std::vector<IdealPair> out;
    for (const auto& h : enumerate_hs(g)) {
        VertexSet bh = breaking_vertices(g, h);
        std::vector<std::string> b(bh.begin(), bh.end());
        if (b.size() > 20) throw std::invalid_argument("too many breaking vertices to enumerate");
        for (std::size_t mask = 0; mask < (std::size_t{1} << b.size()); ++mask) {
            IdealPair p{h, {}};
            for (std::size_t k = 0; k < b.size(); ++k)
                if (mask >> k & 1) p.s.insert(b[k]);
            out.push_back(std::move(p));
        }
    }
    return out;
}

bool pair_order(const IdealPair& a, const IdealPair& b) {
    if (!std::includes(b.h.begin(), b.h.end(), a.h.begin(), a.h.end())) return false;
    for (const auto& v : a.s)
        if (!b.h.count(v) && !b.s.count(v)) return false;
    return true;
}

FiniteGraph quotient_graph(const FiniteGraph& g, const VertexSet& h) {
    FiniteGraph out;
    for (const auto& v : g.vertices)
        if (!h.count(v)) out.vertices.push_back(v);
    for (const auto& e : g.edges)
        if (!h.count(e.tgt) && !h.count(e.src)) out.edges.push_back(e);
    return out;
}

TPair ideal_pair_to_tpair(const RSystem& sys, const IdealPair& pair) {
    if (!sys.graph) throw SystemMismatch("not a graph system");
    const FiniteGraph& g = *sys.graph;
    std::vector<std::size_t> ii, jj;
    for (std::size_t v = 0; v < sys.ring.dim(); ++v) {
        const std::string& name = sys.ring.labels[v];
        auto out = emit_count(g, name, [](const Edge&) { return true; });
        bool regular = out && *out > 0;
        if (pair.h.count(name)) ii.push_back(v);
        if (pair.h.count(name) || pair.s.count(name) || regular) jj.push_back(v);
    }
    return {Subspace::coordinates(sys.ring.dim(), ii), Subspace::coordinates(sys.ring.dim(), jj)};
}

} // namespace cpr
