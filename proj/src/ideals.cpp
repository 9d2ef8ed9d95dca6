#include "cpr/ideals.hpp"

#include "cpr/errors.hpp"
#include "cpr/finrank.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace cpr {

std::vector<std::string> TPairFlags::failures() const {
    std::vector<std::string> out;
    if (!i_two_sided) out.push_back("I is not a two-sided ideal");
    if (!i_invariant) out.push_back("I is not psi-invariant");
    if (!i_in_j) out.push_back("I is not contained in J");
    if (!j_two_sided) out.push_back("J is not a two-sided ideal");
    if (!j_compatible) out.push_back("J/I is not psi-compatible in the quotient system");
    if (!j_faithful) out.push_back("J/I is not faithful in the quotient system");
    return out;
}

bool is_psi_invariant(const RSystem& sys, const Subspace& i) {
    if (!is_two_sided(sys.ring, i)) throw NotTwoSided("psi-invariance is defined for two-sided ideals");
    std::size_t dq = sys.q.dim(), dp = sys.p.dim();
    for (const auto& x : i.basis())
        for (std::size_t q = 0; q < dq; ++q) {
            Vec xq = sys.q.act_left(x, unit_vec(dq, q));
            for (std::size_t p = 0; p < dp; ++p)
                if (!i.contains(sys.psi.apply(unit_vec(dp, p), xq))) return false;
        }
    return true;
}

namespace {

std::vector<std::string> pick_labels(const std::vector<std::string>& labels, const QuotientSpace& qs) {
    std::vector<std::string> out;
    for (std::size_t c : qs.representative_columns()) out.push_back(labels[c]);
    return out;
}

bool is_coordinate(const Subspace& s) {
    for (const auto& b : s.basis())
        if (std::count_if(b.begin(), b.end(), [](const Rational& x) { return sgn(x) != 0; }) != 1) return false;
    return true;
}

} // namespace

QuotientSystem quotient_system(const SystemPtr& sys, const Subspace& i) {
    const RSystem& S = *sys;
    const auto& R = S.ring;
    std::size_t rd = R.dim(), dq = S.q.dim(), dp = S.p.dim();
    if (i.ambient_dim() != rd) throw DimensionMismatch("ideal is not a subspace of R");
    if (!is_psi_invariant(S, i)) throw NotInvariant("I is not psi-invariant");

    std::vector<Vec> qi, ip;
    for (const auto& x : i.basis()) {
        for (std::size_t q = 0; q < dq; ++q) qi.push_back(S.q.act_right(unit_vec(dq, q), x));
        for (std::size_t p = 0; p < dp; ++p) ip.push_back(S.p.act_left(x, unit_vec(dp, p)));
    }
    Subspace QI = Subspace::span(dq, qi), IP = Subspace::span(dp, ip);
    // the induced actions need IQ in QI and PI in IP
    for (const auto& x : i.basis()) {
        for (std::size_t q = 0; q < dq; ++q)
            if (!QI.contains(S.q.act_left(x, unit_vec(dq, q))))
                throw NotInvariant("IQ is not contained in QI, so R/I does not act on Q/QI");
        for (std::size_t p = 0; p < dp; ++p)
            if (!IP.contains(S.p.act_right(unit_vec(dp, p), x)))
                throw NotInvariant("PI is not contained in IP, so R/I does not act on P/IP");
    }
    QuotientSpace QR(rd, i), QQ(dq, QI), QP(dp, IP);
    const auto& cr = QR.representative_columns();
    const auto& cq = QQ.representative_columns();
    const auto& cp = QP.representative_columns();

    RSystem out;
    out.ring.labels = pick_labels(R.labels, QR);
    out.ring.mult.assign(cr.size(), std::vector<Vec>(cr.size()));
    for (std::size_t a = 0; a < cr.size(); ++a)
        for (std::size_t b = 0; b < cr.size(); ++b) out.ring.mult[a][b] = QR.project(R.mult[cr[a]][cr[b]]);
    if (R.unital && !cr.empty()) {
        out.ring.unital = true;
        out.ring.unit = QR.project(R.unit);
    }
    auto build = [&](const StructuredBimodule& M, const QuotientSpace& QM, const std::vector<std::size_t>& cm) {
        StructuredBimodule B;
        B.labels = pick_labels(M.labels, QM);
        B.left.assign(cr.size(), std::vector<Vec>(cm.size()));
        B.right.assign(cm.size(), std::vector<Vec>(cr.size()));
        for (std::size_t a = 0; a < cr.size(); ++a)
            for (std::size_t m = 0; m < cm.size(); ++m) {
                B.left[a][m] = QM.project(M.left[cr[a]][cm[m]]);
                B.right[m][a] = QM.project(M.right[cm[m]][cr[a]]);
            }
        return B;
    };
    out.q = build(S.q, QQ, cq);
    out.p = build(S.p, QP, cp);
    out.psi.psi.assign(cp.size(), std::vector<Vec>(cq.size()));
    for (std::size_t a = 0; a < cp.size(); ++a)
        for (std::size_t b = 0; b < cq.size(); ++b) out.psi.psi[a][b] = QR.project(S.psi.psi[cp[a]][cq[b]]);

    // A hereditary vertex set of a graph: the quotient is the graph system of
    // the restriction to the remaining vertices.
    if (S.graph && is_coordinate(i)) {
        FiniteGraph g;
        for (std::size_t c : cr) g.vertices.push_back(S.graph->vertices[c]);
        for (std::size_t c : cq) g.edges.push_back(S.graph->edges[c]);
        out.graph = g;
        out.provenance = Provenance::graph;
    }

    QuotientSystem qs;
    qs.parent = sys;
    qs.i = i;
    qs.system = std::make_shared<const RSystem>(std::move(out));
    qs.pr_r = QR.project_matrix();
    qs.pr_q = QQ.project_matrix();
    qs.pr_p = QP.project_matrix();
    return qs;
}

Subspace image_in_quotient(const QuotientSystem& qs, const Subspace& j) {
    std::vector<Vec> img;
    for (const auto& b : j.basis()) img.push_back(qs.pr_r.apply(b));
    return Subspace::span(qs.pr_r.rows(), img);
}

TPairFlags validate_tpair(const SystemPtr& sys, const Subspace& i, const Subspace& j) {
    const auto& R = sys->ring;
    TPairFlags f;
    f.i_two_sided = is_two_sided(R, i);
    f.j_two_sided = is_two_sided(R, j);
    f.i_in_j = i.is_subset_of(j);
    if (!f.i_two_sided) return f;
    f.i_invariant = is_psi_invariant(*sys, i);
    if (!f.i_invariant) return f;
    QuotientSystem qs;
    try {
        qs = quotient_system(sys, i);
    } catch (const NotInvariant&) {
        f.i_invariant = false;
        return f;
    }
    TensorTower qtw(qs.system, 1);
    CompatibleIdeal ci = validate_ideal(qtw, image_in_quotient(qs, j));
    f.j_compatible = ci.is_psi_compatible;
    f.j_faithful = ci.is_faithful;
    return f;
}

TPair tpair_meet(const TPair& a, const TPair& b) { return {a.i.intersect(b.i), a.j.intersect(b.j)}; }

bool tpair_leq(const TPair& a, const TPair& b) { return a.i.is_subset_of(b.i) && a.j.is_subset_of(b.j); }

TPair tpair_join(const SystemPtr& sys, const TPair& a, const TPair& b, int bound, JoinInfo* info) {
    const auto& R = sys->ring;
    if (bound < 1) throw std::invalid_argument("join bound must be positive");
    Subspace i0 = ideal_closure(R, a.i.sum(b.i));
    Subspace j = ideal_closure(R, a.j.sum(b.j));
    QuotientSystem qs = quotient_system(sys, i0);
    TensorTower qtw(qs.system, bound);
    Subspace ji = image_in_quotient(qs, j);
    std::size_t nj = j.dim();
    std::vector<Vec> ys;
    for (const auto& x : j.basis()) ys.push_back(qs.pr_r.apply(x));

    // In J-coordinates: the conditions on Delta_I^m(x) for m = 1..bound.
    Subspace keep = Subspace::full(nj);
    Subspace prev_kernel(nj), kern(nj);
    for (int m = 1; m <= bound; ++m) {
        std::size_t dq = qtw.dim(Side::Q, m);
        Matrix A(dq * dq, nj);
        for (std::size_t k = 0; k < nj; ++k)
            for (std::size_t q = 0; q < dq; ++q) {
                Vec v = qtw.act_left(Side::Q, m, ys[k], unit_vec(dq, q));
                for (std::size_t c = 0; c < dq; ++c) A(q * dq + c, k) = v[c];
            }
        std::vector<Vec> u;
        for (std::size_t q = 0; q < dq; ++q)
            for (const auto& y : ji.basis()) u.push_back(qtw.act_right(Side::Q, m, unit_vec(dq, q), y));
        Subspace U = Subspace::span(dq, u);
        std::vector<Vec> blocks;
        for (std::size_t q = 0; q < dq; ++q)
            for (const auto& ub : U.basis()) {
                Vec v = zero_vec(dq * dq);
                std::copy(ub.begin(), ub.end(), v.begin() + static_cast<std::ptrdiff_t>(q * dq));
                blocks.push_back(std::move(v));
            }
        keep = keep.intersect(preimage(A, Subspace::span(dq * dq, blocks)));
        prev_kernel = kern;
        kern = kernel(A);
    }
    keep = keep.intersect(kern);
    if (info) {
        info->bound = bound;
        info->cap_binding = bound > 1 && !(prev_kernel == kern);
    }
    std::vector<Vec> ivecs;
    for (const auto& c : keep.basis()) {
        Vec x = zero_vec(R.dim());
        for (std::size_t k = 0; k < nj; ++k) axpy(x, c[k], j.basis()[k]);
        ivecs.push_back(std::move(x));
    }
    return {Subspace::span(R.dim(), ivecs), j};
}

std::vector<TPair> enumerate_tpairs(const SystemPtr& sys, const Subspace* k) {
    std::size_t n = sys->ring.dim();
    if (n > 12) throw std::invalid_argument("coordinate T-pair enumeration is limited to 12 basis elements");
    std::size_t total = 1;
    for (std::size_t t = 0; t < n; ++t) total *= 3;
    std::vector<TPair> out;
    for (std::size_t code = 0; code < total; ++code) {
        // digit 0: in neither, 1: in J only, 2: in I and J
        std::vector<std::size_t> ii, jj;
        std::size_t c = code;
        for (std::size_t t = 0; t < n; ++t, c /= 3) {
            if (c % 3 >= 1) jj.push_back(t);
            if (c % 3 == 2) ii.push_back(t);
        }
        TPair w{Subspace::coordinates(n, ii), Subspace::coordinates(n, jj)};
        if (k && !k->is_subset_of(w.j)) continue;
        if (validate_tpair(sys, w.i, w.j).ok()) out.push_back(std::move(w));
    }
    return out;
}

Lattice build_lattice(std::vector<TPair> nodes) {
    Lattice lat;
    lat.nodes = std::move(nodes);
    std::size_t n = lat.nodes.size();
    std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            lt[a][b] = a != b && tpair_leq(lat.nodes[a], lat.nodes[b]) && !(lat.nodes[a] == lat.nodes[b]);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (!lt[a][b]) continue;
            bool cover = true;
            for (std::size_t c = 0; c < n && cover; ++c)
                if (lt[a][c] && lt[c][b]) cover = false;
            if (cover) lat.hasse.emplace_back(a, b);
        }
    return lat;
}

nlohmann::json subspace_to_json(const StructuredRing& ring, const Subspace& s) {
    nlohmann::json out = nlohmann::json::array();
    if (is_coordinate(s)) {
        std::vector<std::string> labels;
        for (std::size_t p : s.pivots()) labels.push_back(ring.labels[p]);
        std::sort(labels.begin(), labels.end());
        for (auto& l : labels) out.push_back(l);
        return out;
    }
    for (const auto& b : s.basis()) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& x : b) row.push_back(to_string(x));
        out.push_back(row);
    }
    return out;
}

nlohmann::json lattice_to_json(const RSystem& sys, const Lattice& lat) {
    nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
    for (std::size_t k = 0; k < lat.nodes.size(); ++k)
        nodes.push_back({{"id", k},
                         {"i_basis", subspace_to_json(sys.ring, lat.nodes[k].i)},
                         {"j_basis", subspace_to_json(sys.ring, lat.nodes[k].j)}});
    for (const auto& [a, b] : lat.hasse) edges.push_back({a, b});
    return {{"nodes", nodes}, {"edges", edges}};
}

std::string lattice_to_dot(const RSystem& sys, const Lattice& lat) {
    auto brace = [&](const Subspace& s) {
        std::string out;
        for (const auto& item : subspace_to_json(sys.ring, s)) {
            if (!out.empty()) out += ",";
            out += item.is_string() ? item.get<std::string>() : item.dump();
        }
        return "{" + out + "}";
    };
    std::ostringstream os;
    os << "digraph tpairs {\n  rankdir=BT;\n";
    for (std::size_t k = 0; k < lat.nodes.size(); ++k) {
        std::string label = "I=" + brace(lat.nodes[k].i) + " J=" + brace(lat.nodes[k].j);
        os << "  n" << k << " [label=" << nlohmann::json(label).dump() << "];\n";
    }
    for (const auto& [a, b] : lat.hasse) os << "  n" << a << " -> n" << b << ";\n";
    os << "}\n";
    return os.str();
}

// ------------------------------------------------------------ Toeplitz map

namespace {

Vec project_word(const TensorTower& parent, const TensorTower& quot, const Matrix& pr, Side side, int level,
                 std::size_t idx) {
    const auto& word = parent.space(side, level).words[idx];
    Vec v = pr.col(static_cast<std::size_t>(word[0]));
    for (std::size_t t = 1; t < word.size(); ++t)
        v = quot.embed(side, static_cast<int>(t), v, 1, pr.col(static_cast<std::size_t>(word[t])));
    return v;
}

} // namespace

ToeplitzElement map_to_quotient(const ToeplitzElement& x, const QuotientSystem& qs, const RingPtr& qring) {
    const ToeplitzRing& P = *x.ring();
    const TensorTower& ptw = P.tower();
    const TensorTower& qtw = qring->tower();
    ToeplitzElement out(qring);
    for (const auto& [g, v] : x.components()) {
        const ComponentSpace& cs = P.component(g);
        Vec acc = zero_vec(qring->component_dim(g));
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (sgn(v[i]) == 0) continue;
            auto [qa, pa] = cs.pure[i];
            Vec img;
            if (g.m == 0 && g.n == 0) {
                img = qs.pr_r.col(qa);
            } else {
                Vec qv = g.m > 0 ? project_word(ptw, qtw, qs.pr_q, Side::Q, g.m, qa) : Vec{};
                Vec pv = g.n > 0 ? project_word(ptw, qtw, qs.pr_p, Side::P, g.n, pa) : Vec{};
                if (g.n == 0) img = qv;
                else if (g.m == 0) img = pv;
                else img = qring->join(g.m, qv, g.n, pv);
            }
            axpy(acc, v[i], img);
        }
        out.add_component(g, acc);
    }
    return out;
}

// ------------------------------------------------------------ IdealHandle

IdealHandle IdealHandle::from_tpair(ContextPtr ctx, const TPair& w) {
    if (!ctx) throw ContextMismatch("ideal handle needs a context");
    const SystemPtr& sys = ctx->tower().system_ptr();
    if (!ctx->ideal().ideal.is_subset_of(w.j))
        throw HypothesisViolated("the context ideal K must be contained in J of the pair");
    TPairFlags f = validate_tpair(sys, w.i, w.j);
    if (!f.ok()) throw HypothesisViolated("not a T-pair: " + f.failures().front());
    IdealHandle h;
    h.st_ = std::make_shared<State>();
    h.st_->ctx = ctx;
    h.st_->from_pair = true;
    h.st_->qs = std::make_shared<QuotientSystem>(quotient_system(sys, w.i));
    h.st_->qring = ToeplitzRing::create(h.st_->qs->system, ctx->ring()->cap());
    h.st_->qctx = std::make_shared<CpContext>(h.st_->qring, image_in_quotient(*h.st_->qs, w.j), ctx->slack());
    return h;
}

IdealHandle IdealHandle::from_generators(ContextPtr ctx, std::vector<ToeplitzElement> gens) {
    if (!ctx) throw ContextMismatch("ideal handle needs a context");
    for (const auto& g : gens)
        if (g.ring() != ctx->ring()) throw ContextMismatch("generator from a different Toeplitz ring");
    IdealHandle h;
    h.st_ = std::make_shared<State>();
    h.st_->ctx = ctx;
    h.st_->gens = std::move(gens);
    return h;
}

namespace {

GradedLayout full_layout(const ToeplitzRing& ring, int level) {
    std::vector<GradePair> gs;
    for (int m = 0; m <= level; ++m)
        for (int n = 0; n <= level; ++n) gs.push_back({m, n});
    return GradedLayout::of(ring, gs);
}

// Row echelon form with incremental insertion.
class Echelon {
public:
    Echelon() = default;
    bool insert(Vec v) {
        for (const auto& [p, row] : rows_)
            if (sgn(v[p]) != 0) axpy(v, -v[p], row);
        auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return sgn(x) != 0; });
        if (it == v.end()) return false;
        std::size_t p = static_cast<std::size_t>(it - v.begin());
        Rational inv = 1 / v[p];
        for (auto& x : v) x *= inv;
        // keep existing rows reduced at the new pivot so one pass suffices
        for (auto& [q, row] : rows_)
            if (sgn(row[p]) != 0) axpy(row, -row[p], v);
        rows_.emplace(p, std::move(v));
        return true;
    }
    std::vector<Vec> rows() const {
        std::vector<Vec> out;
        for (const auto& [p, r] : rows_) out.push_back(r);
        return out;
    }

private:
    std::map<std::size_t, Vec> rows_;
};

bool fits(const ToeplitzElement& x, int level) { return x.degree() <= level; }

} // namespace

const std::vector<Vec>& IdealHandle::closure_rows(int level) const {
    std::lock_guard lock(st_->mu);
    auto it = st_->closure.find(level);
    if (it != st_->closure.end()) return it->second;

    const ContextPtr& ctx = st_->ctx;
    const RingPtr& ring = ctx->ring();
    const RSystem& sys = ring->system();
    GradedLayout F = full_layout(*ring, level);
    std::vector<ToeplitzElement> letters;
    for (std::size_t r = 0; r < sys.ring.dim(); ++r) letters.push_back(embed(ring, Kind::R, unit_vec(sys.ring.dim(), r)));
    for (std::size_t q = 0; q < sys.q.dim(); ++q) letters.push_back(embed(ring, Kind::Q, unit_vec(sys.q.dim(), q)));
    for (std::size_t p = 0; p < sys.p.dim(); ++p) letters.push_back(embed(ring, Kind::P, unit_vec(sys.p.dim(), p)));

    Echelon ech;
    std::deque<ToeplitzElement> todo;
    auto offer = [&](const ToeplitzElement& x) {
        if (x.is_zero() || !fits(x, level)) return;
        if (ech.insert(F.flatten(x))) todo.push_back(x);
    };
    for (const auto& g : st_->gens) offer(g);
    for (int k = 0; k < level; ++k)
        for (int l = 0; l < level; ++l)
            for (const auto& g : ctx->relation_generators(k, l)) offer(g);
    while (!todo.empty()) {
        ToeplitzElement s = std::move(todo.front());
        todo.pop_front();
        int deg = s.degree();
        for (const auto& a : letters) {
            // a product of s by a letter can climb by at most one level
            if (deg + 1 > ring->cap()) {
                GradePair ga = a.components().begin()->first;
                bool ok = true;
                for (const auto& [g, v] : s.components())
                    if (semigroup_mul(ga, g).level() > ring->cap() || semigroup_mul(g, ga).level() > ring->cap())
                        ok = false;
                if (!ok) continue;
            }
            offer(a * s);
            offer(s * a);
        }
    }
    return st_->closure.emplace(level, ech.rows()).first->second;
}

Subspace IdealHandle::generator_slice(int z, int d, int level) const {
    const RingPtr& ring = st_->ctx->ring();
    GradedLayout F = full_layout(*ring, level);
    GradedLayout inner = GradedLayout::box(*ring, z, d);
    std::vector<GradePair> order;
    for (GradePair g : F.grades)
        if (inner.index_of(g) < 0) order.push_back(g);
    std::size_t from = 0;
    for (GradePair g : order) from += ring->component_dim(g);
    for (GradePair g : inner.grades) order.push_back(g);
    GradedLayout big = GradedLayout::of(*ring, order);
    std::vector<Vec> rows;
    for (const auto& r : closure_rows(level)) rows.push_back(big.flatten(F.unflatten(ring, r)));
    Subspace tail = tail_intersection(big.dim(), rows, from);
    std::vector<Vec> cut;
    for (const auto& r : tail.basis()) cut.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(from), r.end());
    return Subspace::span(inner.dim(), cut);
}

const Subspace& IdealHandle::slice(int z, int d) const {
    std::lock_guard lock(st_->mu);
    auto key = std::make_pair(z, d);
    auto it = st_->slices.find(key);
    if (it != st_->slices.end()) return it->second;

    const RingPtr& ring = st_->ctx->ring();
    if (st_->from_pair) {
        GradedLayout pl = GradedLayout::box(*ring, z, d);
        GradedLayout ql = GradedLayout::box(*st_->qring, z, d);
        Matrix M(ql.dim(), pl.dim());
        std::size_t col = 0;
        for (GradePair g : pl.grades)
            for (std::size_t i = 0; i < ring->component_dim(g); ++i, ++col)
                M.set_col(col, ql.flatten(map_to_quotient(basis_element(ring, g, i), *st_->qs, st_->qring)));
        return st_->slices.emplace(key, preimage(M, st_->qctx->relation_slice(z, d))).first->second;
    }

    int gdeg = 0;
    for (const auto& g : st_->gens) gdeg = std::max(gdeg, g.degree());
    int level = std::max(d, gdeg) + st_->ctx->slack();
    auto checked = [&](int lvl) {
        if (lvl > ring->cap())
            throw CapExceeded("ideal slice at degree " + std::to_string(d) + " needs level " + std::to_string(lvl) +
                              " beyond the cap " + std::to_string(ring->cap()));
        return generator_slice(z, d, lvl);
    };
    Subspace cur = checked(level);
    int stable = 0;
    while (stable < 2) {
        ++level;
        Subspace next = checked(level);
        stable = next.dim() == cur.dim() ? stable + 1 : 0;
        cur = std::move(next);
    }
    return st_->slices.emplace(key, std::move(cur)).first->second;
}

bool IdealHandle::contains(const ToeplitzElement& x) const {
    if (x.ring() != st_->ctx->ring()) throw ContextMismatch("element from a different Toeplitz ring");
    if (x.is_zero()) return true;
    int d = x.degree();
    for (int z : x.z_degrees())
        if (!slice(z, d).contains(GradedLayout::box(*x.ring(), z, d).flatten(z_project(x, z)))) return false;
    return true;
}

bool IdealHandle::is_subset_of(const IdealHandle& o, int d) const {
    if (o.st_->ctx != st_->ctx) throw ContextMismatch("ideals of different contexts");
    for (int z = -d; z <= d; ++z)
        if (!slice(z, d).is_subset_of(o.slice(z, d))) return false;
    return true;
}

TPair IdealHandle::tpair() const {
    std::size_t rd = st_->ctx->ring()->system().ring.dim();
    Subspace i = slice(0, 0);
    std::vector<Vec> head;
    for (const auto& b : slice(0, 1).basis()) head.emplace_back(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(rd));
    return {i, Subspace::span(rd, head)};
}

} // namespace cpr
