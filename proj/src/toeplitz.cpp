#include "cpr/toeplitz.hpp"

#include "cpr/errors.hpp"
#include "cpr/finrank.hpp"

#include <algorithm>

namespace cpr {

GradePair semigroup_mul(GradePair a, GradePair b) {
    int m = a.m + std::max(0, b.m - a.n);
    int n = b.n + std::max(0, a.n - b.m);
    return {m, n};
}

std::shared_ptr<ToeplitzRing> ToeplitzRing::create(SystemPtr sys, int cap) {
    return std::shared_ptr<ToeplitzRing>(new ToeplitzRing(std::move(sys), cap));
}

ToeplitzRing::ToeplitzRing(SystemPtr sys, int cap) : tower_(std::make_unique<TensorTower>(std::move(sys), cap)) {}

const ComponentSpace& ToeplitzRing::component(GradePair g) const {
    if (g.m < 0 || g.n < 0) throw LevelMismatch("negative grade");
    if (g.level() > cap())
        throw CapExceeded("grade (" + std::to_string(g.m) + "," + std::to_string(g.n) + ") exceeds the level cap " +
                          std::to_string(cap()));
    std::lock_guard lock(mu_);
    auto it = comps_.find(g);
    if (it != comps_.end()) return it->second;

    ComponentSpace cs;
    cs.grade = g;
    const TensorTower& tw = *tower_;
    if (g.m == 0 && g.n == 0) {
        for (std::size_t r = 0; r < system().ring.dim(); ++r) cs.pure.emplace_back(r, 0);
    } else if (g.n == 0) {
        for (std::size_t i = 0; i < tw.dim(Side::Q, g.m); ++i) cs.pure.emplace_back(i, 0);
    } else if (g.m == 0) {
        for (std::size_t j = 0; j < tw.dim(Side::P, g.n); ++j) cs.pure.emplace_back(0, j);
    } else {
        const TensorSpace& qs = tw.space(Side::Q, g.m);
        const TensorSpace& ps = tw.space(Side::P, g.n);
        std::size_t dq = qs.dim(), dp = ps.dim(), rd = system().ring.dim();
        std::size_t free_dim = dq * dp;
        // (q.r) (x) p - q (x) (r.p)
        std::vector<Vec> rels;
        for (std::size_t i = 0; i < dq; ++i)
            for (std::size_t a = 0; a < rd; ++a)
                for (std::size_t j = 0; j < dp; ++j) {
                    Vec v = zero_vec(free_dim);
                    const Vec& qr = qs.right[i][a];
                    const Vec& rp = ps.left[a][j];
                    for (std::size_t k = 0; k < dq; ++k)
                        if (sgn(qr[k]) != 0) v[k * dp + j] += qr[k];
                    for (std::size_t l = 0; l < dp; ++l)
                        if (sgn(rp[l]) != 0) v[i * dp + l] -= rp[l];
                    if (!is_zero(v)) rels.push_back(std::move(v));
                }
        cs.balanced = quotient(free_dim, Subspace::span(free_dim, rels));
        for (std::size_t c : cs.balanced.representative_columns()) cs.pure.emplace_back(c / dp, c % dp);
    }
    return comps_.emplace(g, std::move(cs)).first->second;
}

Vec ToeplitzRing::join(int m, const Vec& q, int n, const Vec& p) const {
    const TensorTower& tw = *tower_;
    if (m == 0 && n == 0) return system().ring.mul(q, p);
    if (m == 0) return tw.act_left(Side::P, n, q, p);
    if (n == 0) return tw.act_right(Side::Q, m, q, p);
    const ComponentSpace& cs = component({m, n});
    std::size_t dp = tw.dim(Side::P, n);
    if (q.size() != tw.dim(Side::Q, m) || p.size() != dp) throw DimensionMismatch("join: vector length");
    Vec out = zero_vec(cs.dim());
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (sgn(q[i]) == 0) continue;
        for (std::size_t j = 0; j < dp; ++j)
            if (sgn(p[j]) != 0) axpy(out, q[i] * p[j], cs.balanced.project_unit(i * dp + j));
    }
    return out;
}

const Vec& ToeplitzRing::mul_basis(GradePair g1, std::size_t a, GradePair g2, std::size_t b) const {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(g1, g2);
    auto it = tables_.find(key);
    if (it == tables_.end()) {
        std::size_t d1 = component_dim(g1), d2 = component_dim(g2);
        it = tables_.emplace(key, std::vector<std::vector<Vec>>(d1, std::vector<Vec>(d2))).first;
    }
    Vec& slot = it->second.at(a).at(b);
    if (slot.empty()) slot = product(g1, a, g2, b);
    return slot;
}

// Basis elements are [q][p] with q a pure word in Q^m1 and p one in P^n1
// (missing factors when m or n is 0, a ring basis vector at (0,0)).  In the
// product [qa][pa] * [qb][pb] only pa against qb interacts:
//   n1 = 0 or m2 = 0   nothing to contract, the middle factors concatenate
//   n1 = m2 > 0        pa, qb contract fully to psi_n(pa, qb) in R
//   n1 > m2 > 0        the tail of pa absorbs qb, the head of pa survives
//   0 < n1 < m2        pa absorbs the head of qb, the tail of qb survives
Vec ToeplitzRing::product(GradePair g1, std::size_t a, GradePair g2, std::size_t b) const {
    const TensorTower& tw = *tower_;
    const auto [m1, n1] = g1;
    const auto [m2, n2] = g2;
    const auto [qa, pa] = component(g1).pure[a];
    const auto [qb, pb] = component(g2).pure[b];
    GradePair out = semigroup_mul(g1, g2);
    component(out);  // cap check before any work

    std::size_t rd = system().ring.dim();
    auto qvec = [&](int lvl, std::size_t i) { return unit_vec(tw.dim(Side::Q, lvl), i); };
    auto pvec = [&](int lvl, std::size_t j) { return unit_vec(tw.dim(Side::P, lvl), j); };
    // left Q-side factor of the first element: Q^m1 vector, or the ring vector at (0,0)
    auto left_vec = [&]() { return m1 > 0 ? qvec(m1, qa) : unit_vec(rd, qa); };
    auto right_vec = [&]() { return n2 > 0 ? pvec(n2, pb) : unit_vec(rd, qb); };

    if (n1 == 0 && m2 == 0) return join(m1, left_vec(), n2, right_vec());

    if (n1 == 0) {
        Vec qn = tw.embed(Side::Q, m1, left_vec(), m2, qvec(m2, qb));
        return n2 > 0 ? join(m1 + m2, qn, n2, pvec(n2, pb)) : qn;
    }
    if (m2 == 0) {
        Vec pn = tw.embed(Side::P, n1, pvec(n1, pa), n2, right_vec());
        return m1 > 0 ? join(m1, qvec(m1, qa), n1 + n2, pn) : pn;
    }

    if (n1 == m2) {
        const Vec& r = tw.psi_basis(n1, pa, qb);
        if (m1 > 0 && n2 > 0) return join(m1, tw.act_right(Side::Q, m1, qvec(m1, qa), r), n2, pvec(n2, pb));
        if (m1 > 0) return tw.act_right(Side::Q, m1, qvec(m1, qa), r);
        if (n2 > 0) return tw.act_left(Side::P, n2, r, pvec(n2, pb));
        return r;
    }

    if (n1 > m2) {
        int keep = n1 - m2;
        const auto& [u, w] = tw.split(Side::P, n1, pa, keep);
        Vec r = tw.psi_n(m2, w, qvec(m2, qb));
        Vec pl = tw.act_right(Side::P, keep, pvec(keep, u), r);
        Vec pn = n2 > 0 ? tw.embed(Side::P, keep, pl, n2, pvec(n2, pb)) : pl;
        return m1 > 0 ? join(m1, qvec(m1, qa), keep + n2, pn) : pn;
    }

    int keep = m2 - n1;
    const auto& [u, w] = tw.split(Side::Q, m2, qb, n1);
    Vec r = tw.psi_n(n1, pvec(n1, pa), qvec(n1, u));
    Vec qr = tw.act_left(Side::Q, keep, r, w);
    Vec qn = m1 > 0 ? tw.embed(Side::Q, m1, qvec(m1, qa), keep, qr) : qr;
    return n2 > 0 ? join(m1 + keep, qn, n2, pvec(n2, pb)) : qn;
}

// ---------------------------------------------------------------------------

void ToeplitzElement::add_component(GradePair g, const Vec& v, const Rational& coef) {
    if (!ring_) throw ContextMismatch("element has no ring");
    if (v.size() != ring_->component_dim(g)) throw DimensionMismatch("component vector has the wrong length");
    if (cpr::is_zero(v) || sgn(coef) == 0) return;
    auto it = comps_.find(g);
    if (it == comps_.end()) it = comps_.emplace(g, zero_vec(v.size())).first;
    axpy(it->second, coef, v);
    if (cpr::is_zero(it->second)) comps_.erase(it);
}

const Vec* ToeplitzElement::component(GradePair g) const {
    auto it = comps_.find(g);
    return it == comps_.end() ? nullptr : &it->second;
}

int ToeplitzElement::degree() const {
    int d = -1;
    for (const auto& [g, v] : comps_) d = std::max(d, g.level());
    return d;
}

std::vector<int> ToeplitzElement::z_degrees() const {
    std::vector<int> zs;
    for (const auto& [g, v] : comps_) zs.push_back(g.z());
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    return zs;
}

void ToeplitzElement::same_ring(const ToeplitzElement& o) const {
    if (ring_ != o.ring_) throw SystemMismatch("elements belong to different Toeplitz rings");
}

ToeplitzElement ToeplitzElement::operator+(const ToeplitzElement& o) const {
    same_ring(o);
    ToeplitzElement out = *this;
    for (const auto& [g, v] : o.comps_) out.add_component(g, v);
    return out;
}

ToeplitzElement ToeplitzElement::operator-(const ToeplitzElement& o) const {
    same_ring(o);
    ToeplitzElement out = *this;
    for (const auto& [g, v] : o.comps_) out.add_component(g, v, -1);
    return out;
}

ToeplitzElement ToeplitzElement::operator*(const ToeplitzElement& o) const { return toeplitz_mul(*this, o); }

ToeplitzElement ToeplitzElement::scaled(const Rational& s) const {
    ToeplitzElement out(ring_);
    for (const auto& [g, v] : comps_) out.add_component(g, v, s);
    return out;
}

bool ToeplitzElement::operator==(const ToeplitzElement& o) const { return ring_ == o.ring_ && comps_ == o.comps_; }

ToeplitzElement embed(const RingPtr& ring, Kind kind, const Vec& x) {
    ToeplitzElement out(ring);
    switch (kind) {
    case Kind::R: out.add_component({0, 0}, x); break;
    case Kind::Q: out.add_component({1, 0}, x); break;
    case Kind::P: out.add_component({0, 1}, x); break;
    }
    return out;
}

ToeplitzElement embed_n(const RingPtr& ring, Side side, int level, const Vec& x) {
    ToeplitzElement out(ring);
    out.add_component(side == Side::Q ? GradePair{level, 0} : GradePair{0, level}, x);
    return out;
}

ToeplitzElement embed_module(const RingPtr& ring, const ModuleElement& x) {
    return embed_n(ring, x.side, x.level, x.coords);
}

ToeplitzElement basis_element(const RingPtr& ring, GradePair g, std::size_t i) {
    ToeplitzElement out(ring);
    out.add_component(g, unit_vec(ring->component_dim(g), i));
    return out;
}

ToeplitzElement toeplitz_mul(const ToeplitzElement& a, const ToeplitzElement& b) {
    if (a.ring() != b.ring()) throw SystemMismatch("elements belong to different Toeplitz rings");
    const ToeplitzRing& R = *a.ring();
    std::map<GradePair, Vec> acc;
    for (const auto& [g1, v1] : a.components())
        for (const auto& [g2, v2] : b.components()) {
            GradePair g = semigroup_mul(g1, g2);
            auto it = acc.find(g);
            if (it == acc.end()) it = acc.emplace(g, zero_vec(R.component_dim(g))).first;
            for (std::size_t i = 0; i < v1.size(); ++i) {
                if (sgn(v1[i]) == 0) continue;
                for (std::size_t j = 0; j < v2.size(); ++j)
                    if (sgn(v2[j]) != 0) axpy(it->second, v1[i] * v2[j], R.mul_basis(g1, i, g2, j));
            }
        }
    ToeplitzElement out(a.ring());
    for (const auto& [g, v] : acc) out.add_component(g, v);
    return out;
}

ToeplitzElement grade_project(const ToeplitzElement& x, GradePair g) {
    ToeplitzElement out(x.ring());
    if (const Vec* v = x.component(g)) out.add_component(g, *v);
    return out;
}

ToeplitzElement z_project(const ToeplitzElement& x, int k) {
    ToeplitzElement out(x.ring());
    for (const auto& [g, v] : x.components())
        if (g.z() == k) out.add_component(g, v);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

Matrix combine(const std::vector<Matrix>& ms, const Vec& coef, std::size_t dim) {
    Matrix out(dim, dim);
    for (std::size_t i = 0; i < coef.size(); ++i)
        if (sgn(coef[i]) != 0) out = out + ms[i].scaled(coef[i]);
    return out;
}

} // namespace

ValidationReport validate_representation(const RSystem& sys, const Representation& rep) {
    ValidationReport out;
    auto bad = [&](const std::string& what, std::vector<std::string> w) {
        out.violations.push_back({what, std::move(w)});
    };
    std::size_t d = rep.dim;
    auto shaped = [&](const std::vector<Matrix>& ms, std::size_t count) {
        if (ms.size() != count) return false;
        for (const auto& m : ms)
            if (m.rows() != d || m.cols() != d) return false;
        return true;
    };
    if (!shaped(rep.sigma, sys.ring.dim())) bad("shape of sigma", {});
    if (!shaped(rep.t, sys.q.dim())) bad("shape of T", {});
    if (!shaped(rep.s, sys.p.dim())) bad("shape of S", {});
    if (!out.ok()) return out;

    const auto& R = sys.ring;
    for (std::size_t i = 0; i < R.dim(); ++i)
        for (std::size_t j = 0; j < R.dim(); ++j)
            if (!(rep.sigma[i] * rep.sigma[j] == combine(rep.sigma, R.mult[i][j], d)))
                bad("sigma multiplicative", {R.labels[i], R.labels[j]});
    for (std::size_t r = 0; r < R.dim(); ++r) {
        for (std::size_t q = 0; q < sys.q.dim(); ++q) {
            if (!(rep.sigma[r] * rep.t[q] == combine(rep.t, sys.q.left[r][q], d)))
                bad("sigma(r) T(q) = T(r q)", {R.labels[r], sys.q.labels[q]});
            if (!(rep.t[q] * rep.sigma[r] == combine(rep.t, sys.q.right[q][r], d)))
                bad("T(q) sigma(r) = T(q r)", {sys.q.labels[q], R.labels[r]});
        }
        for (std::size_t p = 0; p < sys.p.dim(); ++p) {
            if (!(rep.sigma[r] * rep.s[p] == combine(rep.s, sys.p.left[r][p], d)))
                bad("sigma(r) S(p) = S(r p)", {R.labels[r], sys.p.labels[p]});
            if (!(rep.s[p] * rep.sigma[r] == combine(rep.s, sys.p.right[p][r], d)))
                bad("S(p) sigma(r) = S(p r)", {sys.p.labels[p], R.labels[r]});
        }
    }
    for (std::size_t p = 0; p < sys.p.dim(); ++p)
        for (std::size_t q = 0; q < sys.q.dim(); ++q)
            if (!(rep.s[p] * rep.t[q] == combine(rep.sigma, sys.psi.psi[p][q], d)))
                bad("S(p) T(q) = sigma(psi(p q))", {sys.p.labels[p], sys.q.labels[q]});
    return out;
}

Matrix rep_t_power(const TensorTower& tw, const Representation& rep, int m, std::size_t q) {
    Matrix out = Matrix::identity(rep.dim);
    for (int letter : tw.space(Side::Q, m).words[q]) out = out * rep.t[static_cast<std::size_t>(letter)];
    return out;
}

Matrix rep_s_power(const TensorTower& tw, const Representation& rep, int n, std::size_t p) {
    Matrix out = Matrix::identity(rep.dim);
    for (int letter : tw.space(Side::P, n).words[p]) out = out * rep.s[static_cast<std::size_t>(letter)];
    return out;
}

Matrix evaluate_unchecked(const ToeplitzElement& x, const Representation& rep) {
    Matrix out(rep.dim, rep.dim);
    if (!x.ring()) return out;
    const ToeplitzRing& R = *x.ring();
    const TensorTower& tw = R.tower();
    for (const auto& [g, v] : x.components()) {
        const ComponentSpace& cs = R.component(g);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (sgn(v[i]) == 0) continue;
            auto [qi, pj] = cs.pure[i];
            Matrix term = Matrix::identity(rep.dim);
            if (g.m == 0 && g.n == 0) {
                term = rep.sigma[qi];
            } else {
                if (g.m > 0) term = rep_t_power(tw, rep, g.m, qi);
                if (g.n > 0) term = term * rep_s_power(tw, rep, g.n, pj);
            }
            out = out + term.scaled(v[i]);
        }
    }
    return out;
}

Matrix evaluate(const ToeplitzElement& x, const Representation& rep) {
    if (!x.ring()) throw ContextMismatch("element has no ring");
    ValidationReport vr = validate_representation(x.ring()->system(), rep);
    if (!vr.ok()) {
        std::string msg = "representation fails: " + vr.violations[0].identity;
        for (const auto& w : vr.violations[0].witness) msg += " " + w;
        throw InvalidRepresentation(msg);
    }
    return evaluate_unchecked(x, rep);
}

// ---------------------------------------------------------------------------

FockSpace fock_space(const TensorTower& tw, int cutoff) {
    FockSpace fs;
    fs.cutoff = cutoff;
    fs.offset.push_back(0);
    for (int k = 0; k <= cutoff; ++k) fs.offset.push_back(fs.offset.back() + tw.dim(Side::Q, k));
    return fs;
}

namespace {

void put_block_col(Matrix& m, std::size_t row0, std::size_t col, const Vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i) m(row0 + i, col) = v[i];
}

} // namespace

Matrix fock_creator(const TensorTower& tw, int cutoff, std::size_t q) {
    FockSpace fs = fock_space(tw, cutoff);
    Matrix m(fs.total(), fs.total());
    Vec e = unit_vec(tw.dim(Side::Q, 1), q);
    for (int k = 0; k < cutoff; ++k)
        for (std::size_t j = 0; j < tw.dim(Side::Q, k); ++j)
            put_block_col(m, fs.offset[k + 1], fs.offset[k] + j,
                          tw.embed(Side::Q, 1, e, k, unit_vec(tw.dim(Side::Q, k), j)));
    return m;
}

Matrix fock_annihilator(const TensorTower& tw, int cutoff, std::size_t p) {
    FockSpace fs = fock_space(tw, cutoff);
    Matrix m(fs.total(), fs.total());
    Vec e = unit_vec(tw.dim(Side::P, 1), p);
    std::size_t d1 = tw.dim(Side::Q, 1);
    for (int k = 1; k <= cutoff; ++k)
        for (std::size_t j = 0; j < tw.dim(Side::Q, k); ++j) {
            Vec v;
            if (k == 1) {
                v = tw.psi_n(1, e, unit_vec(d1, j));
            } else {
                const auto& [u, w] = tw.split(Side::Q, k, j, 1);
                v = tw.act_left(Side::Q, k - 1, tw.psi_n(1, e, unit_vec(d1, u)), w);
            }
            put_block_col(m, fs.offset[k - 1], fs.offset[k] + j, v);
        }
    return m;
}

Matrix fock_diagonal(const TensorTower& tw, int cutoff, const Vec& r) {
    FockSpace fs = fock_space(tw, cutoff);
    Matrix m(fs.total(), fs.total());
    for (int k = 0; k <= cutoff; ++k)
        for (std::size_t j = 0; j < tw.dim(Side::Q, k); ++j)
            put_block_col(m, fs.offset[k], fs.offset[k] + j,
                          tw.act_left(Side::Q, k, r, unit_vec(tw.dim(Side::Q, k), j)));
    return m;
}

Matrix fock_matrix(const ToeplitzElement& x, int cutoff) {
    if (!x.ring()) throw ContextMismatch("element has no ring");
    const ToeplitzRing& R = *x.ring();
    const TensorTower& tw = R.tower();
    const RSystem& sys = R.system();
    // Work deg(x) levels higher so that every retained block is exact; the
    // intermediate words of T^m S^n never climb more than deg(x) levels.
    int outer = cutoff;
    cutoff = std::min(cutoff + std::max(0, x.degree()), tw.cap());
    FockSpace fs = fock_space(tw, cutoff);
    Representation rep;
    rep.dim = fs.total();
    for (std::size_t r = 0; r < sys.ring.dim(); ++r)
        rep.sigma.push_back(fock_diagonal(tw, cutoff, unit_vec(sys.ring.dim(), r)));
    for (std::size_t q = 0; q < sys.q.dim(); ++q) rep.t.push_back(fock_creator(tw, cutoff, q));
    for (std::size_t p = 0; p < sys.p.dim(); ++p) rep.s.push_back(fock_annihilator(tw, cutoff, p));
    // Truncation breaks the relations at the top level, so this is evaluated
    // without validation.
    return fock_restrict(evaluate_unchecked(x, rep), fs, outer);
}

Matrix fock_restrict(const Matrix& m, const FockSpace& fs, int k) {
    std::size_t n = fs.offset[static_cast<std::size_t>(k) + 1];
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, j);
    return out;
}

bool fock_is_faithful(const TensorTower& tw) {
    return is_right_nondegenerate(tw.system().ring) && check_fs(tw).holds();
}

ZeroCheck toeplitz_zero_check(const ToeplitzElement& x) {
    ZeroCheck zc;
    zc.component_zero = x.is_zero();
    if (!x.ring()) return zc;
    const TensorTower& tw = x.ring()->tower();
    int cutoff = std::max(0, x.degree()) + 1;
    if (cutoff > tw.cap() || !fock_is_faithful(tw)) return zc;
    zc.fock_zero = fock_matrix(x, cutoff).is_zero();
    return zc;
}

bool toeplitz_is_zero(const ToeplitzElement& x) {
    ZeroCheck zc = toeplitz_zero_check(x);
    if (zc.fock_zero && *zc.fock_zero != zc.component_zero)
        throw std::logic_error("Fock cross-check disagrees with the component test");
    return zc.component_zero;
}

} // namespace cpr
