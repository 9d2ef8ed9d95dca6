#include "cpr/cpring.hpp"

#include "cpr/errors.hpp"

#include <algorithm>
#include <set>

namespace cpr {

CompatibleIdeal validate_ideal(const TensorTower& tw, const Subspace& s) {
    const auto& ring = tw.system().ring;
    if (s.ambient_dim() != ring.dim()) throw DimensionMismatch("ideal is not a subspace of R");
    CompatibleIdeal ci;
    ci.ideal = s;
    ci.is_two_sided = is_two_sided(ring, s);
    ci.is_psi_compatible = s.is_subset_of(delta_inverse_f(tw));
    ci.is_faithful = s.intersect(ker_delta(tw)).dim() == 0;
    return ci;
}

// ------------------------------------------------------------ GradedLayout

int GradedLayout::index_of(GradePair g) const {
    for (std::size_t i = 0; i < grades.size(); ++i)
        if (grades[i] == g) return static_cast<int>(i);
    return -1;
}

GradedLayout GradedLayout::of(const ToeplitzRing& ring, std::vector<GradePair> grades) {
    GradedLayout L;
    L.grades = std::move(grades);
    L.offset.push_back(0);
    for (GradePair g : L.grades) L.offset.push_back(L.offset.back() + ring.component_dim(g));
    return L;
}

GradedLayout GradedLayout::box(const ToeplitzRing& ring, int z, int d) {
    std::vector<GradePair> gs;
    for (int m = std::max(0, z); m <= d && m - z <= d; ++m) gs.push_back({m, m - z});
    return of(ring, std::move(gs));
}

Vec GradedLayout::flatten(const ToeplitzElement& x) const {
    Vec out = zero_vec(dim());
    for (const auto& [g, v] : x.components()) {
        int i = index_of(g);
        if (i < 0)
            throw LevelMismatch("grade (" + std::to_string(g.m) + "," + std::to_string(g.n) + ") is outside the layout");
        std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(offset[i]));
    }
    return out;
}

ToeplitzElement GradedLayout::unflatten(const RingPtr& ring, const Vec& v) const {
    if (v.size() != dim()) throw DimensionMismatch("vector does not match the layout");
    ToeplitzElement out(ring);
    for (std::size_t i = 0; i < grades.size(); ++i)
        out.add_component(grades[i], Vec(v.begin() + static_cast<std::ptrdiff_t>(offset[i]),
                                          v.begin() + static_cast<std::ptrdiff_t>(offset[i + 1])));
    return out;
}

// ------------------------------------------------------------------ pi

ToeplitzElement pi_delta(const RingPtr& ring, const Vec& x) {
    const TensorTower& tw = ring->tower();
    auto c = theta_decompose(tw, 1, delta(tw, x).t);
    if (!c) throw InvalidIdeal("Delta(x) is not a finite-rank operator");
    std::size_t dq = tw.dim(Side::Q, 1), dp = tw.dim(Side::P, 1);
    ToeplitzElement out(ring);
    for (std::size_t i = 0; i < dq; ++i)
        for (std::size_t j = 0; j < dp; ++j) {
            const Rational& cij = (*c)[i * dp + j];
            if (sgn(cij) == 0) continue;
            out.add_component({1, 1}, ring->join(1, unit_vec(dq, i), 1, unit_vec(dp, j)), cij);
        }
    return out;
}

// ------------------------------------------------------------- CpContext

CpContext::CpContext(RingPtr ring, const Subspace& j, int slack) : ring_(std::move(ring)), slack_(slack) {
    if (!ring_) throw ContextMismatch("context needs a Toeplitz ring");
    if (slack_ < 0) throw std::invalid_argument("slack must be non-negative");
    j_ = validate_ideal(tower(), j);
    if (!j_.is_two_sided) throw InvalidIdeal("J is not a two-sided ideal");
    if (!j_.is_psi_compatible) throw InvalidIdeal("J is not psi-compatible: Delta(J) is not finite rank");
    for (const auto& x : j_.ideal.basis()) core_.push_back(embed(ring_, Kind::R, x) - pi_delta(ring_, x));
}

const std::vector<ToeplitzElement>& CpContext::relation_generators(int k, int l) const {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(k, l);
    auto it = gens_.find(key);
    if (it != gens_.end()) return it->second;

    std::vector<ToeplitzElement> out;
    if (!core_.empty()) {
        const TensorTower& tw = tower();
        std::size_t dq = tw.dim(Side::Q, k), dp = tw.dim(Side::P, l);
        if (k == 0) dq = 1;
        if (l == 0) dp = 1;
        for (const auto& c : core_) {
            std::vector<ToeplitzElement> right;
            for (std::size_t j = 0; j < dp; ++j) right.push_back(l > 0 ? c * basis_element(ring_, {0, l}, j) : c);
            for (std::size_t i = 0; i < dq; ++i)
                for (const auto& cr : right) {
                    ToeplitzElement g = k > 0 ? basis_element(ring_, {k, 0}, i) * cr : cr;
                    if (!g.is_zero()) out.push_back(std::move(g));
                }
        }
    }
    return gens_.emplace(key, std::move(out)).first->second;
}

const Subspace& CpContext::slice_at(int z, int d, int b) const {
    std::lock_guard lock(mu_);
    auto key = std::make_tuple(z, d, b);
    auto it = partial_.find(key);
    if (it != partial_.end()) return it->second;

    const ToeplitzRing& R = *ring_;
    int e = d + b;
    if (e + 1 > R.cap())
        throw CapExceeded("membership at degree " + std::to_string(d) + " with slack " + std::to_string(b) +
                          " needs level " + std::to_string(e + 1) + " beyond the cap " + std::to_string(R.cap()));

    GradedLayout inner = GradedLayout::box(R, z, d);
    // Unwanted (high) grades first, so that the RREF rows pivoting in the
    // tail span exactly the intersection with V_d.
    std::vector<GradePair> order;
    GradedLayout all = GradedLayout::box(R, z, e + 1);
    for (GradePair g : all.grades)
        if (g.level() > d) order.push_back(g);
    std::size_t from = 0;
    for (GradePair g : order) from += R.component_dim(g);
    for (GradePair g : inner.grades) order.push_back(g);
    GradedLayout big = GradedLayout::of(R, order);

    std::vector<Vec> rows;
    for (int k = std::max(0, z); k <= e && k - z <= e; ++k)
        for (const auto& g : relation_generators(k, k - z)) rows.push_back(big.flatten(g));
    Subspace tail = tail_intersection(big.dim(), rows, from);
    std::vector<Vec> cut;
    for (const auto& r : tail.basis()) cut.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(from), r.end());
    return partial_.emplace(key, Subspace::span(inner.dim(), cut)).first->second;
}

const Subspace& CpContext::relation_slice(int z, int d) const {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(z, d);
    auto it = stable_.find(key);
    if (it != stable_.end()) return it->second;
    int b = slack_;
    std::size_t prev = slice_at(z, d, b).dim();
    int stable_steps = 0;
    while (stable_steps < 2) {
        ++b;
        std::size_t cur = slice_at(z, d, b).dim();
        stable_steps = cur == prev ? stable_steps + 1 : 0;
        prev = cur;
    }
    used_[key] = b;
    return stable_.emplace(key, slice_at(z, d, b)).first->second;
}

bool CpContext::in_relation_ideal(const ToeplitzElement& x) const {
    if (x.ring() != ring_) throw ContextMismatch("element does not belong to this context's Toeplitz ring");
    if (x.is_zero()) return true;
    int d = x.degree();
    std::lock_guard lock(mu_);
    for (int z : x.z_degrees()) {
        Vec v = GradedLayout::box(*ring_, z, d).flatten(z_project(x, z));
        auto key = std::make_pair(z, d);
        auto st = stable_.find(key);
        if (st != stable_.end()) {
            if (!st->second.contains(v)) return false;
            continue;
        }
        // Each W_b is contained in T(J), so membership at any b is final.
        int b = slack_;
        bool found = false;
        std::size_t prev = 0;
        int stable_steps = -1;
        while (true) {
            const Subspace& w = slice_at(z, d, b);
            if (w.contains(v)) {
                used_[key] = b;
                found = true;
                break;
            }
            stable_steps = (stable_steps >= 0 && w.dim() == prev) ? stable_steps + 1 : 0;
            prev = w.dim();
            if (stable_steps >= 2) {
                used_[key] = b;
                stable_.emplace(key, w);
                break;
            }
            ++b;
        }
        if (!found) return false;
    }
    return true;
}

std::map<std::pair<int, int>, int> CpContext::slack_used() const {
    std::lock_guard lock(mu_);
    return used_;
}

bool cp_equal(const CpElement& a, const CpElement& b) {
    if (!a.ctx || a.ctx != b.ctx) throw ContextMismatch("elements live in different Cuntz-Pimsner contexts");
    return a.ctx->in_relation_ideal(a.rep - b.rep);
}

// ------------------------------------------------------- representations

namespace {

Matrix combine(const std::vector<Matrix>& ms, const Vec& coef, std::size_t dim) {
    Matrix out(dim, dim);
    for (std::size_t i = 0; i < coef.size(); ++i)
        if (sgn(coef[i]) != 0) out = out + ms[i].scaled(coef[i]);
    return out;
}

Matrix sigma_flat(const Representation& rep, std::size_t rd) {
    std::size_t n2 = rep.dim * rep.dim;
    Matrix a(n2, rd);
    for (std::size_t r = 0; r < rd; ++r) a.set_col(r, rep.sigma[r].flatten());
    return a;
}

} // namespace

bool is_cp_invariant(const TensorTower& tw, const Representation& rep, const Subspace& j) {
    std::size_t dq = tw.dim(Side::Q, 1), dp = tw.dim(Side::P, 1);
    for (const auto& x : j.basis()) {
        auto c = theta_decompose(tw, 1, delta(tw, x).t);
        if (!c) return false;
        Matrix pi(rep.dim, rep.dim);
        for (std::size_t i = 0; i < dq; ++i)
            for (std::size_t k = 0; k < dp; ++k) {
                const Rational& cik = (*c)[i * dp + k];
                if (sgn(cik) != 0) pi = pi + (rep.t[i] * rep.s[k]).scaled(cik);
            }
        if (!(pi == combine(rep.sigma, x, rep.dim))) return false;
    }
    return true;
}

Subspace extract_j(const TensorTower& tw, const Representation& rep) {
    const RSystem& sys = tw.system();
    std::vector<Vec> ts;
    for (std::size_t i = 0; i < sys.q.dim(); ++i)
        for (std::size_t k = 0; k < sys.p.dim(); ++k) ts.push_back((rep.t[i] * rep.s[k]).flatten());
    std::size_t n2 = rep.dim * rep.dim;
    return preimage(sigma_flat(rep, sys.ring.dim()), Subspace::span(n2, ts));
}

std::pair<Subspace, Subspace> extract_tpair(const TensorTower& tw, const Representation& rep) {
    return {kernel(sigma_flat(rep, tw.system().ring.dim())), extract_j(tw, rep)};
}

// ----------------------------------------------------------------- gauge

namespace {

Rational rpow(const Rational& t, int e) {
    Rational base = e < 0 ? Rational(1) / t : t;
    Rational out = 1;
    for (int i = 0; i < std::abs(e); ++i) out *= base;
    return out;
}

} // namespace

ToeplitzElement gauge(const Rational& t, const ToeplitzElement& x) {
    if (sgn(t) == 0) throw ZeroScalar("the gauge action needs a nonzero scalar");
    ToeplitzElement out(x.ring());
    for (const auto& [g, v] : x.components()) out.add_component(g, v, rpow(t, g.n - g.m));
    return out;
}

CpElement gauge(const Rational& t, const CpElement& x) { return {x.ctx, gauge(t, x.rep)}; }

std::map<int, ToeplitzElement> homogeneous_components(const std::vector<Rational>& ts,
                                                      const std::vector<ToeplitzElement>& evals, int zmin, int zmax) {
    if (zmax < zmin) throw std::invalid_argument("empty z-degree range");
    std::size_t k = static_cast<std::size_t>(zmax - zmin + 1);
    if (ts.size() != evals.size() || ts.size() < k)
        throw DimensionMismatch("need at least one evaluation per z-degree in the range");
    std::set<Rational> seen;
    for (const auto& t : ts) {
        if (sgn(t) == 0) throw ZeroScalar("evaluation points must be nonzero");
        if (!seen.insert(t).second) throw DimensionMismatch("evaluation points must be distinct");
    }
    RingPtr ring;
    for (const auto& e : evals)
        if (e.ring()) ring = e.ring();
    std::map<int, ToeplitzElement> out;
    for (int z = zmin; z <= zmax; ++z) out.emplace(z, ToeplitzElement(ring));
    if (!ring) return out;

    // gauge(t, x) = sum_z t^(-z) x_z
    Matrix v(ts.size(), k);
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t c = 0; c < k; ++c) v(i, c) = rpow(ts[i], -(zmin + static_cast<int>(c)));
    std::set<GradePair> grades;
    for (const auto& e : evals) {
        if (e.ring() && e.ring() != ring) throw SystemMismatch("evaluations come from different rings");
        for (const auto& [g, vec] : e.components()) grades.insert(g);
    }
    for (GradePair g : grades) {
        std::size_t dim = ring->component_dim(g);
        std::vector<Vec> parts(k, zero_vec(dim));
        for (std::size_t coord = 0; coord < dim; ++coord) {
            Vec rhs(ts.size(), Rational(0));
            for (std::size_t i = 0; i < ts.size(); ++i)
                if (const Vec* c = evals[i].component(g)) rhs[i] = (*c)[coord];
            auto sol = solve(v, rhs);
            if (!sol) throw DimensionMismatch("evaluations are inconsistent with the z-degree range");
            for (std::size_t c = 0; c < k; ++c) parts[c][coord] = (*sol)[c];
        }
        for (std::size_t c = 0; c < k; ++c) out[zmin + static_cast<int>(c)].add_component(g, parts[c]);
    }
    return out;
}

// ------------------------------------------------------------ uniqueness

UniquenessReport graded_uniqueness_check(const TensorTower& tw, const Subspace& j) {
    if (!check_fs(tw).holds()) throw FsViolation("graded uniqueness check needs condition (FS)");
    CompatibleIdeal ci = validate_ideal(tw, j);
    if (!ci.ok()) throw HypothesisViolated("J must be a faithful psi-compatible two-sided ideal");
    const auto& ring = tw.system().ring;
    std::size_t n = ring.dim();
    Subspace dif = delta_inverse_f(tw), kd = ker_delta(tw);

    std::vector<Vec> candidates = dif.basis();
    for (std::size_t i = 0; i < n; ++i)
        if (dif.contains(unit_vec(n, i))) candidates.push_back(unit_vec(n, i));

    UniquenessReport rep;
    for (const auto& v : candidates) {
        if (j.contains(v)) continue;
        ++rep.candidates_tried;
        Subspace bigger = ideal_closure(ring, j.sum(Subspace::span(n, {v})));
        if (bigger.is_subset_of(dif) && bigger.intersect(kd).dim() == 0) {
            rep.maximal = false;
            rep.larger = bigger;
            break;
        }
    }
    return rep;
}

} // namespace cpr
