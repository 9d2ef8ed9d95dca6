#include "cpr/tensorpow.hpp"

#include "cpr/errors.hpp"
#include "cpr/tensor_cache.hpp"

namespace cpr {

TensorTower::TensorTower(SystemPtr sys, int cap) : sys_(std::move(sys)), cap_(cap) {
    if (!sys_) throw std::invalid_argument("TensorTower needs a system");
    check_shapes(*sys_);
}

void TensorTower::set_persistent_cache(std::string dir) {
    std::lock_guard lock(mu_);
    cache_dir_ = std::move(dir);
    fingerprint_ = cache_dir_.empty() ? std::string() : system_to_json(*sys_).dump();
}

void TensorTower::check_level(int n) const {
    if (n < 0) throw LevelMismatch("negative tensor level");
    if (n > cap_)
        throw CapExceeded("tensor level " + std::to_string(n) + " exceeds the level cap " + std::to_string(cap_));
}

const TensorSpace& TensorTower::space(Side side, int n) const {
    check_level(n);
    std::lock_guard lock(mu_);
    if (n == 0) side = Side::Q;  // both sides share R at level 0
    auto it = spaces_.find({side, n});
    if (it != spaces_.end()) return it->second;
    return build(side, n);
}

const TensorSpace& TensorTower::build(Side side, int n) const {
    const auto& R = sys_->ring;
    std::size_t rd = R.dim();
    TensorSpace ts;
    ts.side = side;
    ts.level = n;
    if (n == 0) {
        ts.free_dim = rd;
        ts.balanced = quotient(rd, Subspace(rd));
        ts.words.assign(rd, {});
        ts.left = R.mult;
        ts.right = R.mult;
        return spaces_.emplace(std::make_pair(side, n), std::move(ts)).first->second;
    }
    const auto& M = module(side);
    std::size_t d1 = M.dim();
    if (n == 1) {
        ts.free_dim = d1;
        ts.balanced = quotient(d1, Subspace(d1));
        for (std::size_t i = 0; i < d1; ++i) ts.words.push_back({static_cast<int>(i)});
        ts.prefix.assign(d1, 0);
        for (std::size_t i = 0; i < d1; ++i) ts.last.push_back(i);
        ts.left = M.left;
        ts.right = M.right;
        return spaces_.emplace(std::make_pair(side, n), std::move(ts)).first->second;
    }

    const TensorSpace& below = space(side, n - 1);
    std::size_t db = below.dim();
    ts.free_dim = db * d1;
    auto idx = [d1](std::size_t a, std::size_t b) { return a * d1 + b; };

    std::string key;
    std::optional<Matrix> cached;
    if (!cache_dir_.empty()) {
        key = cache_key(fingerprint_ + "|" + side_name(side) + "|" + std::to_string(n) + "|v" +
                        std::to_string(kTensorCacheVersion));
        cached = cache_load(cache_dir_, key);
        if (cached && cached->cols() != ts.free_dim) cached.reset();
    }

    Subspace rel;
    if (cached) {
        std::vector<Vec> rows;
        for (std::size_t i = 0; i < cached->rows(); ++i) rows.push_back(cached->row(i));
        rel = Subspace::span(ts.free_dim, rows);
    } else {
        // x.r (x) y - x (x) r.y for basis x, r, y
        std::vector<Vec> gens;
        for (std::size_t a = 0; a < db; ++a)
            for (std::size_t r = 0; r < rd; ++r)
                for (std::size_t b = 0; b < d1; ++b) {
                    Vec g = zero_vec(ts.free_dim);
                    const Vec& xr = below.right[a][r];
                    for (std::size_t k = 0; k < db; ++k)
                        if (sgn(xr[k]) != 0) g[idx(k, b)] += xr[k];
                    const Vec& ry = M.left[r][b];
                    for (std::size_t l = 0; l < d1; ++l)
                        if (sgn(ry[l]) != 0) g[idx(a, l)] -= ry[l];
                    if (!is_zero(g)) gens.push_back(std::move(g));
                }
        rel = Subspace::span(ts.free_dim, gens);
        if (!cache_dir_.empty()) cache_store(cache_dir_, key, Matrix::from_rows(rel.basis(), ts.free_dim));
    }
    ts.balanced = quotient(ts.free_dim, rel);

    for (std::size_t c : ts.balanced.representative_columns()) {
        std::size_t a = c / d1, b = c % d1;
        ts.prefix.push_back(a);
        ts.last.push_back(b);
        auto w = below.words[a];
        w.push_back(static_cast<int>(b));
        ts.words.push_back(std::move(w));
    }
    std::size_t dn = ts.dim();
    ts.left.assign(rd, std::vector<Vec>(dn));
    ts.right.assign(dn, std::vector<Vec>(rd));
    for (std::size_t i = 0; i < dn; ++i) {
        std::size_t a = ts.prefix[i], b = ts.last[i];
        for (std::size_t r = 0; r < rd; ++r) {
            // r.(a (x) b) = (r.a) (x) b ;  (a (x) b).r = a (x) (b.r)
            Vec lv = zero_vec(ts.free_dim);
            const Vec& ra = below.left[r][a];
            for (std::size_t k = 0; k < db; ++k)
                if (sgn(ra[k]) != 0) lv[idx(k, b)] = ra[k];
            ts.left[r][i] = ts.balanced.project(lv);
            Vec rv = zero_vec(ts.free_dim);
            const Vec& br = M.right[b][r];
            for (std::size_t l = 0; l < d1; ++l)
                if (sgn(br[l]) != 0) rv[idx(a, l)] = br[l];
            ts.right[i][r] = ts.balanced.project(rv);
        }
    }
    return spaces_.emplace(std::make_pair(side, n), std::move(ts)).first->second;
}

Vec TensorTower::act_left(Side side, int n, const Vec& r, const Vec& x) const {
    const TensorSpace& ts = space(side, n);
    if (r.size() != sys_->ring.dim() || x.size() != ts.dim()) throw DimensionMismatch("act_left: vector length");
    Vec out = zero_vec(ts.dim());
    for (std::size_t a = 0; a < r.size(); ++a) {
        if (sgn(r[a]) == 0) continue;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (sgn(x[i]) != 0) axpy(out, r[a] * x[i], ts.left[a][i]);
    }
    return out;
}

Vec TensorTower::act_right(Side side, int n, const Vec& x, const Vec& r) const {
    const TensorSpace& ts = space(side, n);
    if (r.size() != sys_->ring.dim() || x.size() != ts.dim()) throw DimensionMismatch("act_right: vector length");
    Vec out = zero_vec(ts.dim());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (sgn(x[i]) == 0) continue;
        for (std::size_t a = 0; a < r.size(); ++a)
            if (sgn(r[a]) != 0) axpy(out, x[i] * r[a], ts.right[i][a]);
    }
    return out;
}

const std::vector<std::vector<Vec>>& TensorTower::embed_table(Side side, int k, int l) const {
    std::lock_guard lock(mu_);
    auto key = std::make_tuple(side, k, l);
    auto it = embeds_.find(key);
    if (it != embeds_.end()) return it->second;

    const TensorSpace& sk = space(side, k);
    const TensorSpace& sl = space(side, l);
    const TensorSpace& top = space(side, k + l);
    std::size_t d1 = module(side).dim();
    std::vector<std::vector<Vec>> tab(sk.dim(), std::vector<Vec>(sl.dim()));
    for (std::size_t i = 0; i < sk.dim(); ++i)
        for (std::size_t j = 0; j < sl.dim(); ++j) {
            if (l == 1) {
                tab[i][j] = top.balanced.project_unit(i * d1 + j);
                continue;
            }
            // x_i (x) (a (x) b) = (x_i (x) a) (x) b
            const Vec& z = embed_table(side, k, l - 1)[i][sl.prefix[j]];
            std::size_t b = sl.last[j];
            Vec v = zero_vec(top.dim());
            for (std::size_t t = 0; t < z.size(); ++t)
                if (sgn(z[t]) != 0) axpy(v, z[t], top.balanced.project_unit(t * d1 + b));
            tab[i][j] = std::move(v);
        }
    return embeds_.emplace(key, std::move(tab)).first->second;
}

Vec TensorTower::embed(Side side, int k, const Vec& x, int l, const Vec& y) const {
    if (l == 0) {
        if (k == 0) return sys_->ring.mul(x, y);
        return act_right(side, k, x, y);
    }
    if (k == 0) return act_left(side, l, x, y);
    check_level(k + l);
    const auto& tab = embed_table(side, k, l);
    if (x.size() != tab.size() || (!tab.empty() && y.size() != tab[0].size()))
        throw DimensionMismatch("embed: vector length");
    Vec out = zero_vec(dim(side, k + l));
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (sgn(x[i]) == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (sgn(y[j]) != 0) axpy(out, x[i] * y[j], tab[i][j]);
    }
    return out;
}

ModuleElement TensorTower::tensor_embed(const ModuleElement& x, const ModuleElement& y) const {
    if (x.level > 0 && y.level > 0 && x.side != y.side)
        throw SideMismatch(std::string("cannot tensor ") + side_name(x.side) + " with " + side_name(y.side));
    Side side = x.level > 0 ? x.side : y.side;
    return {side, x.level + y.level, embed(side, x.level, x.coords, y.level, y.coords)};
}

Vec TensorTower::word_vector(Side side, const std::vector<int>& letters) const {
    if (letters.empty()) throw LevelMismatch("empty word has no module vector");
    std::size_t d1 = module(side).dim();
    Vec v = unit_vec(d1, static_cast<std::size_t>(letters[0]));
    for (std::size_t t = 1; t < letters.size(); ++t)
        v = embed(side, static_cast<int>(t), v, 1, unit_vec(d1, static_cast<std::size_t>(letters[t])));
    return v;
}

const std::pair<std::size_t, Vec>& TensorTower::split(Side side, int n, std::size_t i, int k) const {
    if (k < 1 || k >= n) throw LevelMismatch("split point must lie strictly inside the word");
    std::lock_guard lock(mu_);
    auto key = std::make_tuple(side, n, i, k);
    auto it = splits_.find(key);
    if (it != splits_.end()) return it->second;
    const TensorSpace& ts = space(side, n);
    std::size_t head = i;
    for (int lvl = n; lvl > k; --lvl) head = space(side, lvl).prefix[head];
    const auto& w = ts.words[i];
    Vec tail = word_vector(side, std::vector<int>(w.begin() + k, w.end()));
    return splits_.emplace(key, std::make_pair(head, std::move(tail))).first->second;
}

const std::vector<std::vector<Vec>>& TensorTower::psi_table(int n) const {
    std::lock_guard lock(mu_);
    auto it = psi_tables_.find(n);
    if (it != psi_tables_.end()) return it->second;
    const auto& R = sys_->ring;
    std::size_t rd = R.dim();
    std::size_t dp = dim(Side::P, n), dq = dim(Side::Q, n);
    std::vector<std::vector<Vec>> tab(dp, std::vector<Vec>(dq));
    if (n == 0) {
        tab = R.mult;
    } else if (n == 1) {
        tab = sys_->psi.psi;
    } else {
        // psi_n(p1 p2 (x) q1 q2) = psi(p1 . psi_{n-1}(p2 (x) q1) (x) q2)
        const auto& lower = psi_table(n - 1);
        const TensorSpace& qs = space(Side::Q, n);
        for (std::size_t i = 0; i < dp; ++i) {
            const auto& [p1, p2] = split(Side::P, n, i, 1);
            for (std::size_t j = 0; j < dq; ++j) {
                std::size_t q1 = qs.prefix[j], q2 = qs.last[j];
                Vec r = zero_vec(rd);
                for (std::size_t k = 0; k < p2.size(); ++k)
                    if (sgn(p2[k]) != 0) axpy(r, p2[k], lower[k][q1]);
                Vec v = act_right(Side::P, 1, unit_vec(sys_->p.dim(), p1), r);
                tab[i][j] = sys_->psi.apply(v, unit_vec(sys_->q.dim(), q2));
            }
        }
    }
    return psi_tables_.emplace(n, std::move(tab)).first->second;
}

const Vec& TensorTower::psi_basis(int n, std::size_t i, std::size_t j) const { return psi_table(n)[i][j]; }

Vec TensorTower::psi_n(int n, const Vec& p, const Vec& q) const {
    const auto& tab = psi_table(n);
    if (p.size() != dim(Side::P, n) || q.size() != dim(Side::Q, n)) throw DimensionMismatch("psi_n: vector length");
    Vec out = zero_vec(sys_->ring.dim());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (sgn(p[i]) == 0) continue;
        for (std::size_t j = 0; j < q.size(); ++j)
            if (sgn(q[j]) != 0) axpy(out, p[i] * q[j], tab[i][j]);
    }
    return out;
}

ModuleElement TensorTower::psi_n(const ModuleElement& p, const ModuleElement& q) const {
    if (p.level != q.level)
        throw LevelMismatch("psi_n needs equal levels, got " + std::to_string(p.level) + " and " +
                            std::to_string(q.level));
    if (p.level > 0 && (p.side != Side::P || q.side != Side::Q))
        throw SideMismatch("psi_n pairs an element of P^n with an element of Q^n");
    return {Side::Q, 0, psi_n(p.level, p.coords, q.coords)};
}

} // namespace cpr
