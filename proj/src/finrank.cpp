#include "cpr/finrank.hpp"

#include "cpr/errors.hpp"

namespace cpr {

LinOp theta(const TensorTower& tw, int n, const Vec& q, const Vec& p) {
    std::size_t dq = tw.dim(Side::Q, n);
    Matrix t(dq, dq);
    for (std::size_t j = 0; j < dq; ++j) {
        Vec r = tw.psi_n(n, p, unit_vec(dq, j));
        t.set_col(j, tw.act_right(Side::Q, n, q, r));
    }
    return {n, std::move(t), theta_p(tw, n, p, q)};
}

LinOp theta(const TensorTower& tw, const ModuleElement& q, const ModuleElement& p) {
    if (q.level != p.level) throw LevelMismatch("theta needs q and p at the same level");
    return theta(tw, q.level, q.coords, p.coords);
}

Matrix theta_p(const TensorTower& tw, int n, const Vec& p, const Vec& q) {
    std::size_t dp = tw.dim(Side::P, n);
    Matrix s(dp, dp);
    for (std::size_t i = 0; i < dp; ++i) {
        Vec r = tw.psi_n(n, unit_vec(dp, i), q);
        s.set_col(i, tw.act_left(Side::P, n, r, p));
    }
    return s;
}

LinOp delta(const TensorTower& tw, const Vec& r, int n) {
    std::size_t dq = tw.dim(Side::Q, n);
    Matrix t(dq, dq);
    for (std::size_t j = 0; j < dq; ++j) t.set_col(j, tw.act_left(Side::Q, n, r, unit_vec(dq, j)));
    return {n, std::move(t), gamma(tw, r, n)};
}

Matrix gamma(const TensorTower& tw, const Vec& r, int n) {
    std::size_t dp = tw.dim(Side::P, n);
    Matrix s(dp, dp);
    for (std::size_t i = 0; i < dp; ++i) s.set_col(i, tw.act_right(Side::P, n, unit_vec(dp, i), r));
    return s;
}

Matrix tensor_extend(const TensorTower& tw, int m, const Matrix& t) {
    // basis of Q^(m+1) is (a (x) b) with a a basis vector of Q^m
    if (m < 1) throw LevelMismatch("tensor_extend starts at level 1");
    std::size_t top = tw.dim(Side::Q, m + 1), d1 = tw.dim(Side::Q, 1);
    const TensorSpace& ts = tw.space(Side::Q, m + 1);
    Matrix out(top, top);
    for (std::size_t i = 0; i < top; ++i) {
        Vec ta = t.col(ts.prefix[i]);
        out.set_col(i, tw.embed(Side::Q, m, ta, 1, unit_vec(d1, ts.last[i])));
    }
    return out;
}

FiniteRankSpace finite_rank_space(const TensorTower& tw, int n, Side acts_on) {
    std::size_t dq = tw.dim(Side::Q, n), dp = tw.dim(Side::P, n);
    std::size_t md = acts_on == Side::Q ? dq : dp;
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < dq; ++i)
        for (std::size_t j = 0; j < dp; ++j) {
            if (acts_on == Side::Q)
                gens.push_back(theta(tw, n, unit_vec(dq, i), unit_vec(dp, j)).t.flatten());
            else
                gens.push_back(theta_p(tw, n, unit_vec(dp, j), unit_vec(dq, i)).flatten());
        }
    return {n, acts_on, md, Subspace::span(md * md, gens)};
}

namespace {

std::optional<Vec> decompose(const TensorTower& tw, int n, const Matrix& t, Side acts_on) {
    std::size_t dq = tw.dim(Side::Q, n), dp = tw.dim(Side::P, n);
    std::size_t md = acts_on == Side::Q ? dq : dp;
    if (t.rows() != md || t.cols() != md) throw DimensionMismatch("operator has the wrong shape");
    std::vector<Vec> cols;
    for (std::size_t i = 0; i < dq; ++i)
        for (std::size_t j = 0; j < dp; ++j)
            cols.push_back(acts_on == Side::Q ? theta(tw, n, unit_vec(dq, i), unit_vec(dp, j)).t.flatten()
                                              : theta_p(tw, n, unit_vec(dp, j), unit_vec(dq, i)).flatten());
    if (cols.empty()) {
        if (t.is_zero()) return Vec{};
        return std::nullopt;
    }
    return solve(Matrix::from_cols(cols, md * md), t.flatten());
}

} // namespace

std::optional<Vec> theta_decompose(const TensorTower& tw, int n, const Matrix& t) {
    return decompose(tw, n, t, Side::Q);
}

std::optional<Vec> theta_p_decompose(const TensorTower& tw, int n, const Matrix& s) {
    return decompose(tw, n, s, Side::P);
}

FsReport check_fs(const TensorTower& tw, int n) {
    // For finitely generated modules a basis is a finite set, and an operator
    // fixing a basis is the identity, so (FS) is "identity is finite rank".
    FsReport rep;
    rep.theta_certificate = theta_decompose(tw, n, Matrix::identity(tw.dim(Side::Q, n)));
    rep.delta_certificate = theta_p_decompose(tw, n, Matrix::identity(tw.dim(Side::P, n)));
    rep.q_side = rep.theta_certificate.has_value();
    rep.p_side = rep.delta_certificate.has_value();
    return rep;
}

namespace {

// r -> flattened Delta(r), as a (dq*dq) x rd matrix
Matrix delta_map(const TensorTower& tw) {
    std::size_t rd = tw.system().ring.dim(), dq = tw.dim(Side::Q, 1);
    Matrix m(dq * dq, rd);
    for (std::size_t r = 0; r < rd; ++r) m.set_col(r, delta(tw, unit_vec(rd, r)).t.flatten());
    return m;
}

} // namespace

Subspace ker_delta(const TensorTower& tw) { return kernel(delta_map(tw)); }

Subspace delta_inverse_f(const TensorTower& tw) {
    return preimage(delta_map(tw), finite_rank_space(tw, 1).span);
}

Subspace two_sided_annihilator(const StructuredRing& ring, const Subspace& s) {
    std::size_t n = ring.dim();
    // conditions x y_k = 0 and y_k x = 0, linear in x
    Matrix a(2 * n * s.dim(), n);
    for (std::size_t k = 0; k < s.dim(); ++k) {
        const Vec& y = s.basis()[k];
        for (std::size_t i = 0; i < n; ++i) {
            Vec e = unit_vec(n, i);
            Vec xy = ring.mul(e, y), yx = ring.mul(y, e);
            for (std::size_t c = 0; c < n; ++c) {
                a(2 * n * k + c, i) = xy[c];
                a(2 * n * k + n + c, i) = yx[c];
            }
        }
    }
    return kernel(a);
}

CanonicalIdeals canonical_ideals(const TensorTower& tw) {
    FsReport fs = check_fs(tw);
    if (!fs.holds())
        throw FsViolation(std::string("condition (FS) fails on the ") + (fs.q_side ? "P" : "Q") +
                          " side; finite-rank calculus is not available");
    CanonicalIdeals ci;
    ci.ker_delta = ker_delta(tw);
    ci.delta_inv_f = delta_inverse_f(tw);
    ci.ker_perp = two_sided_annihilator(tw.system().ring, ci.ker_delta);
    ci.j_max = ci.delta_inv_f.intersect(ci.ker_perp);
    ci.j_max_faithful = ci.j_max.intersect(ci.ker_delta).dim() == 0;
    return ci;
}

std::optional<AdjointSolution> solve_adjoint(const TensorTower& tw, int n, const Matrix& t) {
    std::size_t dq = tw.dim(Side::Q, n), dp = tw.dim(Side::P, n), rd = tw.system().ring.dim();
    if (t.rows() != dq || t.cols() != dq) throw DimensionMismatch("solve_adjoint: operator shape");
    // unknown S(a,b) at index a*dp + b; equation per (i, j, coordinate c):
    //   sum_a S(a,i) psi_n(p_a, q_j)[c] = psi_n(p_i, T q_j)[c]
    std::size_t neq = dp * dq * rd, nun = dp * dp;
    Matrix a(neq, nun);
    Vec rhs(neq, Rational(0));
    for (std::size_t i = 0; i < dp; ++i)
        for (std::size_t j = 0; j < dq; ++j) {
            Vec target = tw.psi_n(n, unit_vec(dp, i), t.col(j));
            for (std::size_t c = 0; c < rd; ++c) {
                std::size_t row = (i * dq + j) * rd + c;
                rhs[row] = target[c];
                for (std::size_t x = 0; x < dp; ++x) a(row, x * dp + i) = tw.psi_basis(n, x, j)[c];
            }
        }
    auto sol = solve(a, rhs);
    if (!sol) return std::nullopt;
    Matrix s(dp, dp);
    for (std::size_t x = 0; x < dp; ++x)
        for (std::size_t y = 0; y < dp; ++y) s(x, y) = (*sol)[x * dp + y];
    return AdjointSolution{std::move(s), nullspace(a).empty()};
}

bool is_right_linear(const TensorTower& tw, int n, const Matrix& t) {
    std::size_t dq = tw.dim(Side::Q, n), rd = tw.system().ring.dim();
    for (std::size_t j = 0; j < dq; ++j)
        for (std::size_t r = 0; r < rd; ++r) {
            Vec er = unit_vec(rd, r);
            Vec lhs = t.apply(tw.act_right(Side::Q, n, unit_vec(dq, j), er));
            Vec rhs = tw.act_right(Side::Q, n, t.col(j), er);
            if (lhs != rhs) return false;
        }
    return true;
}

} // namespace cpr
