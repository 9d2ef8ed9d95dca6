#include "cpr/exactlin.hpp"

#include "cpr/errors.hpp"

#include <algorithm>

namespace cpr {

Rational make_rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0) throw FormatError("not a rational: " + text);
    if (q.get_den() == 0) throw FormatError("zero denominator: " + text);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Vec zero_vec(std::size_t n) { return Vec(n, Rational(0)); }

Vec unit_vec(std::size_t n, std::size_t i) {
    Vec v(n, Rational(0));
    v[i] = 1;
    return v;
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

void axpy(Vec& y, const Rational& a, const Vec& x) {
    if (sgn(a) == 0) return;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (sgn(x[i]) != 0) y[i] += a * x[i];
}

Vec scaled(const Vec& x, const Rational& a) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] * a;
    return r;
}

Vec add(const Vec& a, const Vec& b) {
    Vec r = a;
    axpy(r, 1, b);
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r = a;
    axpy(r, -1, b);
    return r;
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, Rational(0)) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw DimensionMismatch("ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::from_cols(const std::vector<Vec>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
    return m;
}

Vec Matrix::row(std::size_t i) const { return Vec(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }

Vec Matrix::col(std::size_t j) const {
    Vec v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

void Matrix::set_col(std::size_t j, const Vec& v) {
    if (v.size() != r_) throw DimensionMismatch("column length");
    for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
}

Vec Matrix::apply(const Vec& x) const {
    if (x.size() != c_) throw DimensionMismatch("matrix-vector size");
    Vec y(r_, Rational(0));
    for (std::size_t j = 0; j < c_; ++j) {
        if (sgn(x[j]) == 0) continue;
        for (std::size_t i = 0; i < r_; ++i) {
            const Rational& e = (*this)(i, j);
            if (sgn(e) != 0) y[i] += e * x[j];
        }
    }
    return y;
}

Matrix Matrix::transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vec Matrix::flatten() const { return a_; }

bool Matrix::is_zero() const { return cpr::is_zero(a_); }

Matrix Matrix::operator*(const Matrix& o) const {
    if (c_ != o.r_) throw DimensionMismatch("matrix product shape");
    Matrix m(r_, o.c_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t k = 0; k < c_; ++k) {
            const Rational& e = (*this)(i, k);
            if (sgn(e) == 0) continue;
            for (std::size_t j = 0; j < o.c_; ++j) {
                const Rational& f = o(k, j);
                if (sgn(f) != 0) m(i, j) += e * f;
            }
        }
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw DimensionMismatch("matrix sum shape");
    Matrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw DimensionMismatch("matrix difference shape");
    Matrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
    return m;
}

Matrix Matrix::scaled(const Rational& s) const {
    Matrix m = *this;
    for (auto& e : m.a_) e *= s;
    return m;
}

bool Matrix::operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

// ------------------------------------------------------------------ RREF

namespace {

// In-place reduction of a list of rows; returns pivots.  Zero rows dropped.
std::vector<std::size_t> reduce_rows(std::vector<Vec>& rows, std::size_t ncols) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t sel = r;
        while (sel < rows.size() && sgn(rows[sel][c]) == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        Rational inv = 1 / rows[r][c];
        for (std::size_t j = c; j < ncols; ++j)
            if (sgn(rows[r][j]) != 0) rows[r][j] *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || sgn(rows[i][c]) == 0) continue;
            Rational f = rows[i][c];
            for (std::size_t j = c; j < ncols; ++j)
                if (sgn(rows[r][j]) != 0) rows[i][j] -= f * rows[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    rows.resize(r);
    return piv;
}

} // namespace

RrefResult rref(const Matrix& m) {
    std::vector<Vec> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    auto piv = reduce_rows(rows, m.cols());
    return {Matrix::from_rows(rows, m.cols()), piv};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::vector<Vec> nullspace(const Matrix& a) {
    auto rr = rref(a);
    std::vector<bool> is_piv(a.cols(), false);
    for (auto p : rr.pivots) is_piv[p] = true;
    std::vector<Vec> out;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_piv[f]) continue;
        Vec v = unit_vec(a.cols(), f);
        for (std::size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.rref(i, f);
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<Vec> solve(const Matrix& a, const Vec& b) {
    if (b.size() != a.rows()) throw DimensionMismatch("solve: rhs length");
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Vec r = a.row(i);
        r.push_back(b[i]);
        rows.push_back(std::move(r));
    }
    auto piv = reduce_rows(rows, a.cols() + 1);
    Vec x = zero_vec(a.cols());
    for (std::size_t i = 0; i < piv.size(); ++i) {
        if (piv[i] == a.cols()) return std::nullopt;
        x[piv[i]] = rows[i][a.cols()];
    }
    return x;
}

std::optional<Matrix> inverse(const Matrix& a) {
    if (a.rows() != a.cols()) return std::nullopt;
    std::size_t n = a.rows();
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < n; ++i) {
        Vec r = a.row(i);
        for (std::size_t j = 0; j < n; ++j) r.push_back(i == j ? Rational(1) : Rational(0));
        rows.push_back(std::move(r));
    }
    auto piv = reduce_rows(rows, 2 * n);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = rows[i][n + j];
    return inv;
}

// -------------------------------------------------------------- Subspace

Subspace Subspace::span(std::size_t ambient, const std::vector<Vec>& gens) {
    Subspace s(ambient);
    s.rows_.reserve(gens.size());
    for (const auto& g : gens) {
        if (g.size() != ambient) throw DimensionMismatch("generator length differs from ambient dimension");
        if (!cpr::is_zero(g)) s.rows_.push_back(g);
    }
    s.piv_ = reduce_rows(s.rows_, ambient);
    return s;
}

Subspace Subspace::full(std::size_t ambient) {
    Subspace s(ambient);
    for (std::size_t i = 0; i < ambient; ++i) {
        s.rows_.push_back(unit_vec(ambient, i));
        s.piv_.push_back(i);
    }
    return s;
}

Subspace Subspace::coordinates(std::size_t ambient, const std::vector<std::size_t>& idx) {
    std::vector<Vec> gens;
    for (auto i : idx) gens.push_back(unit_vec(ambient, i));
    return span(ambient, gens);
}

Vec Subspace::reduce(const Vec& v) const {
    if (v.size() != n_) throw DimensionMismatch("vector length differs from ambient dimension");
    Vec r = v;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        Rational f = r[piv_[i]];
        if (sgn(f) != 0) axpy(r, -f, rows_[i]);
    }
    return r;
}

bool Subspace::contains(const Vec& v) const { return cpr::is_zero(reduce(v)); }

std::optional<Vec> Subspace::coords_of(const Vec& v) const {
    if (!contains(v)) return std::nullopt;
    Vec c(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) c[i] = v[piv_[i]];
    return c;
}

bool Subspace::is_subset_of(const Subspace& o) const {
    check_same(o);
    return std::all_of(rows_.begin(), rows_.end(), [&](const Vec& r) { return o.contains(r); });
}

void Subspace::check_same(const Subspace& o) const {
    if (n_ != o.n_)
        throw DimensionMismatch("subspaces live in ambient dimensions " + std::to_string(n_) + " and " +
                                std::to_string(o.n_));
}

Subspace Subspace::sum(const Subspace& o) const {
    check_same(o);
    std::vector<Vec> g = rows_;
    g.insert(g.end(), o.rows_.begin(), o.rows_.end());
    return span(n_, g);
}

Subspace Subspace::intersect(const Subspace& o) const {
    check_same(o);
    if (rows_.empty() || o.rows_.empty()) return Subspace(n_);
    // v = sum a_i rows_i lies in o  <=>  sum a_i reduce_o(rows_i) = 0
    Matrix m(n_, rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) m.set_col(i, o.reduce(rows_[i]));
    std::vector<Vec> gens;
    for (const auto& a : nullspace(m)) {
        Vec v = zero_vec(n_);
        for (std::size_t i = 0; i < a.size(); ++i) axpy(v, a[i], rows_[i]);
        gens.push_back(std::move(v));
    }
    return span(n_, gens);
}

bool Subspace::operator==(const Subspace& o) const { return n_ == o.n_ && rows_ == o.rows_; }

// --------------------------------------------------------- QuotientSpace

QuotientSpace::QuotientSpace(std::size_t ambient, Subspace relations) : n_(ambient), rel_(std::move(relations)) {
    if (rel_.ambient_dim() != ambient) throw DimensionMismatch("relations live in a different ambient space");
    std::vector<bool> is_piv(n_, false);
    for (auto p : rel_.pivots()) is_piv[p] = true;
    std::vector<long> pos(n_, -1);
    for (std::size_t c = 0; c < n_; ++c)
        if (!is_piv[c]) {
            pos[c] = static_cast<long>(free_.size());
            free_.push_back(c);
        }
    proj_cols_.assign(n_, zero_vec(free_.size()));
    for (std::size_t c = 0; c < n_; ++c)
        if (!is_piv[c]) proj_cols_[c][pos[c]] = 1;
    // e_p  ==  e_p - row  ==  -(non-pivot part of row)
    for (std::size_t i = 0; i < rel_.dim(); ++i) {
        const Vec& row = rel_.basis()[i];
        Vec& pc = proj_cols_[rel_.pivots()[i]];
        for (std::size_t k = 0; k < free_.size(); ++k) pc[k] = -row[free_[k]];
    }
}

Vec QuotientSpace::project(const Vec& v) const {
    if (v.size() != n_) throw DimensionMismatch("project: vector length");
    Vec out = zero_vec(free_.size());
    for (std::size_t c = 0; c < n_; ++c)
        if (sgn(v[c]) != 0) axpy(out, v[c], proj_cols_[c]);
    return out;
}

Vec QuotientSpace::section(const Vec& c) const {
    if (c.size() != free_.size()) throw DimensionMismatch("section: vector length");
    Vec v = zero_vec(n_);
    for (std::size_t k = 0; k < free_.size(); ++k) v[free_[k]] = c[k];
    return v;
}

Matrix QuotientSpace::project_matrix() const { return Matrix::from_cols(proj_cols_, free_.size()); }

Matrix QuotientSpace::section_matrix() const {
    Matrix m(n_, free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) m(free_[k], k) = 1;
    return m;
}

QuotientSpace quotient(std::size_t ambient, const Subspace& relations) { return QuotientSpace(ambient, relations); }

Subspace kernel(const Matrix& a) { return Subspace::span(a.cols(), nullspace(a)); }

Subspace image(const Matrix& a) {
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < a.cols(); ++j) cols.push_back(a.col(j));
    return Subspace::span(a.rows(), cols);
}

Subspace preimage(const Matrix& a, const Subspace& target) {
    if (target.ambient_dim() != a.rows()) throw DimensionMismatch("preimage: target ambient");
    // x maps into target  <=>  reduce_target(a x) = 0, and reduce is linear.
    Matrix m(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) m.set_col(j, target.reduce(a.col(j)));
    return kernel(m);
}

Subspace tail_intersection(std::size_t ambient, const std::vector<Vec>& gens, std::size_t from) {
    Subspace all = Subspace::span(ambient, gens);
    std::vector<Vec> keep;
    for (std::size_t i = 0; i < all.dim(); ++i)
        if (all.pivots()[i] >= from) keep.push_back(all.basis()[i]);
    return Subspace::span(ambient, keep);
}

} // namespace cpr
