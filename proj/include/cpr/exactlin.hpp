#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cpr {

using Rational = mpq_class;
using Vec = std::vector<Rational>;

Rational make_rational(long num, long den = 1);
Rational parse_rational(const std::string& text);  // "a", "-a", "a/b"
std::string to_string(const Rational& q);

Vec zero_vec(std::size_t n);
Vec unit_vec(std::size_t n, std::size_t i);
bool is_zero(const Vec& v);
void axpy(Vec& y, const Rational& a, const Vec& x);  // y += a*x
Vec scaled(const Vec& x, const Rational& a);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);

// Dense row-major matrix.  Matrices here act on column vectors, so column j
// of an operator holds the image of basis vector j.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);
    static Matrix from_cols(const std::vector<Vec>& cols, std::size_t rows);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Vec row(std::size_t i) const;
    Vec col(std::size_t j) const;
    void set_col(std::size_t j, const Vec& v);
    Vec apply(const Vec& x) const;
    Matrix transpose() const;
    Vec flatten() const;  // row-major
    bool is_zero() const;

    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(const Rational& s) const;
    bool operator==(const Matrix& o) const;

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Rational> a_;
};

struct RrefResult {
    Matrix rref;                      // nonzero rows only
    std::vector<std::size_t> pivots;  // one pivot column per row
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);
std::vector<Vec> nullspace(const Matrix& a);  // basis of {x : a x = 0}
std::optional<Vec> solve(const Matrix& a, const Vec& b);
std::optional<Matrix> inverse(const Matrix& a);

// A linear subspace of Q^n stored as the nonzero rows of its RREF.  Two
// subspaces are equal exactly when their stored rows agree.
class Subspace {
public:
    explicit Subspace(std::size_t ambient = 0) : n_(ambient) {}

    static Subspace span(std::size_t ambient, const std::vector<Vec>& gens);
    static Subspace full(std::size_t ambient);
    static Subspace coordinates(std::size_t ambient, const std::vector<std::size_t>& idx);

    std::size_t ambient_dim() const { return n_; }
    std::size_t dim() const { return rows_.size(); }
    const std::vector<Vec>& basis() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return piv_; }

    Vec reduce(const Vec& v) const;  // remainder after clearing pivots
    bool contains(const Vec& v) const;
    std::optional<Vec> coords_of(const Vec& v) const;  // in terms of basis()
    bool is_subset_of(const Subspace& o) const;

    Subspace sum(const Subspace& o) const;
    Subspace intersect(const Subspace& o) const;
    bool equals(const Subspace& o) const { return *this == o; }
    bool operator==(const Subspace& o) const;

private:
    void check_same(const Subspace& o) const;
    std::size_t n_;
    std::vector<Vec> rows_;
    std::vector<std::size_t> piv_;
};

// Q^n / relations.  Quotient coordinates are the non-pivot columns of the
// relation RREF, so section() sends each quotient basis vector to a unit
// vector of the ambient space.
class QuotientSpace {
public:
    QuotientSpace() = default;
    QuotientSpace(std::size_t ambient, Subspace relations);

    std::size_t ambient_dim() const { return n_; }
    std::size_t dim() const { return free_.size(); }
    const Subspace& relations() const { return rel_; }
    const std::vector<std::size_t>& representative_columns() const { return free_; }

    Vec project(const Vec& v) const;
    Vec section(const Vec& c) const;
    const Vec& project_unit(std::size_t j) const { return proj_cols_[j]; }
    Matrix project_matrix() const;
    Matrix section_matrix() const;

private:
    std::size_t n_ = 0;
    Subspace rel_;
    std::vector<std::size_t> free_;
    std::vector<Vec> proj_cols_;
};

QuotientSpace quotient(std::size_t ambient, const Subspace& relations);

Subspace kernel(const Matrix& a);
Subspace image(const Matrix& a);
// {x : a x in target}
Subspace preimage(const Matrix& a, const Subspace& target);
// RREF rows of gens whose pivot lies at or after column `from`; with columns
// ordered "unwanted first", these span gens ∩ {x : x_c = 0 for c < from}.
Subspace tail_intersection(std::size_t ambient, const std::vector<Vec>& gens, std::size_t from);

} // namespace cpr
