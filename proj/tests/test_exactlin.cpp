#include "fixtures.hpp"

#include <doctest.h>

using namespace cpr;

namespace {

Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int zero_bias = 0) {
    Matrix m(r, c);
    std::uniform_int_distribution<int> z(0, 3);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (z(rng) >= zero_bias) m(i, j) = fx::small_rational(rng);
    return m;
}

std::vector<Vec> random_vecs(std::mt19937& rng, std::size_t count, std::size_t n) {
    std::vector<Vec> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(fx::random_vec(rng, n));
    return out;
}

// Rank by fraction-free elimination on a copy, kept apart from rref().
std::size_t oracle_rank(Matrix m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
        if (p == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            Rational a = m(i, c), b = m(r, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = m(i, j) * b - m(r, j) * a;
        }
        ++r;
    }
    return r;
}

} // namespace

TEST_CASE("rationals parse and print") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-6/4") == make_rational(-3, 2));
    CHECK(to_string(make_rational(4, -6)) == "-2/3");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("x"));
}

TEST_CASE("rank, nullspace and solve (random)") {
    std::mt19937 rng(71);
    for (int it = 0; it < 60; ++it) {
        std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        Matrix a = random_matrix(rng, r, c, 2);
        CHECK(rank(a) == oracle_rank(a));
        auto ns = nullspace(a);
        CHECK(rank(a) + ns.size() == c);
        for (const auto& v : ns) CHECK(is_zero(a.apply(v)));
        Vec x = fx::random_vec(rng, c);
        auto sol = solve(a, a.apply(x));
        REQUIRE(sol.has_value());
        CHECK(a.apply(*sol) == a.apply(x));
        auto rr = rref(a);
        CHECK(rr.rref.rows() == rank(a));
        for (std::size_t i = 0; i < rr.pivots.size(); ++i) CHECK(rr.rref(i, rr.pivots[i]) == 1);
    }
    Matrix sing(2, 2);
    sing(0, 0) = 1;
    CHECK_FALSE(solve(sing, unit_vec(2, 1)).has_value());
    CHECK_FALSE(inverse(sing).has_value());
}

TEST_CASE("inverse and matrix algebra (random)") {
    std::mt19937 rng(73);
    for (int it = 0; it < 30; ++it) {
        std::size_t n = 1 + rng() % 5;
        Matrix a = random_matrix(rng, n, n), b = random_matrix(rng, n, n), c = random_matrix(rng, n, n);
        CHECK((a * b) * c == a * (b * c));
        CHECK((a + b) * c == a * c + b * c);
        CHECK((a * b).transpose() == b.transpose() * a.transpose());
        if (auto inv = inverse(a)) {
            CHECK(a * *inv == Matrix::identity(n));
            CHECK(*inv * a == Matrix::identity(n));
        } else {
            CHECK(rank(a) < n);
        }
    }
}

TEST_CASE("subspace lattice identities (random)") {
    std::mt19937 rng(79);
    for (int it = 0; it < 50; ++it) {
        std::size_t n = 2 + rng() % 5;
        Subspace u = Subspace::span(n, random_vecs(rng, rng() % (n + 1), n));
        Subspace v = Subspace::span(n, random_vecs(rng, rng() % (n + 1), n));
        CHECK(u.sum(v).dim() + u.intersect(v).dim() == u.dim() + v.dim());
        CHECK(u.is_subset_of(u.sum(v)));
        CHECK(u.intersect(v).is_subset_of(v));
        CHECK(u.sum(v) == v.sum(u));
        Subspace both = u.intersect(v);
        for (const auto& b : both.basis()) CHECK((u.contains(b) && v.contains(b)));
        Vec x = zero_vec(n);
        std::vector<Rational> cs;
        for (const auto& b : u.basis()) {
            cs.push_back(fx::small_rational(rng));
            axpy(x, cs.back(), b);
        }
        auto co = u.coords_of(x);
        REQUIRE(co.has_value());
        CHECK(*co == cs);
        CHECK(is_zero(u.reduce(x)));
    }
    CHECK(Subspace::coordinates(3, {2, 0}).dim() == 2);
    CHECK(Subspace::full(3) == Subspace::coordinates(3, {0, 1, 2}));
    CHECK(Subspace(3).dim() == 0);
}

TEST_CASE("quotients, kernels, preimages (random)") {
    std::mt19937 rng(83);
    for (int it = 0; it < 40; ++it) {
        std::size_t n = 2 + rng() % 5, m = 1 + rng() % 5;
        Subspace rel = Subspace::span(n, random_vecs(rng, rng() % n, n));
        QuotientSpace q(n, rel);
        CHECK(q.dim() + rel.dim() == n);
        for (const auto& r : rel.basis()) CHECK(is_zero(q.project(r)));
        Vec c = fx::random_vec(rng, q.dim());
        CHECK(q.project(q.section(c)) == c);
        CHECK(q.project_matrix() * q.section_matrix() == Matrix::identity(q.dim()));

        Matrix a = random_matrix(rng, m, n, 1);
        CHECK(kernel(a).dim() + image(a).dim() == n);
        Subspace target = Subspace::span(m, random_vecs(rng, rng() % (m + 1), m));
        Subspace pre = preimage(a, target);
        for (const auto& b : pre.basis()) CHECK(target.contains(a.apply(b)));
        CHECK(kernel(a).is_subset_of(pre));
        // dim preimage = dim ker + dim (target ∩ image)
        CHECK(pre.dim() == kernel(a).dim() + target.intersect(image(a)).dim());
    }
}

TEST_CASE("tail intersection agrees with intersecting a coordinate subspace") {
    std::mt19937 rng(89);
    for (int it = 0; it < 40; ++it) {
        std::size_t n = 2 + rng() % 6, from = rng() % n;
        auto gens = random_vecs(rng, 1 + rng() % n, n);
        for (auto& g : gens)
            for (std::size_t k = 0; k < from; ++k)
                if (rng() % 2) g[k] = 0;
        std::vector<std::size_t> tail;
        for (std::size_t k = from; k < n; ++k) tail.push_back(k);
        CHECK(tail_intersection(n, gens, from) == Subspace::span(n, gens).intersect(Subspace::coordinates(n, tail)));
    }
}
