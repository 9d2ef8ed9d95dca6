#include "fixtures.hpp"

#include "cpr/crossedprod.hpp"
#include "cpr/errors.hpp"

#include <doctest.h>

using namespace cpr;

namespace {

std::vector<ToeplitzElement> letters(const RingPtr& ring) {
    std::size_t n = ring->system().ring.dim();
    std::vector<ToeplitzElement> out;
    for (Kind k : {Kind::R, Kind::Q, Kind::P})
        for (std::size_t i = 0; i < n; ++i) out.push_back(embed(ring, k, unit_vec(n, i)));
    return out;
}

} // namespace

TEST_CASE("crossed product rule") {
    auto sys = fx::perm3_system();
    Vec u0 = unit_vec(3, 0), u1 = unit_vec(3, 1), u2 = unit_vec(3, 2);
    // phi moves each basis idempotent one step along the 3-cycle
    CHECK(phi_power(*sys, 1).apply(u0) == u1);
    CHECK(phi_power(*sys, -1).apply(u0) == u2);
    CHECK(phi_power(*sys, 3) == Matrix::identity(3));

    CHECK(cross_mul(crossed_term(sys, u0, 0), crossed_term(sys, u0, 0)) == crossed_term(sys, u0, 0));
    CHECK(cross_mul(crossed_term(sys, u0, 0), crossed_term(sys, u1, 0)).is_zero());
    CHECK(cross_mul(crossed_term(sys, u1, 1), crossed_term(sys, u0, -1)) == crossed_term(sys, u1, 0));
    CHECK(cross_mul(crossed_term(sys, u0, 1), crossed_term(sys, u0, -1)).is_zero());
    CHECK(cross_mul(crossed_term(sys, u1, 2), crossed_term(sys, zero_vec(3), 5)).is_zero());
    CHECK(crossed_to_string(crossed_term(sys, scaled(u1, Rational(-1, 2)), 2)) == "[-1/2*u2, 2]");

    auto other = fx::perm3_system();
    CHECK_THROWS_AS(cross_mul(crossed_term(sys, u0, 0), crossed_term(other, u0, 0)), SystemMismatch);
    CHECK_THROWS_AS(CrossedElement(fx::graph_system(fx::a2_graph())), NotAutomorphism);
}

TEST_CASE("crossed products are associative (random)") {
    std::mt19937 rng(51);
    auto sys = fx::perm3_system();
    auto rnd = [&] {
        CrossedElement x(sys);
        for (int t = 0; t < 3; ++t) x.add(std::uniform_int_distribution<int>(-3, 3)(rng), fx::random_vec(rng, 3));
        return x;
    };
    for (int it = 0; it < 30; ++it) {
        auto a = rnd(), b = rnd(), c = rnd();
        CHECK(cross_mul(cross_mul(a, b), c) == cross_mul(a, cross_mul(b, c)));
        CHECK(cross_mul(a, b + c) == cross_mul(a, b) + cross_mul(a, c));
    }
}

TEST_CASE("the Toeplitz ring maps homomorphically onto the crossed product") {
    std::mt19937 rng(53);
    auto sys = fx::perm3_system();
    auto ring = fx::ring_of(sys, 8);
    for (int it = 0; it < 25; ++it) {
        auto a = fx::random_element(ring, rng, 2), b = fx::random_element(ring, rng, 2);
        CHECK(toeplitz_to_crossed(a * b) == cross_mul(toeplitz_to_crossed(a), toeplitz_to_crossed(b)));
    }
    auto ls = letters(ring);
    // S(p) T(q) = [p phi(q), 0] and T(q) S(p) = [q phi^-1(p), 0]
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            Vec p = unit_vec(3, i), q = unit_vec(3, j);
            CHECK(toeplitz_to_crossed(ls[6 + i] * ls[3 + j]) ==
                  crossed_term(sys, sys->ring.mul(p, phi_power(*sys, 1).apply(q)), 0));
            CHECK(toeplitz_to_crossed(ls[3 + j] * ls[6 + i]) ==
                  crossed_term(sys, sys->ring.mul(q, phi_power(*sys, -1).apply(p)), 0));
        }
}

TEST_CASE("cp_equal matches crossed-product equality on short words") {
    auto sys = fx::perm3_system();
    auto ring = fx::ring_of(sys, 10);
    auto ctx = std::make_shared<CpContext>(ring, Subspace::full(3));
    // the relation ideal dies in the crossed product
    for (int k = 0; k <= 2; ++k)
        for (int l = 0; l <= 2; ++l)
            for (const auto& g : ctx->relation_generators(k, l)) CHECK(cp_to_crossed({ctx, g}).is_zero());
    auto ls = letters(ring);
    std::vector<ToeplitzElement> words = ls;
    for (const auto& a : ls)
        for (const auto& b : ls) words.push_back(a * b);
    for (std::size_t i = 0; i < words.size(); i += 3)
        for (std::size_t j = 0; j < words.size(); j += 2)
            CHECK(cp_equal({ctx, words[i]}, {ctx, words[j]}) ==
                  (cp_to_crossed({ctx, words[i]}) == cp_to_crossed({ctx, words[j]})));
    CHECK(cp_to_crossed({ctx, ToeplitzElement(ring)}).is_zero());

    auto partial = std::make_shared<CpContext>(ring, Subspace(3));
    CHECK_THROWS_AS(cp_to_crossed({partial, ls[0]}), ContextMismatch);
}
