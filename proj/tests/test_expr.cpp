#include "fixtures.hpp"

#include "cpr/errors.hpp"
#include "cpr/expr.hpp"

#include <doctest.h>

using namespace cpr;

TEST_CASE("parsing generators and sugar") {
    auto sys = fx::graph_system(fx::a2_graph());
    auto ring = fx::ring_of(sys);
    ToeplitzElement u = embed(ring, Kind::R, unit_vec(2, 0));
    ToeplitzElement x = embed(ring, Kind::Q, unit_vec(1, 0));
    ToeplitzElement y = embed(ring, Kind::P, unit_vec(1, 0));
    CHECK(parse_toeplitz("p(u) - x(e)*y(e)", ring) == u - x * y);
    CHECK(parse_toeplitz("R:u * Q:e", ring) == u * x);
    CHECK(parse_toeplitz("  -3/2 * Q:e + 2 P:e ", ring) == x.scaled(Rational(-3, 2)) + y.scaled(2));
    CHECK(parse_toeplitz("(R:u + R:v) * (Q:e)", ring) == x);
    CHECK(parse_toeplitz("1", ring) == parse_toeplitz("R:u + R:v", ring));
    CHECK(parse_toeplitz("0", ring).is_zero());

    auto l3 = fx::ring_of(fx::graph_system(fx::l3_graph()));
    CHECK(parse_toeplitz("x(e f)", l3) == parse_toeplitz("Q:e*Q:f", l3));
    CHECK(parse_toeplitz("y(e f)", l3) == parse_toeplitz("P:f*P:e", l3));
    CHECK_FALSE(parse_toeplitz("y(e f)", l3).is_zero());
    CHECK(parse_toeplitz("P:e*P:f", l3).is_zero());
    CHECK_THROWS_AS(parse_toeplitz("x(f e)", l3), PathError);
    CHECK_THROWS_AS(parse_toeplitz("Q:g", l3), UnknownGenerator);
    CHECK_THROWS_AS(parse_toeplitz("x(e)", fx::ring_of(fx::perm3_system())), UnknownGenerator);
}

TEST_CASE("syntax errors carry positions") {
    auto check_pos = [](const std::string& text, const std::string& pos) {
        try {
            parse_expr(text);
            FAIL("expected a syntax error for " << text);
        } catch (const SyntaxError& e) {
            CHECK(std::string(e.what()).find(pos) == 0);
        }
    };
    check_pos("R:u +", "line 1, column 6");
    check_pos("R:u\n  * (Q:e", "line 2, column 9");
    check_pos("R:u $", "line 1, column 5");
    check_pos("", "line 1, column 1");
    check_pos("p(u v)", "line 1, column 5");
    check_pos("3/", "line 1, column 3");
}

TEST_CASE("printing round-trips (random)") {
    std::mt19937 rng(61);
    for (const auto& sys : {fx::graph_system(fx::cycle_tail_graph()), fx::perm3_system()}) {
        auto ring = fx::ring_of(sys, 8);
        for (int it = 0; it < 30; ++it) {
            auto a = fx::random_element(ring, rng, 3, 3);
            CHECK(parse_toeplitz(toeplitz_to_string(a), ring) == a);
        }
    }
    auto g = LpaGraph::create(fx::cycle_tail_graph());
    auto ring = fx::ring_of(fx::graph_system(fx::cycle_tail_graph()), 8);
    for (int it = 0; it < 30; ++it) {
        LpaElement l = lpa_from_toeplitz(fx::random_element(ring, rng, 3, 3), g);
        CHECK(parse_lpa(lpa_to_string(l), g) == l);
        CHECK(lpa_to_string(parse_lpa(lpa_to_string(l), g)) == lpa_to_string(l));
    }
}

TEST_CASE("the same text in both backends") {
    auto graph = fx::cycle_tail_graph();
    auto sys = fx::graph_system(graph);
    auto ring = fx::ring_of(sys, 8);
    auto g = LpaGraph::create(graph);
    for (const char* text : {"p(a) - x(e)*y(e)", "x(e f e)*y(e)", "2*y(g) + P:g", "(p(b) - x(f)*y(f))*x(g)", "y(f e)*x(f)"})
        CHECK(lpa_from_toeplitz(parse_toeplitz(text, ring), g) == parse_lpa(text, g));
    CHECK(parse_lpa("p(b) - x(f)*y(f) - x(g)*y(g)", g).is_zero());
}
