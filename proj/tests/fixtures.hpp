#pragma once

// Shared test systems and random generators.

#include "cpr/cpring.hpp"
#include "cpr/graph.hpp"
#include "cpr/rsystem.hpp"
#include "cpr/toeplitz.hpp"

#include <memory>
#include <random>
#include <vector>

namespace fx {

using namespace cpr;

// u --e--> v
inline FiniteGraph a2_graph() {
    FiniteGraph g;
    g.vertices = {"u", "v"};
    g.edges = {{"e", "u", "v", 1}};
    return g;
}

// u -> v -> w
inline FiniteGraph l3_graph() {
    FiniteGraph g;
    g.vertices = {"u", "v", "w"};
    g.edges = {{"e", "u", "v", 1}, {"f", "v", "w", 1}};
    return g;
}

// a <-> b 2-cycle plus b -> c
inline FiniteGraph cycle_tail_graph() {
    FiniteGraph g;
    g.vertices = {"a", "b", "c"};
    g.edges = {{"e", "a", "b", 1}, {"f", "b", "a", 1}, {"g", "b", "c", 1}};
    return g;
}

// source s, 2-cycle a <-> b, sink t, and a branch
inline FiniteGraph five_graph() {
    FiniteGraph g;
    g.vertices = {"s", "a", "b", "c", "t"};
    g.edges = {{"e1", "s", "a", 1}, {"e2", "a", "b", 1}, {"e3", "b", "a", 1},
               {"e4", "b", "c", 1}, {"e5", "c", "t", 1}, {"e6", "s", "t", 1}};
    return g;
}

inline SystemPtr graph_system(const FiniteGraph& g) {
    return std::make_shared<const RSystem>(build_graph_system(g));
}

inline SystemPtr perm3_system() {
    return std::make_shared<const RSystem>(permutation_system({1, 2, 0}));
}

inline RingPtr ring_of(SystemPtr sys, int cap = 6) { return ToeplitzRing::create(std::move(sys), cap); }

inline Rational small_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-3, 3), den(1, 2);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

inline Vec random_vec(std::mt19937& rng, std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = small_rational(rng);
    return v;
}

// Sum of `terms` random homogeneous pieces with m + n <= max_total.
inline ToeplitzElement random_element(const RingPtr& ring, std::mt19937& rng, int max_total, int terms = 2) {
    ToeplitzElement x(ring);
    std::uniform_int_distribution<int> tot(0, max_total);
    for (int t = 0; t < terms; ++t) {
        int s = tot(rng);
        std::uniform_int_distribution<int> split(0, s);
        int m = split(rng);
        GradePair g{m, s - m};
        std::size_t d = ring->component_dim(g);
        if (d == 0) continue;
        x.add_component(g, random_vec(rng, d));
    }
    return x;
}

} // namespace fx
