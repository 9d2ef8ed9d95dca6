#include "fixtures.hpp"

#include "cpr/errors.hpp"
#include "cpr/finrank.hpp"
#include "cpr/ideals.hpp"

#include <doctest.h>

using namespace cpr;

namespace {

ToeplitzElement vert(const RingPtr& r, const std::string& v) {
    const auto& R = r->system().ring;
    return embed(r, Kind::R, unit_vec(R.dim(), R.label_index(v)));
}
ToeplitzElement xe(const RingPtr& r, const std::string& e) {
    const auto& Q = r->system().q;
    return embed(r, Kind::Q, unit_vec(Q.dim(), Q.label_index(e)));
}
ToeplitzElement ye(const RingPtr& r, const std::string& e) {
    const auto& P = r->system().p;
    return embed(r, Kind::P, unit_vec(P.dim(), P.label_index(e)));
}

Subspace verts(const RSystem& s, const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (const auto& n : names) idx.push_back(s.ring.label_index(n));
    return Subspace::coordinates(s.ring.dim(), idx);
}

// The system data, compared through labels so basis order does not matter.
void check_same_system(const RSystem& a, const RSystem& b) {
    REQUIRE(a.ring.dim() == b.ring.dim());
    REQUIRE(a.q.dim() == b.q.dim());
    REQUIRE(a.p.dim() == b.p.dim());
    auto ri = [&](std::size_t i) { return b.ring.label_index(a.ring.labels[i]); };
    auto qi = [&](std::size_t i) { return b.q.label_index(a.q.labels[i]); };
    auto pi = [&](std::size_t i) { return b.p.label_index(a.p.labels[i]); };
    auto remap = [](const Vec& v, auto f) {
        Vec out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[f(i)] = v[i];
        return out;
    };
    for (std::size_t x = 0; x < a.ring.dim(); ++x)
        for (std::size_t y = 0; y < a.ring.dim(); ++y)
            CHECK(remap(a.ring.mult[x][y], ri) == b.ring.mult[ri(x)][ri(y)]);
    for (std::size_t r = 0; r < a.ring.dim(); ++r) {
        for (std::size_t q = 0; q < a.q.dim(); ++q) {
            CHECK(remap(a.q.left[r][q], qi) == b.q.left[ri(r)][qi(q)]);
            CHECK(remap(a.q.right[q][r], qi) == b.q.right[qi(q)][ri(r)]);
        }
        for (std::size_t p = 0; p < a.p.dim(); ++p) {
            CHECK(remap(a.p.left[r][p], pi) == b.p.left[ri(r)][pi(p)]);
            CHECK(remap(a.p.right[p][r], pi) == b.p.right[pi(p)][ri(r)]);
        }
    }
    for (std::size_t p = 0; p < a.p.dim(); ++p)
        for (std::size_t q = 0; q < a.q.dim(); ++q) CHECK(remap(a.psi.psi[p][q], ri) == b.psi.psi[pi(p)][qi(q)]);
}

std::shared_ptr<CpContext> jmax_context(const RingPtr& ring) {
    return std::make_shared<CpContext>(ring, canonical_ideals(ring->tower()).j_max);
}

} // namespace

TEST_CASE("psi-invariance of vertex ideals is heredity") {
    auto sys = fx::graph_system(fx::a2_graph());
    CHECK_FALSE(is_psi_invariant(*sys, verts(*sys, {"u"})));
    CHECK(is_psi_invariant(*sys, verts(*sys, {"v"})));
    CHECK(is_psi_invariant(*sys, Subspace(2)));
    CHECK_THROWS_AS(quotient_system(sys, verts(*sys, {"u"})), NotInvariant);
    CHECK_THROWS_AS(is_psi_invariant(*sys, Subspace::span(2, {Vec{Rational(1), Rational(-1)}})), NotTwoSided);

    auto five = fx::graph_system(fx::five_graph());
    CHECK(is_psi_invariant(*five, verts(*five, {"c", "t"})));
    CHECK_FALSE(is_psi_invariant(*five, verts(*five, {"a", "t"})));
}

TEST_CASE("quotient by a hereditary set is the system of the remaining graph") {
    auto sys = fx::graph_system(fx::cycle_tail_graph());
    QuotientSystem qs = quotient_system(sys, verts(*sys, {"c"}));
    FiniteGraph rest;
    rest.vertices = {"a", "b"};
    rest.edges = {{"e", "a", "b", 1}, {"f", "b", "a", 1}};
    check_same_system(*qs.system, build_graph_system(rest));
    CHECK(validate_axioms(*qs.system).ok());

    auto five = fx::graph_system(fx::five_graph());
    QuotientSystem q5 = quotient_system(five, verts(*five, {"c", "t"}));
    FiniteGraph g5;
    g5.vertices = {"s", "a", "b"};
    g5.edges = {{"e1", "s", "a", 1}, {"e2", "a", "b", 1}, {"e3", "b", "a", 1}};
    check_same_system(*q5.system, build_graph_system(g5));

    QuotientSystem all = quotient_system(sys, Subspace::full(3));
    CHECK(all.system->ring.dim() == 0);
    CHECK(all.system->q.dim() == 0);
}

TEST_CASE("quotient map of Toeplitz rings is multiplicative (random)") {
    std::mt19937 rng(31);
    auto sys = fx::graph_system(fx::five_graph());
    auto ring = fx::ring_of(sys, 8);
    QuotientSystem qs = quotient_system(sys, verts(*sys, {"c", "t"}));
    auto qring = fx::ring_of(qs.system, 8);
    for (int it = 0; it < 15; ++it) {
        auto a = fx::random_element(ring, rng, 2), b = fx::random_element(ring, rng, 2);
        CHECK(map_to_quotient(a * b, qs, qring) == map_to_quotient(a, qs, qring) * map_to_quotient(b, qs, qring));
        CHECK(map_to_quotient(a + b, qs, qring) == map_to_quotient(a, qs, qring) + map_to_quotient(b, qs, qring));
    }
    CHECK(map_to_quotient(xe(ring, "e4"), qs, qring).is_zero());
    CHECK(map_to_quotient(xe(ring, "e2"), qs, qring) == xe(qring, "e2"));
}

TEST_CASE("T-pairs of a line graph") {
    auto sys = fx::graph_system(fx::l3_graph());
    // hereditary H with any non-sink set of E \ H
    CHECK(enumerate_tpairs(sys).size() == 8);
    Subspace k = canonical_ideals(TensorTower(sys)).j_max;
    auto pairs = enumerate_tpairs(sys, &k);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].i.dim() == 0);
    CHECK(pairs[1].i.dim() == 3);

    TPairFlags bad = validate_tpair(sys, verts(*sys, {"w"}), verts(*sys, {"w"}).sum(verts(*sys, {"v"})));
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.j_faithful);  // v is a sink once w is gone
    CHECK(bad.failures().size() == 1);
}

TEST_CASE("meet and join are the lattice operations (brute force)") {
    for (const auto& g : {fx::l3_graph(), fx::a2_graph(), fx::cycle_tail_graph()}) {
        auto sys = fx::graph_system(g);
        auto pairs = enumerate_tpairs(sys);
        auto in_set = [&](const TPair& w) { return std::find(pairs.begin(), pairs.end(), w) != pairs.end(); };
        for (const auto& a : pairs)
            for (const auto& b : pairs) {
                TPair m = tpair_meet(a, b);
                JoinInfo info;
                TPair j = tpair_join(sys, a, b, 4, &info);
                CHECK(in_set(m));
                CHECK(in_set(j));
                CHECK_FALSE(info.cap_binding);
                CHECK(validate_tpair(sys, j.i, j.j).ok());
                CHECK((tpair_leq(m, a) && tpair_leq(m, b)));
                CHECK((tpair_leq(a, j) && tpair_leq(b, j)));
                for (const auto& c : pairs) {
                    if (tpair_leq(c, a) && tpair_leq(c, b)) CHECK(tpair_leq(c, m));
                    if (tpair_leq(a, c) && tpair_leq(b, c)) CHECK(tpair_leq(j, c));
                }
            }
    }
}

TEST_CASE("join enlarges I by the elements whose Delta dies") {
    auto sys = fx::graph_system(fx::a2_graph());
    TPair a{Subspace(2), verts(*sys, {"u"})};
    TPair b{verts(*sys, {"v"}), verts(*sys, {"v"})};
    TPair j = tpair_join(sys, a, b);
    CHECK(j.i == Subspace::full(2));
    CHECK(j.j == Subspace::full(2));
}

TEST_CASE("lattice output") {
    auto sys = fx::graph_system(fx::l3_graph());
    Subspace k = canonical_ideals(TensorTower(sys)).j_max;
    Lattice lat = build_lattice(enumerate_tpairs(sys, &k));
    REQUIRE(lat.hasse.size() == 1);
    auto js = lattice_to_json(*sys, lat);
    CHECK(js["nodes"].size() == 2);
    CHECK(js["nodes"][0]["j_basis"] == nlohmann::json({"u", "v"}));
    CHECK(js["edges"][0] == nlohmann::json({0, 1}));
    std::string dot = lattice_to_dot(*sys, lat);
    CHECK(dot.find("n0 -> n1") != std::string::npos);

    Lattice all = build_lattice(enumerate_tpairs(sys));
    for (const auto& [lo, hi] : all.hasse) CHECK(tpair_leq(all.nodes[lo], all.nodes[hi]));
}

TEST_CASE("ideal from a T-pair equals the ideal from its generators") {
    auto sys = fx::graph_system(fx::cycle_tail_graph());
    auto ring = fx::ring_of(sys, 10);
    auto ctx = jmax_context(ring);
    TPair w{verts(*sys, {"c"}), verts(*sys, {"a", "b", "c"})};
    IdealHandle fwd = IdealHandle::from_tpair(ctx, w);
    IdealHandle gen = IdealHandle::from_generators(ctx, {vert(ring, "c")});
    CHECK(fwd.equals(gen, 2));
    CHECK(fwd.tpair() == w);
    CHECK(gen.tpair() == w);
    CHECK(fwd.contains(xe(ring, "g")));
    CHECK(fwd.contains(xe(ring, "g") * ye(ring, "g")));
    CHECK_FALSE(fwd.contains(xe(ring, "e")));
    CHECK_FALSE(gen.contains(vert(ring, "a")));

    // in the Toeplitz ring itself, a vertex gap generates the pair (0, {u})
    auto a2 = fx::graph_system(fx::a2_graph());
    auto r2 = fx::ring_of(a2, 10);
    auto ctx0 = std::make_shared<CpContext>(r2, Subspace(2));
    IdealHandle gap = IdealHandle::from_generators(ctx0, {vert(r2, "u") - xe(r2, "e") * ye(r2, "e")});
    TPair w0{Subspace(2), verts(*a2, {"u"})};
    CHECK(gap.tpair() == w0);
    CHECK(gap.equals(IdealHandle::from_tpair(ctx0, w0), 2));

    CHECK_THROWS_AS(IdealHandle::from_tpair(ctx, TPair{Subspace(3), verts(*sys, {"c"})}), HypothesisViolated);
}

TEST_CASE("round trip pair -> ideal -> pair over all T-pairs containing K") {
    for (const auto& g : {fx::l3_graph(), fx::cycle_tail_graph()}) {
        auto sys = fx::graph_system(g);
        auto ring = fx::ring_of(sys, 10);
        auto ctx = jmax_context(ring);
        for (const auto& w : enumerate_tpairs(sys, &ctx->ideal().ideal)) {
            IdealHandle h = IdealHandle::from_tpair(ctx, w);
            CHECK(h.tpair() == w);
        }
    }
}
