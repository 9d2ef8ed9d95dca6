#include "cpr/rsystem.hpp"

#include "cpr/errors.hpp"

#include <sstream>

namespace cpr {

// ------------------------------------------------------------ components

Vec StructuredRing::mul(const Vec& a, const Vec& b) const {
    std::size_t n = dim();
    Vec out = zero_vec(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(b[j]) == 0) continue;
            axpy(out, a[i] * b[j], mult[i][j]);
        }
    }
    return out;
}

Matrix StructuredRing::left_mult_matrix(const Vec& a) const {
    Matrix m(dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) m.set_col(j, mul(a, unit_vec(dim(), j)));
    return m;
}

Matrix StructuredRing::right_mult_matrix(const Vec& a) const {
    Matrix m(dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) m.set_col(j, mul(unit_vec(dim(), j), a));
    return m;
}

std::optional<Vec> StructuredRing::find_unit() const {
    std::size_t n = dim();
    if (n == 0) return Vec{};
    // u b_j = b_j and b_j u = b_j for all j: a linear system in u.
    Matrix a(2 * n * n, n);
    Vec rhs(2 * n * n, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                a(j * n + k, i) = mult[i][j][k];
                a(n * n + j * n + k, i) = mult[j][i][k];
            }
            rhs[j * n + k] = (j == k) ? 1 : 0;
            rhs[n * n + j * n + k] = (j == k) ? 1 : 0;
        }
    return solve(a, rhs);
}

int StructuredRing::label_index(const std::string& s) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == s) return static_cast<int>(i);
    return -1;
}

Vec StructuredBimodule::act_left(const Vec& r, const Vec& m) const {
    Vec out = zero_vec(dim());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (sgn(r[i]) == 0) continue;
        for (std::size_t j = 0; j < dim(); ++j)
            if (sgn(m[j]) != 0) axpy(out, r[i] * m[j], left[i][j]);
    }
    return out;
}

Vec StructuredBimodule::act_right(const Vec& m, const Vec& r) const {
    Vec out = zero_vec(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        if (sgn(m[j]) == 0) continue;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (sgn(r[i]) != 0) axpy(out, m[j] * r[i], right[j][i]);
    }
    return out;
}

int StructuredBimodule::label_index(const std::string& s) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == s) return static_cast<int>(i);
    return -1;
}

Vec Pairing::apply(const Vec& p, const Vec& q) const {
    std::size_t rdim = 0;
    if (!psi.empty() && !psi[0].empty()) rdim = psi[0][0].size();
    Vec out = zero_vec(rdim);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (sgn(p[i]) == 0) continue;
        for (std::size_t j = 0; j < q.size(); ++j)
            if (sgn(q[j]) != 0) axpy(out, p[i] * q[j], psi[i][j]);
    }
    return out;
}

// ------------------------------------------------------------ validation

namespace {

void check_table(const std::vector<std::vector<Vec>>& t, std::size_t a, std::size_t b, std::size_t c,
                 const std::string& what) {
    if (t.size() != a) throw DimensionMismatch(what + ": wrong number of rows");
    for (const auto& row : t) {
        if (row.size() != b) throw DimensionMismatch(what + ": ragged row");
        for (const auto& v : row)
            if (v.size() != c) throw DimensionMismatch(what + ": entry has wrong length");
    }
}

void check_module_shapes(const StructuredBimodule& m, std::size_t rdim, const std::string& name) {
    check_table(m.left, rdim, m.dim(), m.dim(), name + ".left");
    check_table(m.right, m.dim(), rdim, m.dim(), name + ".right");
}

void check_bimodule(const StructuredRing& ring, const StructuredBimodule& m, const std::string& name,
                    std::vector<Violation>& out) {
    std::size_t rd = ring.dim(), md = m.dim();
    for (std::size_t a = 0; a < rd; ++a)
        for (std::size_t b = 0; b < rd; ++b) {
            const Vec& ab = ring.mult[a][b];
            for (std::size_t x = 0; x < md; ++x) {
                Vec ex = unit_vec(md, x);
                // (r1 r2) m = r1 (r2 m)
                if (m.act_left(ab, ex) != m.act_left(unit_vec(rd, a), m.left[b][x]))
                    out.push_back({name + " left action", {ring.labels[a], ring.labels[b], m.labels[x]}});
                // m (r1 r2) = (m r1) r2
                if (m.act_right(ex, ab) != m.act_right(m.right[x][a], unit_vec(rd, b)))
                    out.push_back({name + " right action", {m.labels[x], ring.labels[a], ring.labels[b]}});
            }
        }
    for (std::size_t a = 0; a < rd; ++a)
        for (std::size_t x = 0; x < md; ++x)
            for (std::size_t b = 0; b < rd; ++b) {
                // (r1 m) r2 = r1 (m r2)
                Vec lhs = m.act_right(m.left[a][x], unit_vec(rd, b));
                Vec rhs = m.act_left(unit_vec(rd, a), m.right[x][b]);
                if (lhs != rhs)
                    out.push_back({name + " bimodule compatibility", {ring.labels[a], m.labels[x], ring.labels[b]}});
            }
}

} // namespace

void check_shapes(const RSystem& sys) {
    std::size_t rd = sys.ring.dim();
    check_table(sys.ring.mult, rd, rd, rd, "ring.mult");
    if (sys.ring.unital && sys.ring.unit.size() != rd) throw DimensionMismatch("ring.unit has wrong length");
    check_module_shapes(sys.p, rd, "p");
    check_module_shapes(sys.q, rd, "q");
    check_table(sys.psi.psi, sys.p.dim(), sys.q.dim(), rd, "psi");
}

ValidationReport validate_ring(const StructuredRing& ring) {
    std::size_t n = ring.dim();
    check_table(ring.mult, n, n, n, "ring.mult");
    ValidationReport rep;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Vec lhs = ring.mul(ring.mult[i][j], unit_vec(n, k));
                Vec rhs = ring.mul(unit_vec(n, i), ring.mult[j][k]);
                if (lhs != rhs)
                    rep.violations.push_back({"ring associativity", {ring.labels[i], ring.labels[j], ring.labels[k]}});
            }
    if (ring.unital) {
        if (ring.unit.size() != n) throw DimensionMismatch("ring.unit has wrong length");
        for (std::size_t i = 0; i < n; ++i) {
            Vec e = unit_vec(n, i);
            if (ring.mul(ring.unit, e) != e || ring.mul(e, ring.unit) != e)
                rep.violations.push_back({"ring unit", {ring.labels[i]}});
        }
    }
    return rep;
}

ValidationReport validate_axioms(const RSystem& sys) {
    check_shapes(sys);
    ValidationReport rep = validate_ring(sys.ring);
    check_bimodule(sys.ring, sys.p, "P", rep.violations);
    check_bimodule(sys.ring, sys.q, "Q", rep.violations);

    const auto& R = sys.ring;
    std::size_t rd = R.dim(), pd = sys.p.dim(), qd = sys.q.dim();
    for (std::size_t r = 0; r < rd; ++r)
        for (std::size_t i = 0; i < pd; ++i)
            for (std::size_t j = 0; j < qd; ++j) {
                Vec er = unit_vec(rd, r), ep = unit_vec(pd, i), eq = unit_vec(qd, j);
                const Vec& pq = sys.psi.psi[i][j];
                if (sys.psi.apply(sys.p.left[r][i], eq) != R.mul(er, pq))
                    rep.violations.push_back({"psi left linearity", {R.labels[r], sys.p.labels[i], sys.q.labels[j]}});
                if (sys.psi.apply(ep, sys.q.right[j][r]) != R.mul(pq, er))
                    rep.violations.push_back({"psi right linearity", {sys.p.labels[i], sys.q.labels[j], R.labels[r]}});
                if (sys.psi.apply(sys.p.right[i][r], eq) != sys.psi.apply(ep, sys.q.left[r][j]))
                    rep.violations.push_back({"psi balanced", {sys.p.labels[i], R.labels[r], sys.q.labels[j]}});
            }
    return rep;
}

// -------------------------------------------------------------- builders

namespace {

std::vector<std::vector<Vec>> zero_table(std::size_t a, std::size_t b, std::size_t c) {
    return std::vector<std::vector<Vec>>(a, std::vector<Vec>(b, zero_vec(c)));
}

} // namespace

StructuredRing diagonal_ring(std::size_t k, const std::string& prefix) {
    StructuredRing R;
    for (std::size_t i = 0; i < k; ++i) R.labels.push_back(prefix + std::to_string(i + 1));
    R.mult = zero_table(k, k, k);
    for (std::size_t i = 0; i < k; ++i) R.mult[i][i][i] = 1;
    R.unital = k > 0;
    if (R.unital) R.unit = Vec(k, Rational(1));
    return R;
}

RSystem build_graph_system(const FiniteGraph& graph) {
    graph.validate();
    FiniteGraph g = graph.expanded();  // throws InfiniteMultiplicity
    std::size_t nv = g.vertices.size(), ne = g.edges.size();

    RSystem sys;
    sys.provenance = Provenance::graph;
    sys.ring.labels = g.vertices;
    sys.ring.mult = zero_table(nv, nv, nv);
    for (std::size_t v = 0; v < nv; ++v) sys.ring.mult[v][v][v] = 1;
    sys.ring.unital = nv > 0;
    if (sys.ring.unital) sys.ring.unit = Vec(nv, Rational(1));

    for (auto* m : {&sys.p, &sys.q}) {
        for (const auto& e : g.edges) m->labels.push_back(e.name);
        m->left = zero_table(nv, ne, ne);
        m->right = zero_table(ne, nv, ne);
    }
    sys.psi.psi = zero_table(ne, ne, nv);
    for (std::size_t k = 0; k < ne; ++k) {
        auto s = static_cast<std::size_t>(g.vertex_index(g.edges[k].src));
        auto r = static_cast<std::size_t>(g.vertex_index(g.edges[k].tgt));
        sys.q.left[s][k][k] = 1;   // 1_v 1_e = 1_e iff s(e) = v
        sys.q.right[k][r][k] = 1;  // 1_e 1_v = 1_e iff r(e) = v
        sys.p.right[k][s][k] = 1;  // 1_ebar 1_v = 1_ebar iff s(e) = v
        sys.p.left[r][k][k] = 1;   // 1_v 1_ebar = 1_ebar iff r(e) = v
        sys.psi.psi[k][k][r] = 1;
    }
    sys.graph = g;
    return sys;
}

RSystem build_automorphism_system(const StructuredRing& ring, const Matrix& phi) {
    std::size_t n = ring.dim();
    if (phi.rows() != n || phi.cols() != n) throw NotAutomorphism("phi must be a square matrix of the ring dimension");
    auto inv = inverse(phi);
    if (!inv) throw NotAutomorphism("phi is not bijective");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (phi.apply(ring.mult[i][j]) != ring.mul(phi.col(i), phi.col(j)))
                throw NotAutomorphism("phi is not multiplicative on (" + ring.labels[i] + ", " + ring.labels[j] + ")");

    RSystem sys;
    sys.provenance = Provenance::automorphism;
    sys.ring = ring;
    sys.phi = phi;
    for (auto* m : {&sys.p, &sys.q}) {
        m->labels = ring.labels;
        m->left = ring.mult;
        m->right = zero_table(n, n, n);
    }
    sys.psi.psi = zero_table(n, n, n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t r = 0; r < n; ++r) {
            Vec ex = unit_vec(n, x);
            sys.p.right[x][r] = ring.mul(ex, phi.col(r));
            sys.q.right[x][r] = ring.mul(ex, inv->col(r));
            sys.psi.psi[x][r] = ring.mul(ex, phi.col(r));
        }
    return sys;
}

RSystem permutation_system(const std::vector<int>& perm) {
    std::size_t k = perm.size();
    Matrix phi(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        if (perm[i] < 0 || static_cast<std::size_t>(perm[i]) >= k) throw NotAutomorphism("permutation entry out of range");
        phi(static_cast<std::size_t>(perm[i]), i) = 1;
    }
    return build_automorphism_system(diagonal_ring(k), phi);
}

// --------------------------------------------------- degeneracy, ideals

bool is_right_nondegenerate(const StructuredRing& ring) {
    std::size_t n = ring.dim();
    if (n == 0) return true;
    Matrix a(n * n, n);  // r -> (r b_j)_j
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) a(j * n + k, i) = ring.mult[i][j][k];
    return nullspace(a).empty();
}

bool is_two_sided(const StructuredRing& ring, const Subspace& s) {
    std::size_t n = ring.dim();
    if (s.ambient_dim() != n) throw DimensionMismatch("ideal lives in the wrong ambient space");
    for (const auto& x : s.basis())
        for (std::size_t i = 0; i < n; ++i) {
            Vec e = unit_vec(n, i);
            if (!s.contains(ring.mul(e, x)) || !s.contains(ring.mul(x, e))) return false;
        }
    return true;
}

Subspace ideal_closure(const StructuredRing& ring, const Subspace& s) {
    std::size_t n = ring.dim();
    Subspace cur = s;
    for (;;) {
        std::vector<Vec> gens = cur.basis();
        for (const auto& x : cur.basis())
            for (std::size_t i = 0; i < n; ++i) {
                Vec e = unit_vec(n, i);
                gens.push_back(ring.mul(e, x));
                gens.push_back(ring.mul(x, e));
            }
        Subspace next = Subspace::span(n, gens);
        if (next.dim() == cur.dim()) return next;
        cur = std::move(next);
    }
}

Subspace ideal_product(const StructuredRing& ring, const Subspace& a, const Subspace& b) {
    std::vector<Vec> gens;
    for (const auto& x : a.basis())
        for (const auto& y : b.basis()) gens.push_back(ring.mul(x, y));
    return ideal_closure(ring, Subspace::span(ring.dim(), gens));
}

std::optional<Subspace> semiprime_witness(const StructuredRing& ring) {
    // Work in the unitization: the radical consists of the x with
    // tr L_x = 0 and tr L_{x b_j} = 0 for every j (characteristic zero).
    std::size_t n = ring.dim();
    if (n == 0) return std::nullopt;
    auto trace_of_left = [&](const Vec& x) {
        Rational t = 0;
        for (std::size_t k = 0; k < n; ++k) t += ring.mul(x, unit_vec(n, k))[k];
        return t;
    };
    Matrix a(n + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec e = unit_vec(n, i);
        a(0, i) = trace_of_left(e);
        for (std::size_t j = 0; j < n; ++j) a(j + 1, i) = trace_of_left(ring.mult[i][j]);
    }
    Subspace rad = kernel(a);
    if (rad.dim() == 0) return std::nullopt;
    // The last nonzero power of the radical squares to zero.
    Subspace power = rad;
    for (;;) {
        Subspace next = ideal_product(ring, power, rad);
        if (next.dim() == 0 || next.dim() == power.dim()) break;
        power = std::move(next);
    }
    if (ideal_product(ring, power, power).dim() != 0 || !is_two_sided(ring, power)) return std::nullopt;
    return power;
}

// ------------------------------------------------------------------ JSON

namespace {

using nlohmann::json;

Rational json_rational(const json& num, const json& den) {
    auto part = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        throw FormatError("rational parts must be integers or integer strings");
    };
    return parse_rational(part(num) + "/" + part(den));
}

json json_part(const mpz_class& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

// [[k,num,den],...] -> dense vector of length n
Vec parse_sparse(const json& j, std::size_t n) {
    Vec v = zero_vec(n);
    for (const auto& t : j) {
        auto k = t.at(0).get<std::size_t>();
        if (k >= n) throw FormatError("basis index out of range");
        v[k] += json_rational(t.at(1), t.at(2));
    }
    return v;
}

json sparse_json(const Vec& v) {
    json a = json::array();
    for (std::size_t k = 0; k < v.size(); ++k)
        if (sgn(v[k]) != 0) a.push_back(json::array({k, json_part(v[k].get_num()), json_part(v[k].get_den())}));
    return a;
}

std::vector<std::vector<Vec>> parse_table(const json& j, std::size_t a, std::size_t b, std::size_t c) {
    auto t = zero_table(a, b, c);
    for (const auto& e : j) {
        auto i = e.at(0).get<std::size_t>(), k = e.at(1).get<std::size_t>();
        if (i >= a || k >= b) throw FormatError("structure-constant index out of range");
        t[i][k] = add(t[i][k], parse_sparse(e.at(2), c));
    }
    return t;
}

json table_json(const std::vector<std::vector<Vec>>& t) {
    json a = json::array();
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t k = 0; k < t[i].size(); ++k)
            if (!is_zero(t[i][k])) a.push_back(json::array({i, k, sparse_json(t[i][k])}));
    return a;
}

std::vector<std::string> labels_of(const json& j) {
    std::vector<std::string> out;
    for (const auto& x : j) out.push_back(x.get<std::string>());
    return out;
}

StructuredBimodule parse_module(const json& j, std::size_t rd) {
    StructuredBimodule m;
    m.labels = labels_of(j.at("basis"));
    std::size_t md = m.dim();
    m.left = parse_table(j.value("left", json::array()), rd, md, md);
    m.right = parse_table(j.value("right", json::array()), md, rd, md);
    return m;
}

} // namespace

RSystem system_from_json(const json& j) {
    try {
        if (j.value("base_field", std::string()) != "rational")
            throw FormatError("base_field must be \"rational\"");
        StructuredRing ring;
        const auto& jr = j.at("ring");
        ring.labels = labels_of(jr.at("basis"));
        std::size_t rd = ring.dim();
        ring.mult = parse_table(jr.value("mult", json::array()), rd, rd, rd);
        if (jr.contains("unit")) {
            ring.unital = true;
            ring.unit = parse_sparse(jr.at("unit"), rd);
        }
        if (j.contains("phi")) {
            // automorphism preset: phi lists images [[i, [[k,num,den],...]],...]
            Matrix phi(rd, rd);
            for (const auto& e : j.at("phi")) {
                auto i = e.at(0).get<std::size_t>();
                if (i >= rd) throw FormatError("phi index out of range");
                phi.set_col(i, parse_sparse(e.at(1), rd));
            }
            return build_automorphism_system(ring, phi);
        }
        RSystem sys;
        sys.ring = std::move(ring);
        sys.p = parse_module(j.at("p"), rd);
        sys.q = parse_module(j.at("q"), rd);
        sys.psi.psi = parse_table(j.value("psi", json::array()), sys.p.dim(), sys.q.dim(), rd);
        return sys;
    } catch (const json::exception& ex) {
        throw FormatError(std::string("system file: ") + ex.what());
    }
}

json system_to_json(const RSystem& sys) {
    json j;
    j["base_field"] = "rational";
    j["ring"] = {{"basis", sys.ring.labels}, {"mult", table_json(sys.ring.mult)}};
    if (sys.ring.unital) j["ring"]["unit"] = sparse_json(sys.ring.unit);
    auto mod = [](const StructuredBimodule& m) {
        return json{{"basis", m.labels}, {"left", table_json(m.left)}, {"right", table_json(m.right)}};
    };
    j["p"] = mod(sys.p);
    j["q"] = mod(sys.q);
    j["psi"] = table_json(sys.psi.psi);
    if (sys.phi) {
        j["phi"] = json::array();
        for (std::size_t i = 0; i < sys.phi->cols(); ++i) j["phi"].push_back(json::array({i, sparse_json(sys.phi->col(i))}));
    }
    return j;
}

} // namespace cpr
