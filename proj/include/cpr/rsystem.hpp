#pragma once

#include "cpr/exactlin.hpp"
#include "cpr/graph.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cpr {

// A finite-dimensional algebra given by structure constants:
// b_i * b_j = sum_k mult[i][j][k] b_k.
struct StructuredRing {
    std::vector<std::string> labels;
    std::vector<std::vector<Vec>> mult;
    bool unital = false;  // when set, validate_axioms also checks `unit`
    Vec unit;

    std::size_t dim() const { return labels.size(); }
    Vec mul(const Vec& a, const Vec& b) const;
    Matrix left_mult_matrix(const Vec& a) const;   // x -> a x
    Matrix right_mult_matrix(const Vec& a) const;  // x -> x a
    std::optional<Vec> find_unit() const;
    int label_index(const std::string& s) const;
};

// left[r][m] = b_r . m,  right[m][r] = m . b_r
struct StructuredBimodule {
    std::vector<std::string> labels;
    std::vector<std::vector<Vec>> left;
    std::vector<std::vector<Vec>> right;

    std::size_t dim() const { return labels.size(); }
    Vec act_left(const Vec& r, const Vec& m) const;
    Vec act_right(const Vec& m, const Vec& r) const;
    int label_index(const std::string& s) const;
};

// psi[i][j] = psi(p_i (x) q_j), a vector over the ring basis.
struct Pairing {
    std::vector<std::vector<Vec>> psi;
    Vec apply(const Vec& p, const Vec& q) const;
};

enum class Provenance { generic, graph, automorphism };

struct RSystem {
    StructuredRing ring;
    StructuredBimodule p;
    StructuredBimodule q;
    Pairing psi;
    Provenance provenance = Provenance::generic;
    std::optional<FiniteGraph> graph;  // expanded graph, graph systems only
    std::optional<Matrix> phi;         // automorphism systems only
};

using SystemPtr = std::shared_ptr<const RSystem>;

struct Violation {
    std::string identity;
    std::vector<std::string> witness;  // labels of the basis triple
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_axioms(const RSystem& sys);
ValidationReport validate_ring(const StructuredRing& ring);
void check_shapes(const RSystem& sys);  // throws DimensionMismatch

RSystem build_graph_system(const FiniteGraph& graph);
RSystem build_automorphism_system(const StructuredRing& ring, const Matrix& phi);
// Q^k with orthogonal idempotents and phi(u_i) = u_{perm[i]}.
RSystem permutation_system(const std::vector<int>& perm);
StructuredRing diagonal_ring(std::size_t k, const std::string& prefix = "u");

bool is_right_nondegenerate(const StructuredRing& ring);
// A nonzero two-sided ideal with square zero, if the ring has one.
std::optional<Subspace> semiprime_witness(const StructuredRing& ring);

// Ideal helpers shared by several modules.
bool is_two_sided(const StructuredRing& ring, const Subspace& s);
Subspace ideal_closure(const StructuredRing& ring, const Subspace& s);
Subspace ideal_product(const StructuredRing& ring, const Subspace& a, const Subspace& b);

RSystem system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const RSystem& sys);

} // namespace cpr
