#pragma once

// Leavitt path algebras of finite graphs in normal form, and the vertex-set
// combinatorics (hereditary/saturated sets, breaking vertices) that index
// graded ideals.

#include "cpr/exactlin.hpp"
#include "cpr/graph.hpp"
#include "cpr/ideals.hpp"
#include "cpr/toeplitz.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cpr {

// alpha beta^* with r(alpha) = r(beta) = vertex.  Paths are edge indices of
// the expanded graph; an empty path sits at `vertex`.
struct LpaMonomial {
    std::vector<int> alpha;
    std::vector<int> beta;
    int vertex = 0;
    auto operator<=>(const LpaMonomial&) const = default;
};

class LpaGraph;
using LpaGraphPtr = std::shared_ptr<const LpaGraph>;

// Expanded finite graph plus the data the rewriting needs.
class LpaGraph {
public:
    static LpaGraphPtr create(const FiniteGraph& g);  // throws InfiniteGraph

    const FiniteGraph& graph() const { return g_; }
    int src(int e) const { return src_[static_cast<std::size_t>(e)]; }
    int tgt(int e) const { return tgt_[static_cast<std::size_t>(e)]; }
    const std::vector<int>& emitted(int v) const { return out_[static_cast<std::size_t>(v)]; }
    // lexicographically least edge name among s^{-1}(v); -1 for sinks
    int special(int v) const { return special_[static_cast<std::size_t>(v)]; }
    bool is_path(const std::vector<int>& path) const;
    bool has_cycle() const;

private:
    FiniteGraph g_;
    std::vector<int> src_, tgt_, special_;
    std::vector<std::vector<int>> out_;
};

enum class Reduction { ascending, descending_eager };

class LpaElement {
public:
    explicit LpaElement(LpaGraphPtr g) : g_(std::move(g)) {}

    const LpaGraphPtr& graph() const { return g_; }
    const std::map<LpaMonomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add_term(const LpaMonomial& m, const Rational& c);  // no normalization

    LpaElement operator+(const LpaElement& o) const;
    LpaElement operator-(const LpaElement& o) const;
    LpaElement operator*(const LpaElement& o) const;
    LpaElement scaled(const Rational& c) const;
    bool operator==(const LpaElement& o) const;

private:
    LpaGraphPtr g_;
    std::map<LpaMonomial, Rational> terms_;
};

LpaElement lpa_vertex(const LpaGraphPtr& g, int v);
LpaElement lpa_x(const LpaGraphPtr& g, int e);
LpaElement lpa_y(const LpaGraphPtr& g, int e);
// alpha beta^*; zero if the ranges differ
LpaElement lpa_monomial(const LpaGraphPtr& g, std::vector<int> alpha, std::vector<int> beta);

bool lpa_is_normal(const LpaGraph& g, const LpaMonomial& m);
LpaElement lpa_normalize(const LpaElement& x, Reduction how = Reduction::ascending);
// Product of normal forms, returned in normal form.
LpaElement lpa_mul(const LpaElement& a, const LpaElement& b, Reduction how = Reduction::ascending);

// number of normal monomials with (|alpha|, |beta|) = key, lengths <= max_len
std::map<std::pair<int, int>, long> lpa_dim_upto(const FiniteGraph& g, int max_len);
// same, keyed by |alpha| - |beta|
std::map<int, long> lpa_dim_by_degree(const FiniteGraph& g, int max_len);
// nullopt when the algebra is infinite-dimensional (the graph has a cycle)
std::optional<long> lpa_dim_total(const FiniteGraph& g);

std::string lpa_to_string(const LpaElement& x);

// Image of a Toeplitz element of a graph system in the Leavitt path algebra
// (the Cuntz-Pimsner ring for J = j_max).
LpaElement lpa_from_toeplitz(const ToeplitzElement& x, const LpaGraphPtr& g);

// ------------------------------------------------------------ vertex sets

using VertexSet = std::set<std::string>;

bool is_hereditary(const FiniteGraph& g, const VertexSet& h);
bool is_saturated(const FiniteGraph& g, const VertexSet& h);
VertexSet hereditary_saturated_closure(const FiniteGraph& g, const VertexSet& seed);
std::vector<VertexSet> enumerate_hs(const FiniteGraph& g);
VertexSet breaking_vertices(const FiniteGraph& g, const VertexSet& h);

struct IdealPair {
    VertexSet h;
    VertexSet s;
    bool operator==(const IdealPair&) const = default;
};

std::vector<IdealPair> enumerate_ideal_pairs(const FiniteGraph& g);
bool pair_order(const IdealPair& a, const IdealPair& b);
FiniteGraph quotient_graph(const FiniteGraph& g, const VertexSet& h);

// T-pair of a graph system matching (H, S): I spanned by H, J by H, S and
// the vertices that emit finitely many but at least one edge.
TPair ideal_pair_to_tpair(const RSystem& sys, const IdealPair& pair);

} // namespace cpr
