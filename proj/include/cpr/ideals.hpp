#pragma once

#include "cpr/cpring.hpp"
#include "cpr/exactlin.hpp"
#include "cpr/rsystem.hpp"
#include "cpr/toeplitz.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace cpr {

struct TPair {
    Subspace i;
    Subspace j;
    bool operator==(const TPair& o) const { return i == o.i && j == o.j; }
};

struct TPairFlags {
    bool i_two_sided = false;
    bool i_invariant = false;
    bool i_in_j = false;
    bool j_two_sided = false;
    bool j_compatible = false;  // image of J in R/I
    bool j_faithful = false;    // image of J in R/I
    bool ok() const { return i_two_sided && i_invariant && i_in_j && j_two_sided && j_compatible && j_faithful; }
    std::vector<std::string> failures() const;
};

// psi(p (x) x q) in I for all p, q and x in I.  Throws NotTwoSided.
bool is_psi_invariant(const RSystem& sys, const Subspace& i);

// (P/IP, Q/QI, psi_I) over R/I.  The quotient bases are images of parent
// basis vectors, whose labels they keep.
struct QuotientSystem {
    SystemPtr parent;
    Subspace i;
    SystemPtr system;
    Matrix pr_r, pr_q, pr_p;  // parent coordinates -> quotient coordinates
};

QuotientSystem quotient_system(const SystemPtr& sys, const Subspace& i);  // throws NotInvariant
Subspace image_in_quotient(const QuotientSystem& qs, const Subspace& j);

TPairFlags validate_tpair(const SystemPtr& sys, const Subspace& i, const Subspace& j);

TPair tpair_meet(const TPair& a, const TPair& b);

struct JoinInfo {
    int bound = 0;
    bool cap_binding = false;  // the nilpotency kernel still grew at the bound
};

TPair tpair_join(const SystemPtr& sys, const TPair& a, const TPair& b, int bound = 6, JoinInfo* info = nullptr);

bool tpair_leq(const TPair& a, const TPair& b);

// All T-pairs made of coordinate ideals span{b_i : i in S}; complete when R
// is a product of copies of the field with its idempotent basis.  With k
// given, only pairs whose J contains k are kept.
std::vector<TPair> enumerate_tpairs(const SystemPtr& sys, const Subspace* k = nullptr);

struct Lattice {
    std::vector<TPair> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> hasse;  // (lower, upper) covers
};

Lattice build_lattice(std::vector<TPair> nodes);
nlohmann::json subspace_to_json(const StructuredRing& ring, const Subspace& s);
nlohmann::json lattice_to_json(const RSystem& sys, const Lattice& lat);
std::string lattice_to_dot(const RSystem& sys, const Lattice& lat);

// Parent Toeplitz element -> quotient Toeplitz element, grade by grade.
ToeplitzElement map_to_quotient(const ToeplitzElement& x, const QuotientSystem& qs, const RingPtr& qring);

// A graded ideal of the relative ring O(K), held as a membership procedure.
// slice(z, d) is the preimage of the ideal in the Toeplitz ring intersected
// with V_d(z), in GradedLayout::box(z, d) coordinates.
class IdealHandle {
public:
    static IdealHandle from_tpair(ContextPtr ctx, const TPair& w);
    static IdealHandle from_generators(ContextPtr ctx, std::vector<ToeplitzElement> gens);

    const ContextPtr& context() const { return st_->ctx; }
    const Subspace& slice(int z, int d) const;
    bool contains(const ToeplitzElement& x) const;
    bool is_subset_of(const IdealHandle& o, int d) const;  // slices for |z| <= d
    bool equals(const IdealHandle& o, int d) const { return is_subset_of(o, d) && o.is_subset_of(*this, d); }
    // I_H = {r : iota_R(r) in H},  J_H = {r : iota_R(r) in H + pi(F_P(Q))}
    TPair tpair() const;

private:
    struct State {
        ContextPtr ctx;
        bool from_pair = false;
        // forward data
        std::shared_ptr<QuotientSystem> qs;
        RingPtr qring;
        std::shared_ptr<CpContext> qctx;
        // generator data
        std::vector<ToeplitzElement> gens;
        std::map<int, std::vector<Vec>> closure;  // level bound L -> rows in the full layout
        std::recursive_mutex mu;
        std::map<std::pair<int, int>, Subspace> slices;
    };
    const std::vector<Vec>& closure_rows(int level) const;
    Subspace generator_slice(int z, int d, int level) const;
    std::shared_ptr<State> st_;
};

} // namespace cpr
