#pragma once

#include "cpr/exactlin.hpp"
#include "cpr/finrank.hpp"
#include "cpr/toeplitz.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace cpr {

struct CompatibleIdeal {
    Subspace ideal;
    bool is_two_sided = false;
    bool is_psi_compatible = false;
    bool is_faithful = false;
    bool ok() const { return is_two_sided && is_psi_compatible && is_faithful; }
};

CompatibleIdeal validate_ideal(const TensorTower& tw, const Subspace& s);

// Concatenated coordinates over a list of grades.
struct GradedLayout {
    std::vector<GradePair> grades;
    std::vector<std::size_t> offset;  // offset.size() == grades.size() + 1

    std::size_t dim() const { return offset.empty() ? 0 : offset.back(); }
    int index_of(GradePair g) const;
    // Grades (m,n) with m - n = z and m,n <= d, in increasing m.
    static GradedLayout box(const ToeplitzRing& ring, int z, int d);
    static GradedLayout of(const ToeplitzRing& ring, std::vector<GradePair> grades);
    Vec flatten(const ToeplitzElement& x) const;  // throws LevelMismatch outside the layout
    ToeplitzElement unflatten(const RingPtr& ring, const Vec& v) const;
};

// pi(theta_{q_i,p_j}) = iota_Q(q_i) iota_P(p_j), extended along a theta
// decomposition of Delta(x).  Throws InvalidIdeal if Delta(x) is not finite rank.
ToeplitzElement pi_delta(const RingPtr& ring, const Vec& x);

class CpContext {
public:
    // J must be two-sided and psi-compatible; faithfulness is recorded in the
    // flags but not required (ideals of quotient systems use that).
    CpContext(RingPtr ring, const Subspace& j, int slack = 2);

    const RingPtr& ring() const { return ring_; }
    const TensorTower& tower() const { return ring_->tower(); }
    const CompatibleIdeal& ideal() const { return j_; }
    int slack() const { return slack_; }

    // iota_Q^k(q)(iota_R(x) - pi(Delta(x)))iota_P^l(p) over bases of Q^k, J, P^l
    const std::vector<ToeplitzElement>& relation_generators(int k, int l) const;

    // T(J) ∩ V_d(z) as a subspace of GradedLayout::box(z, d) coordinates,
    // after the slack has stabilized.
    const Subspace& relation_slice(int z, int d) const;
    bool in_relation_ideal(const ToeplitzElement& x) const;
    // (z, d) -> slack at which the last decision was reached
    std::map<std::pair<int, int>, int> slack_used() const;

private:
    const Subspace& slice_at(int z, int d, int b) const;

    RingPtr ring_;
    CompatibleIdeal j_;
    int slack_;
    std::vector<ToeplitzElement> core_;  // iota_R(x) - pi(Delta(x)) per basis x of J

    mutable std::recursive_mutex mu_;
    mutable std::map<std::pair<int, int>, std::vector<ToeplitzElement>> gens_;
    mutable std::map<std::tuple<int, int, int>, Subspace> partial_;
    mutable std::map<std::pair<int, int>, Subspace> stable_;
    mutable std::map<std::pair<int, int>, int> used_;
};

using ContextPtr = std::shared_ptr<const CpContext>;

struct CpElement {
    ContextPtr ctx;
    ToeplitzElement rep;
};

bool cp_equal(const CpElement& a, const CpElement& b);  // throws ContextMismatch

// sigma(x) = sum c_ij T(q_i)S(p_j) for each basis x of j
bool is_cp_invariant(const TensorTower& tw, const Representation& rep, const Subspace& j);
Subspace extract_j(const TensorTower& tw, const Representation& rep);
std::pair<Subspace, Subspace> extract_tpair(const TensorTower& tw, const Representation& rep);

// Component (m,n) is scaled by t^(n-m): iota_Q -> t^-1 iota_Q, iota_P -> t iota_P.
ToeplitzElement gauge(const Rational& t, const ToeplitzElement& x);
CpElement gauge(const Rational& t, const CpElement& x);
// Recovers the z-homogeneous parts, z in [zmin, zmax], from gauge(ts[i], x).
std::map<int, ToeplitzElement> homogeneous_components(const std::vector<Rational>& ts,
                                                      const std::vector<ToeplitzElement>& evals, int zmin, int zmax);

struct UniquenessReport {
    bool maximal = true;
    std::optional<Subspace> larger;  // a strictly larger faithful compatible ideal
    std::size_t candidates_tried = 0;
};

UniquenessReport graded_uniqueness_check(const TensorTower& tw, const Subspace& j);

} // namespace cpr
