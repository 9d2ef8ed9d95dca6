#pragma once

#include "cpr/exactlin.hpp"
#include "cpr/rsystem.hpp"
#include "cpr/tensorpow.hpp"

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace cpr {

struct GradePair {
    int m = 0;
    int n = 0;
    auto operator<=>(const GradePair&) const = default;
    int z() const { return m - n; }
    int level() const { return m > n ? m : n; }
};

GradePair semigroup_mul(GradePair a, GradePair b);

// T_(m,n): Q^m (x)_R P^n for m,n >= 1, Q^m for n = 0, P^n for m = 0, R at
// (0,0).  Basis vectors come from pure tensors; pure[i] holds the Q-level
// and P-level basis indices (or the ring index at (0,0)).
struct ComponentSpace {
    GradePair grade;
    QuotientSpace balanced;  // only meaningful when m,n >= 1
    std::vector<std::pair<std::size_t, std::size_t>> pure;
    std::size_t dim() const { return pure.size(); }
};

class ToeplitzRing : public std::enable_shared_from_this<ToeplitzRing> {
public:
    static std::shared_ptr<ToeplitzRing> create(SystemPtr sys, int cap = 6);

    const TensorTower& tower() const { return *tower_; }
    TensorTower& mutable_tower() { return *tower_; }
    const RSystem& system() const { return tower_->system(); }
    int cap() const { return tower_->cap(); }

    const ComponentSpace& component(GradePair g) const;
    std::size_t component_dim(GradePair g) const { return component(g).dim(); }

    // q is a level-m vector (a ring vector when m = 0), p likewise at level n.
    Vec join(int m, const Vec& q, int n, const Vec& p) const;
    // Structure constants of the grade product.
    const Vec& mul_basis(GradePair g1, std::size_t a, GradePair g2, std::size_t b) const;

private:
    explicit ToeplitzRing(SystemPtr sys, int cap);
    Vec product(GradePair g1, std::size_t a, GradePair g2, std::size_t b) const;

    std::unique_ptr<TensorTower> tower_;
    mutable std::recursive_mutex mu_;
    mutable std::map<GradePair, ComponentSpace> comps_;
    mutable std::map<std::pair<GradePair, GradePair>, std::vector<std::vector<Vec>>> tables_;
};

using RingPtr = std::shared_ptr<const ToeplitzRing>;

class ToeplitzElement {
public:
    ToeplitzElement() = default;
    explicit ToeplitzElement(RingPtr ring) : ring_(std::move(ring)) {}

    const RingPtr& ring() const { return ring_; }
    const std::map<GradePair, Vec>& components() const { return comps_; }
    void add_component(GradePair g, const Vec& v, const Rational& coef = 1);
    const Vec* component(GradePair g) const;

    bool is_zero() const { return comps_.empty(); }  // components are kept nonzero
    int degree() const;  // max level over the support, -1 when zero
    std::vector<int> z_degrees() const;

    ToeplitzElement operator+(const ToeplitzElement& o) const;
    ToeplitzElement operator-(const ToeplitzElement& o) const;
    ToeplitzElement operator*(const ToeplitzElement& o) const;
    ToeplitzElement scaled(const Rational& s) const;
    bool operator==(const ToeplitzElement& o) const;

private:
    void same_ring(const ToeplitzElement& o) const;
    RingPtr ring_;
    std::map<GradePair, Vec> comps_;
};

enum class Kind { R, Q, P };

ToeplitzElement embed(const RingPtr& ring, Kind kind, const Vec& x);
ToeplitzElement embed_n(const RingPtr& ring, Side side, int level, const Vec& x);
ToeplitzElement embed_module(const RingPtr& ring, const ModuleElement& x);
ToeplitzElement basis_element(const RingPtr& ring, GradePair g, std::size_t i);

ToeplitzElement toeplitz_mul(const ToeplitzElement& a, const ToeplitzElement& b);
ToeplitzElement grade_project(const ToeplitzElement& x, GradePair g);
ToeplitzElement z_project(const ToeplitzElement& x, int k);

// Matrix images of the basis elements of R, Q and P.
struct Representation {
    std::size_t dim = 0;
    std::vector<Matrix> sigma;
    std::vector<Matrix> t;
    std::vector<Matrix> s;
};

ValidationReport validate_representation(const RSystem& sys, const Representation& rep);
Matrix evaluate(const ToeplitzElement& x, const Representation& rep);  // throws InvalidRepresentation
Matrix evaluate_unchecked(const ToeplitzElement& x, const Representation& rep);
// T^m(q) for a basis vector of Q^m, S^n(p) likewise
Matrix rep_t_power(const TensorTower& tw, const Representation& rep, int m, std::size_t q);
Matrix rep_s_power(const TensorTower& tw, const Representation& rep, int n, std::size_t p);

// Block matrices on Q^0 (+) ... (+) Q^N.
struct FockSpace {
    int cutoff = 0;
    std::vector<std::size_t> offset;  // offset[k] of level k, offset[N+1] = total
    std::size_t total() const { return offset.back(); }
};

FockSpace fock_space(const TensorTower& tw, int cutoff);
Matrix fock_creator(const TensorTower& tw, int cutoff, std::size_t q);      // T_q
Matrix fock_annihilator(const TensorTower& tw, int cutoff, std::size_t p);  // S_p
Matrix fock_diagonal(const TensorTower& tw, int cutoff, const Vec& r);      // phi_inf(r)
Matrix fock_matrix(const ToeplitzElement& x, int cutoff);
// Rows/columns of levels <= k, for comparisons restricted to the exact part.
Matrix fock_restrict(const Matrix& m, const FockSpace& fs, int k);

struct ZeroCheck {
    bool component_zero = true;
    std::optional<bool> fock_zero;  // present when the Fock test is valid
};

bool fock_is_faithful(const TensorTower& tw);  // right non-degenerate and (FS)
ZeroCheck toeplitz_zero_check(const ToeplitzElement& x);
bool toeplitz_is_zero(const ToeplitzElement& x);

} // namespace cpr
