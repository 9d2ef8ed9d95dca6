#pragma once

#include "cpr/exactlin.hpp"
#include "cpr/tensorpow.hpp"

#include <optional>
#include <vector>

namespace cpr {

// A right-module endomorphism of Q^n, as a matrix on the balanced basis,
// optionally with an adjoint on P^n.
struct LinOp {
    int level = 1;
    Matrix t;
    std::optional<Matrix> adjoint;
};

// theta_{q,p}(x) = q . psi_n(p (x) x), with adjoint y -> psi_n(y (x) q) . p
LinOp theta(const TensorTower& tw, int n, const Vec& q, const Vec& p);
LinOp theta(const TensorTower& tw, const ModuleElement& q, const ModuleElement& p);
// The mirrored operator on P^n: y -> psi_n(y (x) q) . p
Matrix theta_p(const TensorTower& tw, int n, const Vec& p, const Vec& q);

// Delta(r): left multiplication on Q^n; its adjoint Gamma(r) is right
// multiplication on P^n.
LinOp delta(const TensorTower& tw, const Vec& r, int n = 1);
Matrix gamma(const TensorTower& tw, const Vec& r, int n = 1);
// T on Q^(n-1)  ->  T (x) 1_Q on Q^n
Matrix tensor_extend(const TensorTower& tw, int n_minus_1, const Matrix& t);

// Span of theta over all basis pairs, inside the flattened matrix space.
// Generators are indexed q_index * dim(P^n) + p_index.
struct FiniteRankSpace {
    int level = 1;
    Side acts_on = Side::Q;
    std::size_t module_dim = 0;
    Subspace span;
};

FiniteRankSpace finite_rank_space(const TensorTower& tw, int n = 1, Side acts_on = Side::Q);
// Coefficients c with T = sum c[i*dp+j] theta_{q_i,p_j}, if T is finite rank.
std::optional<Vec> theta_decompose(const TensorTower& tw, int n, const Matrix& t);
// Same for operators on P^n written as sum c[j*dq+i] of y -> psi(y (x) q_i) p_j.
std::optional<Vec> theta_p_decompose(const TensorTower& tw, int n, const Matrix& s);

struct FsReport {
    bool q_side = false;  // id_Q in F_P(Q)
    bool p_side = false;  // id_P in F_Q(P)
    bool holds() const { return q_side && p_side; }
    std::optional<Vec> theta_certificate;  // coefficients as in theta_decompose
    std::optional<Vec> delta_certificate;  // coefficients as in theta_p_decompose
};

FsReport check_fs(const TensorTower& tw, int n = 1);

struct CanonicalIdeals {
    Subspace ker_delta;
    Subspace delta_inv_f;
    Subspace ker_perp;
    Subspace j_max;
    bool j_max_faithful = false;  // j_max ∩ ker Delta == 0
};

Subspace ker_delta(const TensorTower& tw);
Subspace delta_inverse_f(const TensorTower& tw);
// {x : x y = y x = 0 for all y in s}
Subspace two_sided_annihilator(const StructuredRing& ring, const Subspace& s);
CanonicalIdeals canonical_ideals(const TensorTower& tw);  // throws FsViolation

struct AdjointSolution {
    Matrix s;
    bool unique = true;
};

// Solves psi_n(p (x) T q) = psi_n(S p (x) q) for S.
std::optional<AdjointSolution> solve_adjoint(const TensorTower& tw, int n, const Matrix& t);

// Does T commute with the right R-action on Q^n?
bool is_right_linear(const TensorTower& tw, int n, const Matrix& t);

} // namespace cpr
